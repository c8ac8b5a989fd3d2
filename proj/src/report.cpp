#include "klrfurl/report.hpp"

namespace klrfurl {

ojson Report::to_json() const {
    ojson j;
    j["pass"] = pass();
    if (!meta.empty()) j["meta"] = meta;
    j["checks"] = ojson::array();
    for (auto& c : checks) {
        ojson e;
        e["name"] = c.name;
        e["pass"] = c.pass;
        if (!c.details.empty()) e["details"] = c.details;
        j["checks"].push_back(e);
    }
    return j;
}

std::string Report::summary() const {
    std::size_t bad = 0;
    for (auto& c : checks)
        if (!c.pass) ++bad;
    return std::to_string(checks.size() - bad) + "/" + std::to_string(checks.size()) + " checks passed";
}

}  // namespace klrfurl
