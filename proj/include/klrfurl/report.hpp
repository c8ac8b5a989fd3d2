#pragma once

// Structured machine-first check reports. Serialization is deterministic:
// insertion order is preserved and no wall-clock data is recorded.

#include <string>
#include <vector>

#include "json.hpp"

namespace klrfurl {

using ojson = nlohmann::ordered_json;

struct Check {
    std::string name;
    bool pass = true;
    ojson details = ojson::object();
};

struct Report {
    std::vector<Check> checks;
    ojson meta = ojson::object();

    bool pass() const {
        for (auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
    Check& add(const std::string& name, bool ok) {
        checks.push_back(Check{name, ok, ojson::object()});
        return checks.back();
    }
    void merge(const Report& o, const std::string& prefix = "") {
        for (auto& c : o.checks) {
            checks.push_back(c);
            if (!prefix.empty()) checks.back().name = prefix + c.name;
        }
    }
    ojson to_json() const;
    std::string summary() const;
};

}  // namespace klrfurl
