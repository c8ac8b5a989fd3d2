#pragma once

// Shipped fixtures mirroring the worked examples: the geometric product
// cover, the 3-cycle with q a root of unity (and the divergent q=2 variant),
// the sp4 / A3 unfurling, the roots-of-unity settings, and a single-vertex
// baseline for the completion checks.

#include "klrfurl/params.hpp"
#include "klrfurl/unfurl.hpp"

namespace klrfurl {

struct Fixture {
    std::string name;
    std::string description;
    FieldPtr field;
    ParamPack pack;      // carries the datum
    Spectra spectra;
};

std::vector<std::string> fixture_names();
Fixture get_fixture(const std::string& name);

// full pack serialization including the field
nlohmann::json pack_file_json(const ParamPack& pack);
ParamPack pack_from_file_json(const nlohmann::json& j);

}  // namespace klrfurl
