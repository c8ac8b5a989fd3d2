// pybind11 module exposing the main operations over JSON-string boundaries:
// fixtures, Cartan matrices, unfurling, spectra closure, and the KLR / nu
// verification suites.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "klrfurl/completion.hpp"
#include "klrfurl/fixtures.hpp"
#include "klrfurl/klr_rep.hpp"

namespace py = pybind11;
using namespace klrfurl;

namespace {

nlohmann::json parse(const std::string& text, const char* what) {
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw parse_error(std::string("bad ") + what + " JSON: " + e.what());
    }
}

std::string fixture_json(const std::string& name) {
    Fixture f = get_fixture(name);
    nlohmann::json j;
    j["name"] = f.name;
    j["description"] = f.description;
    j["datum"] = f.pack.datum.to_json();
    j["pack"] = pack_file_json(f.pack);
    j["spectra"] = f.spectra.to_json(f.pack.datum);
    return j.dump();
}

std::string cartan_matrix_json(const std::string& graph) {
    ValuedGraph g = ValuedGraph::from_json(parse(graph, "graph"));
    return cartan_matrix(g).to_json().dump();
}

std::string validate_params_json(const std::string& pack) {
    ParamPack pk = pack_from_file_json(parse(pack, "pack"));
    return validate_pack(pk).to_json().dump();
}

std::string unfurl_json(const std::string& pack, const std::string& spectra) {
    ParamPack pk = pack_from_file_json(parse(pack, "pack"));
    Spectra sp = Spectra::from_json(parse(spectra, "spectra"), pk.datum, pk.field);
    UnfurledGraph g = build_unfurled(pk, sp);
    FurlingResult fr = verify_unfurl_furling(g);
    nlohmann::json j;
    j["graph"] = g.graph.to_json();
    j["base"] = g.base.to_json();
    j["map"] = g.proj.to_json();
    j["furling_ok"] = fr.ok;
    j["dot"] = g.graph.to_dot();
    return j.dump();
}

std::string complete_spectra_json(const std::string& pack, const std::string& spectra, int max_iter) {
    ParamPack pk = pack_from_file_json(parse(pack, "pack"));
    Spectra sp = Spectra::from_json(parse(spectra, "spectra"), pk.datum, pk.field);
    Spectra closed = complete_closure(sp, pk, max_iter);
    return closed.to_json(pk.datum).dump();
}

std::string verify_klr_json(const std::string& pack, int n, int deg, std::uint64_t seed) {
    ParamPack pk = pack_from_file_json(parse(pack, "pack"));
    RelationOptions opt;
    opt.degree_bound = deg;
    opt.seed = seed;
    return verify_relations(pk, n, opt).to_json().dump();
}

std::string verify_nu_json(const std::string& pack, const std::string& spectra, int n, int precision,
                           int extra_work) {
    ParamPack pk = pack_from_file_json(parse(pack, "pack"));
    Spectra sp = Spectra::from_json(parse(spectra, "spectra"), pk.datum, pk.field);
    UnfurledGraph g = build_unfurled(pk, sp);
    IsoOptions opt;
    opt.n = n;
    opt.n_out = precision;
    opt.extra_work = extra_work;
    return verify_iso(pk, g, opt).to_json().dump();
}

std::string sigma_check_json(const std::string& pack, long d) {
    ParamPack pk = pack_from_file_json(parse(pack, "pack"));
    if (d == 0) {
        mpz_class l = 1;
        for (auto& dv : pk.datum.d) l = mpz_lcm_(l, dv.get_num());
        d = l.get_si();
    }
    SigmaResult sr = sigma_automorphism(pk, d);
    nlohmann::json j;
    j["ok"] = sr.ok;
    j["report"] = sr.report.to_json();
    j["unfurled"] = sr.unfurled.graph.to_json();
    return j.dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "exact unfurlings of Cartan data from KLR parameter polynomials";

    py::register_exception<parse_error>(m, "ParseError", PyExc_ValueError);
    py::register_exception<field_error>(m, "FieldError", PyExc_ArithmeticError);
    py::register_exception<precondition_error>(m, "PreconditionError", PyExc_RuntimeError);

    m.def("fixture_names", &fixture_names, "names of the shipped fixtures");
    m.def("fixture", &fixture_json, py::arg("name"),
          "a shipped fixture as a JSON string with datum, pack and spectra");
    m.def("cartan_matrix", &cartan_matrix_json, py::arg("graph"),
          "Cartan matrix and symmetrizers of a valued graph (JSON in/out)");
    m.def("validate_params", &validate_params_json, py::arg("pack"),
          "parameter-pack invariant report (JSON in/out)");
    m.def("unfurl", &unfurl_json, py::arg("pack"), py::arg("spectra"),
          "build the unfurled graph with projection and furling report");
    m.def("complete_spectra", &complete_spectra_json, py::arg("pack"), py::arg("spectra"),
          py::arg("max_iter") = 10, "close spectra under the root correspondence");
    m.def("verify_klr", &verify_klr_json, py::arg("pack"), py::arg("n") = 2, py::arg("deg") = 4,
          py::arg("seed") = 1, "verify the KLR defining relations on the polynomial module");
    m.def("verify_nu", &verify_nu_json, py::arg("pack"), py::arg("spectra"), py::arg("n") = 2,
          py::arg("precision") = 2, py::arg("extra_work") = 0,
          "verify the isomorphism nu at certified truncation");
    m.def("sigma_check", &sigma_check_json, py::arg("pack"), py::arg("d") = 0,
          "roots-of-unity automorphism and quotient consistency");
}
