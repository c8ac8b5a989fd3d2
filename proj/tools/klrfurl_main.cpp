// klrfurl: construct unfurlings from KLR parameter polynomials and spectra,
// and machine-verify the furling axioms, the Cartan column sums, the KLR
// defining relations, and the isomorphism nu at finite truncation.

#include "klrfurl/completion.hpp"
#include "klrfurl/fixtures.hpp"
#include "klrfurl/klr_rep.hpp"

#include <fstream>
#include <iostream>

#include "CLI11.hpp"

using namespace klrfurl;

namespace {

nlohmann::json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open " + path);
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw parse_error("bad JSON in " + path + ": " + e.what());
    }
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw parse_error("cannot write " + path);
    out << text;
}

void emit_report(const Report& rep, const std::string& path) {
    std::string text = rep.to_json().dump(2) + "\n";
    if (path.empty())
        std::cout << text;
    else
        write_text(path, text);
}

struct Inputs {
    std::string fixture, pack_path, spectra_path, datum_path;
};

struct Loaded {
    ParamPack pack;
    Spectra spectra;
    bool has_spectra = false;
};

Loaded load_inputs(const Inputs& in, bool need_spectra) {
    Loaded L{ParamPack{}, Spectra{}, false};
    if (!in.fixture.empty()) {
        Fixture f = get_fixture(in.fixture);
        L.pack = f.pack;
        L.spectra = f.spectra;
        L.has_spectra = true;
        return L;
    }
    if (in.pack_path.empty()) throw parse_error("need --pack or --fixture");
    L.pack = pack_from_file_json(read_json(in.pack_path));
    if (!in.datum_path.empty()) {
        CartanDatum d = CartanDatum::from_json(read_json(in.datum_path));
        L.pack.datum = d;  // explicit datum overrides the embedded one
    }
    if (!in.spectra_path.empty()) {
        L.spectra = Spectra::from_json(read_json(in.spectra_path), L.pack.datum, L.pack.field);
        L.has_spectra = true;
    }
    if (need_spectra && !L.has_spectra) throw parse_error("need --spectra or --fixture");
    return L;
}

void add_input_opts(CLI::App* cmd, Inputs& in, bool spectra) {
    cmd->add_option("--fixture", in.fixture, "use a shipped fixture instead of input files");
    cmd->add_option("--pack", in.pack_path, "parameter pack JSON (includes field and datum)");
    cmd->add_option("--datum", in.datum_path, "Cartan datum JSON (overrides the pack's datum)");
    if (spectra) cmd->add_option("--spectra", in.spectra_path, "spectra JSON");
}

int run(int argc, char** argv) {
    CLI::App app{"exact unfurlings of Cartan data from KLR parameter polynomials"};
    app.require_subcommand(1);

    // ---- fixtures ----
    auto* cmd_fx = app.add_subcommand("fixtures", "emit a shipped fixture as JSON files");
    std::string fx_name, fx_dir = ".";
    cmd_fx->add_option("name", fx_name, "fixture name (or 'list')")->required();
    cmd_fx->add_option("--out-dir", fx_dir, "output directory");

    // ---- cartan ----
    auto* cmd_ca = app.add_subcommand("cartan", "Cartan matrix and symmetrizers of a valued graph");
    std::string ca_graph, ca_dot, ca_report;
    cmd_ca->add_option("--graph", ca_graph, "valued graph JSON")->required();
    cmd_ca->add_option("--dot", ca_dot, "write DOT");
    cmd_ca->add_option("--report", ca_report, "write report JSON (default stdout)");

    // ---- validate-params ----
    auto* cmd_vp = app.add_subcommand("validate-params", "check the parameter pack invariants");
    Inputs vp_in;
    std::string vp_report;
    add_input_opts(cmd_vp, vp_in, false);
    cmd_vp->add_option("--report", vp_report, "write report JSON (default stdout)");

    // ---- unfurl ----
    auto* cmd_un = app.add_subcommand("unfurl", "build the unfurled graph from a pack and complete spectra");
    Inputs un_in;
    std::string un_out, un_dot, un_report, un_map, un_base;
    add_input_opts(cmd_un, un_in, true);
    cmd_un->add_option("--out", un_out, "write unfurled graph JSON");
    cmd_un->add_option("--dot", un_dot, "write DOT");
    cmd_un->add_option("--map-out", un_map, "write the projection graph map JSON");
    cmd_un->add_option("--base-out", un_base, "write the base (pack) graph JSON");
    cmd_un->add_option("--report", un_report, "write report JSON (default stdout)");

    // ---- complete-spectra ----
    auto* cmd_cs = app.add_subcommand("complete-spectra", "close spectra under the root correspondence");
    Inputs cs_in;
    int cs_max_iter = 10;
    std::string cs_out, cs_report;
    add_input_opts(cmd_cs, cs_in, true);
    cmd_cs->add_option("--max-iter", cs_max_iter, "maximum closure rounds");
    cmd_cs->add_option("--out", cs_out, "write completed spectra JSON");
    cmd_cs->add_option("--report", cs_report, "write report JSON (default stdout)");

    // ---- furl-check ----
    auto* cmd_fc = app.add_subcommand("furl-check", "test a graph map for the furling property");
    std::string fc_dom, fc_cod, fc_map, fc_report;
    cmd_fc->add_option("--domain", fc_dom, "domain valued graph JSON")->required();
    cmd_fc->add_option("--codomain", fc_cod, "codomain valued graph JSON")->required();
    cmd_fc->add_option("--map", fc_map, "graph map JSON")->required();
    cmd_fc->add_option("--report", fc_report, "write report JSON (default stdout)");

    // ---- verify-klr ----
    auto* cmd_vk = app.add_subcommand("verify-klr", "verify the KLR defining relations on the polynomial module");
    Inputs vk_in;
    int vk_n = 2, vk_deg = 4, vk_samples = 64;
    std::uint64_t vk_seed = 1;
    std::string vk_labels, vk_report;
    add_input_opts(cmd_vk, vk_in, false);
    cmd_vk->add_option("-n", vk_n, "strand count");
    cmd_vk->add_option("--deg", vk_deg, "monomial degree bound");
    cmd_vk->add_option("--labels", vk_labels, "label tuples, e.g. \"1,2,1;2,2,1\"");
    cmd_vk->add_option("--seed", vk_seed, "sampling seed (recorded in the report)");
    cmd_vk->add_option("--samples", vk_samples, "label sample count for n > 3");
    cmd_vk->add_option("--report", vk_report, "write report JSON (default stdout)");

    // ---- verify-nu ----
    auto* cmd_vn = app.add_subcommand("verify-nu", "verify the isomorphism nu at certified truncation");
    Inputs vn_in;
    int vn_n = 2, vn_prec = 2, vn_extra = 0;
    std::string vn_components = "all", vn_report;
    std::uint64_t vn_seed = 1;
    add_input_opts(cmd_vn, vn_in, true);
    cmd_vn->add_option("-n", vn_n, "strand count");
    cmd_vn->add_option("--precision", vn_prec, "target certified per-strand precision N_out");
    cmd_vn->add_option("--components", vn_components, "all | sample:K");
    cmd_vn->add_option("--extra-work", vn_extra, "pad the working precision (monotonicity experiments)");
    cmd_vn->add_option("--seed", vn_seed, "recorded in the report");
    cmd_vn->add_option("--report", vn_report, "write report JSON (default stdout)");

    // ---- sigma-check ----
    auto* cmd_sg = app.add_subcommand("sigma-check", "roots-of-unity automorphism and quotient consistency");
    Inputs sg_in;
    long sg_d = 0;
    std::string sg_report;
    add_input_opts(cmd_sg, sg_in, false);
    cmd_sg->add_option("-d", sg_d, "the order d = lcm(d_i); default computed from the datum");
    cmd_sg->add_option("--report", sg_report, "write report JSON (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 4;
    }

    if (cmd_fx->parsed()) {
        if (fx_name == "list") {
            for (auto& n : fixture_names()) std::cout << n << "\n";
            return 0;
        }
        Fixture f = get_fixture(fx_name);
        write_text(fx_dir + "/datum.json", f.pack.datum.to_json().dump(2) + "\n");
        write_text(fx_dir + "/pack.json", pack_file_json(f.pack).dump(2) + "\n");
        write_text(fx_dir + "/spectra.json", f.spectra.to_json(f.pack.datum).dump(2) + "\n");
        CompletenessResult comp = is_complete(f.spectra, f.pack);
        if (comp.complete) {
            UnfurledGraph g = build_unfurled(f.pack, f.spectra);
            write_text(fx_dir + "/expected_unfurled.json", g.graph.to_json().dump(2) + "\n");
        }
        std::cout << "wrote fixture '" << fx_name << "' to " << fx_dir << "\n";
        return 0;
    }

    if (cmd_ca->parsed()) {
        ValuedGraph g = ValuedGraph::from_json(read_json(ca_graph));
        CartanDatum cd = cartan_matrix(g);
        Report rep;
        rep.meta["graph"] = ca_graph;
        auto& c = rep.add("cartan matrix computed", true);
        c.details["datum"] = cd.to_json();
        if (!ca_dot.empty()) write_text(ca_dot, g.to_dot());
        emit_report(rep, ca_report);
        return 0;
    }

    if (cmd_vp->parsed()) {
        Loaded L = load_inputs(vp_in, false);
        Report rep = validate_pack(L.pack);
        emit_report(rep, vp_report);
        return rep.pass() ? 0 : 1;
    }

    if (cmd_un->parsed()) {
        Loaded L = load_inputs(un_in, true);
        CompletenessResult comp = is_complete(L.spectra, L.pack);
        Report rep;
        auto& c = rep.add("spectra complete", comp.complete);
        if (!comp.complete) {
            c.details["witnesses"] = ojson::array();
            for (auto& w : comp.witnesses) {
                ojson item;
                item["i"] = L.pack.datum.vertices[static_cast<std::size_t>(w.i)];
                item["u"] = w.u.to_json().dump();
                item["j"] = L.pack.datum.vertices[static_cast<std::size_t>(w.j)];
                item["u_prime"] = w.uprime.to_json().dump();
                c.details["witnesses"].push_back(item);
            }
            emit_report(rep, un_report);
            return 2;
        }
        UnfurledGraph g = build_unfurled(L.pack, L.spectra);
        FurlingResult fr = verify_unfurl_furling(g);
        rep.add("projection is a furling with column sums", fr.ok);
        rep.meta["vertices"] = g.graph.vertices.size();
        rep.meta["edges"] = g.graph.edges.size();
        if (!un_out.empty()) write_text(un_out, g.graph.to_json().dump(2) + "\n");
        if (!un_dot.empty()) write_text(un_dot, g.graph.to_dot());
        if (!un_map.empty()) write_text(un_map, g.proj.to_json().dump(2) + "\n");
        if (!un_base.empty()) write_text(un_base, g.base.to_json().dump(2) + "\n");
        emit_report(rep, un_report);
        return rep.pass() ? 0 : 1;
    }

    if (cmd_cs->parsed()) {
        Loaded L = load_inputs(cs_in, true);
        Report rep;
        Spectra closed = complete_closure(L.spectra, L.pack, cs_max_iter);  // throws on no-stabilization
        std::size_t total = 0;
        for (auto& e : closed.entries) total += e.size();
        auto& c = rep.add("closure stabilized", true);
        c.details["entries"] = total;
        if (!cs_out.empty()) write_text(cs_out, closed.to_json(L.pack.datum).dump(2) + "\n");
        emit_report(rep, cs_report);
        return 0;
    }

    if (cmd_fc->parsed()) {
        ValuedGraph dom = ValuedGraph::from_json(read_json(fc_dom));
        ValuedGraph cod = ValuedGraph::from_json(read_json(fc_cod));
        GraphMap f = GraphMap::from_json(read_json(fc_map), dom, cod);
        FurlingResult fur = is_furling(f);
        FurlingResult hom = furling_hom_check(f);
        Report rep;
        rep.add("is_furling", fur.ok);
        rep.merge(fur.report);
        rep.merge(hom.report);
        emit_report(rep, fc_report);
        return rep.pass() ? 0 : 1;
    }

    if (cmd_vk->parsed()) {
        Loaded L = load_inputs(vk_in, false);
        RelationOptions opt;
        opt.degree_bound = vk_deg;
        opt.seed = vk_seed;
        opt.sample_count = vk_samples;
        if (!vk_labels.empty()) {
            for (std::size_t pos = 0; pos < vk_labels.size();) {
                std::size_t semi = vk_labels.find(';', pos);
                std::string tup = vk_labels.substr(pos, semi == std::string::npos ? std::string::npos : semi - pos);
                IdempotentLabel lab;
                for (std::size_t p2 = 0; p2 < tup.size();) {
                    std::size_t comma = tup.find(',', p2);
                    std::string name = tup.substr(p2, comma == std::string::npos ? std::string::npos : comma - p2);
                    lab.push_back(L.pack.datum.index_of(name));
                    if (comma == std::string::npos) break;
                    p2 = comma + 1;
                }
                if (static_cast<int>(lab.size()) != vk_n) throw parse_error("label tuple arity mismatch: " + tup);
                opt.labels.push_back(lab);
                if (semi == std::string::npos) break;
                pos = semi + 1;
            }
        }
        Report rep = verify_relations(L.pack, vk_n, opt);
        emit_report(rep, vk_report);
        return rep.pass() ? 0 : 1;
    }

    if (cmd_vn->parsed()) {
        Loaded L = load_inputs(vn_in, true);
        UnfurledGraph g = build_unfurled(L.pack, L.spectra);
        IsoOptions opt;
        opt.n = vn_n;
        opt.n_out = vn_prec;
        opt.extra_work = vn_extra;
        opt.seed = vn_seed;
        if (vn_components.rfind("sample:", 0) == 0)
            opt.sample_components = std::stoi(vn_components.substr(7));
        Report rep = verify_iso(L.pack, g, opt);
        rep.meta["seed"] = vn_seed;
        emit_report(rep, vn_report);
        return rep.pass() ? 0 : 1;
    }

    if (cmd_sg->parsed()) {
        Loaded L = load_inputs(sg_in, false);
        long d = sg_d;
        if (d == 0) {
            mpz_class l = 1;
            for (auto& dv : L.pack.datum.d) l = mpz_lcm_(l, dv.get_num());
            d = l.get_si();
        }
        SigmaResult sr = sigma_automorphism(L.pack, d);
        emit_report(sr.report, sg_report);
        return sr.ok ? 0 : 1;
    }

    return 4;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const parse_error& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 4;
    } catch (const field_error& e) {
        std::cerr << "field error: " << e.what() << "\n";
        return 3;
    } catch (const precondition_error& e) {
        std::cerr << "precondition failed: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
