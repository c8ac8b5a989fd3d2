#include "klrfurl/fixtures.hpp"

namespace klrfurl {

namespace {

Spectra plain_spectra(const CartanDatum& datum, const std::vector<std::vector<Scalar>>& us) {
    Spectra s;
    s.entries.resize(datum.vertices.size());
    for (std::size_t i = 0; i < us.size(); ++i)
        for (auto& u : us[i]) s.entries[i].push_back({u, u});
    s.validate(datum);
    return s;
}

Fixture make_a2_geometric() {
    Fixture f;
    f.name = "a2-geometric";
    f.description = "A2 quiver 1->2 with geometric parameters over Q; U = {1,3} gives the trivial double cover";
    f.field = FieldSpec::rationals();
    ValuedGraph quiver = ValuedGraph::trivially_valued({"1", "2"}, {{"1", "2"}});
    f.pack = geometric_pack(quiver, f.field);
    Scalar one = Scalar::from_int(f.field, 1), three = Scalar::from_int(f.field, 3);
    f.spectra = plain_spectra(f.pack.datum, {{one, three}, {one, three}});
    return f;
}

Fixture make_a3_geometric() {
    Fixture f;
    f.name = "a3-geometric";
    f.description = "A3 path quiver 1->2->3 with geometric parameters over Q";
    f.field = FieldSpec::rationals();
    ValuedGraph quiver = ValuedGraph::trivially_valued({"1", "2", "3"}, {{"1", "2"}, {"2", "3"}});
    f.pack = geometric_pack(quiver, f.field);
    Scalar one = Scalar::from_int(f.field, 1);
    f.spectra = plain_spectra(f.pack.datum, {{one}, {one}, {one}});
    return f;
}

CartanDatum sp4_datum() {
    CartanDatum d;
    d.vertices = {"1", "2"};
    d.d = {mpq_class(1), mpq_class(2)};
    d.c = {{2, -2}, {-1, 2}};
    d.validate();
    return d;
}

Fixture make_sp4() {
    Fixture f;
    f.name = "sp4";
    f.description = "sp4: Q12 = u^2 - v with d = (1,2) over Q; spectra {2,-2},{4} unfurl to an A3 path";
    f.field = FieldSpec::rationals();
    f.pack = standard_pack(sp4_datum(), f.field);
    Scalar two = Scalar::from_int(f.field, 2);
    Spectra s;
    s.entries.resize(2);
    s.entries[0].push_back({two, two});
    s.entries[0].push_back({-two, -two});
    s.entries[1].push_back({two * two, two});  // u = 4 with designated root 2
    s.validate(f.pack.datum);
    f.spectra = s;
    return f;
}

Fixture make_cycle3(const std::string& name, const FieldPtr& field, const Scalar& q,
                    const std::vector<std::vector<Scalar>>& us, const std::string& desc) {
    Fixture f;
    f.name = name;
    f.description = desc;
    f.field = field;
    ValuedGraph quiver = ValuedGraph::trivially_valued({"0", "1", "2"}, {{"0", "1"}, {"1", "2"}, {"2", "0"}});
    CartanDatum datum = cartan_matrix(quiver);
    ParamPack pk;
    pk.datum = datum;
    pk.field = field;
    for (int i = 0; i < 3; ++i) {
        int j = (i + 1) % 3;
        MPoly p(2, field);
        p.add_term({1, 0}, q);
        p.add_term({0, 1}, -Scalar::one(field));
        pk.P[{i, j}] = p;  // P_{i,i+1} = q u - v, P_{i+1,i} = 1
        ScalarMultiset ms;
        ms.add(q.inv(), 1);
        pk.coarse[{i, j}] = ms;
        pk.coarse[{j, i}] = {};
    }
    f.pack = pk;
    f.spectra = plain_spectra(datum, us);
    return f;
}

Fixture make_cycle3_zeta6() {
    FieldPtr K = FieldSpec::cyclotomic(6);
    Scalar z = Scalar::zeta(K);
    std::vector<std::vector<Scalar>> us(3);
    for (int i = 0; i < 3; ++i) {
        Scalar zi = z.pow(i);
        us[static_cast<std::size_t>(i)] = {zi, -zi};
    }
    return make_cycle3("cycle3-zeta6", K, z, us,
                       "3-cycle with q = zeta_6 over Q(zeta_6); U_i = zeta^i {1,-1} gives one 6-cycle");
}

Fixture make_cycle3_q2() {
    FieldPtr K = FieldSpec::rationals();
    std::vector<std::vector<Scalar>> us(3);
    us[0] = {Scalar::one(K)};
    return make_cycle3("cycle3-q2", K, Scalar::from_int(K, 2), us,
                       "3-cycle with q = 2 over Q; the closure of U_0 = {1} never stabilizes");
}

Fixture make_sp4_rou() {
    Fixture f;
    f.name = "sp4-rou";
    f.description = "sp4 roots-of-unity setting over Q(zeta_4): U_1 = {1,-1}, U_2 = {1}, d = 2";
    f.field = FieldSpec::cyclotomic(4);
    f.pack = standard_pack(sp4_datum(), f.field);
    Scalar one = Scalar::one(f.field);
    Spectra s;
    s.entries.resize(2);
    s.entries[0].push_back({one, one});
    s.entries[0].push_back({-one, -one});
    s.entries[1].push_back({one, one});  // designated sqrt(1) = 1
    s.validate(f.pack.datum);
    f.spectra = s;
    return f;
}

Fixture make_g2_rou() {
    Fixture f;
    f.name = "g2-rou";
    f.description = "G2-type datum c12 = -3, c21 = -1 over Q(zeta_3): U_1 = mu_3, U_2 = {1}, d = 3";
    f.field = FieldSpec::cyclotomic(3);
    CartanDatum d;
    d.vertices = {"1", "2"};
    d.d = {mpq_class(1), mpq_class(3)};
    d.c = {{2, -3}, {-1, 2}};
    d.validate();
    f.pack = standard_pack(d, f.field);
    Scalar z = Scalar::zeta(f.field), one = Scalar::one(f.field);
    Spectra s;
    s.entries.resize(2);
    s.entries[0].push_back({one, one});
    s.entries[0].push_back({z, z});
    s.entries[0].push_back({z * z, z * z});
    s.entries[1].push_back({one, one});  // designated cube root of 1
    s.validate(f.pack.datum);
    f.spectra = s;
    return f;
}

Fixture make_single_vertex() {
    Fixture f;
    f.name = "single-vertex";
    f.description = "one vertex, d = 1, no parameters; U = {1,-1}: the disconnected-cover baseline";
    f.field = FieldSpec::rationals();
    CartanDatum d;
    d.vertices = {"i"};
    d.d = {mpq_class(1)};
    d.c = {{2}};
    f.pack.datum = d;
    f.pack.field = f.field;
    Scalar one = Scalar::one(f.field);
    f.spectra = plain_spectra(d, {{one, -one}});
    return f;
}

}  // namespace

std::vector<std::string> fixture_names() {
    return {"a2-geometric", "a3-geometric", "sp4", "cycle3-zeta6", "cycle3-q2", "sp4-rou", "g2-rou", "single-vertex"};
}

Fixture get_fixture(const std::string& name) {
    if (name == "a2-geometric") return make_a2_geometric();
    if (name == "a3-geometric") return make_a3_geometric();
    if (name == "sp4") return make_sp4();
    if (name == "cycle3-zeta6") return make_cycle3_zeta6();
    if (name == "cycle3-q2") return make_cycle3_q2();
    if (name == "sp4-rou") return make_sp4_rou();
    if (name == "g2-rou") return make_g2_rou();
    if (name == "single-vertex") return make_single_vertex();
    throw parse_error("unknown fixture: " + name + " (available: a2-geometric, a3-geometric, sp4, cycle3-zeta6, "
                      "cycle3-q2, sp4-rou, g2-rou, single-vertex)");
}

nlohmann::json pack_file_json(const ParamPack& pack) {
    nlohmann::json j = pack.to_json();
    j["field"] = field_to_json(pack.field);
    return j;
}

ParamPack pack_from_file_json(const nlohmann::json& j) {
    FieldPtr f = j.contains("field") ? field_from_json(j.at("field")) : FieldSpec::rationals();
    return ParamPack::from_json(j, f);
}

}  // namespace klrfurl
