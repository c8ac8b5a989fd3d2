#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "klrfurl/fixtures.hpp"
#include "klrfurl/params.hpp"

using namespace klrfurl;

namespace {

bool all_pass(const Report& r) { return r.pass(); }

const Check* find_check(const Report& r, const std::string& prefix) {
    for (auto& c : r.checks)
        if (c.name.rfind(prefix, 0) == 0) return &c;
    return nullptr;
}

}  // namespace

TEST_CASE("sp4 standard pack validates; exponents and coarse roots as expected") {
    Fixture f = get_fixture("sp4");
    Report rep = validate_pack(f.pack);
    CHECK(all_pass(rep));
    CHECK(f.pack.g(0, 1) == 1);
    CHECK(f.pack.h(0, 1) == 2);
    CHECK(f.pack.h(1, 0) == 1);
    // P12 = u^2 - v
    MPoly want(2, f.field);
    want.add_term({2, 0}, Scalar::one(f.field));
    want.add_term({0, 1}, -Scalar::one(f.field));
    CHECK(f.pack.p_poly(0, 1) == want);
    CHECK(f.pack.p_poly(1, 0).total_degree() == 0);
    ScalarMultiset a01 = coarse_roots(f.pack, 0, 1);
    REQUIRE(a01.items.size() == 1);
    CHECK(a01.items[0].first == Scalar::one(f.field));
    CHECK(a01.items[0].second == 1);
    CHECK(coarse_roots(f.pack, 1, 0).items.empty());
    // fine roots are the square roots of 1
    ScalarMultiset A01 = fine_roots(f.pack, 0, 1);
    CHECK(A01.total() == 2);
    CHECK(f.pack.p_const(0, 1) == Scalar::one(f.field));
    CHECK(f.pack.t_const(0, 1) == Scalar::one(f.field));
}

TEST_CASE("homogeneity failure is pinpointed: u^2 - v^3 on the sp4 datum") {
    Fixture f = get_fixture("sp4");
    ParamPack bad = f.pack;
    MPoly p(2, f.field);
    p.add_term({2, 0}, Scalar::one(f.field));
    p.add_term({0, 3}, -Scalar::one(f.field));
    bad.P[{0, 1}] = p;
    bad.coarse.clear();
    Report rep = validate_pack(bad);
    CHECK_FALSE(rep.pass());
    const Check* c = find_check(rep, "Q homogeneity (1,2)");
    REQUIRE(c != nullptr);
    CHECK_FALSE(c->pass);
    CHECK(c->details.contains("monomial"));
}

TEST_CASE("geometric A2 pack validates with h = 1 and coarse root 1") {
    Fixture f = get_fixture("a2-geometric");
    CHECK(validate_pack(f.pack).pass());
    CHECK(f.pack.h(0, 1) == 1);
    CHECK(f.pack.h(1, 0) == 1);
    ScalarMultiset a = coarse_roots(f.pack, 0, 1);
    REQUIRE(a.items.size() == 1);
    CHECK(a.items[0].first == Scalar::one(f.field));
}

TEST_CASE("coarse roots of (u-v)^k expand back; solved when not supplied") {
    FieldPtr Q = FieldSpec::rationals();
    ValuedGraph quiver = ValuedGraph::trivially_valued({"1", "2"}, {{"1", "2"}, {"1", "2"}});
    ParamPack pk = geometric_pack(quiver, Q);  // P12 = (u-v)^2
    CHECK(validate_pack(pk).pass());
    pk.coarse.clear();  // force the solver
    ScalarMultiset a = coarse_roots(pk, 0, 1);
    REQUIRE(a.items.size() == 1);
    CHECK(a.items[0].first == Scalar::one(Q));
    CHECK(a.items[0].second == 2);
}

TEST_CASE("standard pack for a G2-type datum") {
    FieldPtr Q = FieldSpec::rationals();
    CartanDatum d;
    d.vertices = {"1", "2"};
    d.d = {mpq_class(1), mpq_class(3)};
    d.c = {{2, -3}, {-1, 2}};
    ParamPack pk = standard_pack(d, Q);
    CHECK(validate_pack(pk).pass());
    CHECK(pk.g(0, 1) == 1);
    CHECK(pk.h(0, 1) == 3);
    MPoly want(2, Q);  // u^3 - v
    want.add_term({3, 0}, Scalar::one(Q));
    want.add_term({0, 1}, -Scalar::one(Q));
    CHECK(pk.p_poly(0, 1) == want);
}

TEST_CASE("standard pack sign table") {
    Fixture f = get_fixture("sp4");
    ParamPack pk = standard_pack(f.pack.datum, f.field, {{{0, 1}, -1}});
    CHECK(pk.p_const(1, 0) == -Scalar::one(f.field));
    CHECK(validate_pack(pk).pass());
}

TEST_CASE("geometric pack rejects nontrivial values; empty quiver gives constant Q") {
    FieldPtr Q = FieldSpec::rationals();
    ValuedGraph g;
    g.vertices = {"1", "2"};
    ValuedGraph::Edge e;
    e.id = "e0";
    e.src = "1";
    e.tgt = "2";
    e.eta = 2;
    e.nu = 1;
    g.edges.push_back(e);
    CHECK_THROWS_AS(geometric_pack(g, Q), precondition_error);

    ValuedGraph empty;
    empty.vertices = {"1", "2"};
    ParamPack pk = geometric_pack(empty, Q);
    CHECK(pk.q_poly(0, 1).total_degree() == 0);
    CHECK(validate_pack(pk).pass());
}

TEST_CASE("Q symmetry holds for every fixture pack") {
    for (auto& name : fixture_names()) {
        Fixture f = get_fixture(name);
        Report rep = validate_pack(f.pack);
        CHECK_MESSAGE(rep.pass(), name);
        const int n = static_cast<int>(f.pack.datum.vertices.size());
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                if (i == j) continue;
                CHECK(f.pack.q_poly(i, j) == f.pack.q_poly(j, i).swapped(0, 1));
            }
    }
}

TEST_CASE("coarse roots re-expand to P(x^{1/h},1)/p exactly") {
    // cycle pack: P = q u - v with q = zeta_6; coarse root 1/q
    Fixture f = get_fixture("cycle3-zeta6");
    ScalarMultiset a = coarse_roots(f.pack, 0, 1);
    REQUIRE(a.items.size() == 1);
    Scalar q = Scalar::zeta(f.field);
    CHECK(a.items[0].first == q.inv());
    // solver agrees when roots are not supplied
    ParamPack p2 = f.pack;
    p2.coarse.clear();
    ScalarMultiset b = coarse_roots(p2, 0, 1);
    CHECK(a == b);
}

TEST_CASE("pack json roundtrip") {
    for (auto& name : {"sp4", "cycle3-zeta6", "g2-rou"}) {
        Fixture f = get_fixture(name);
        nlohmann::json j = pack_file_json(f.pack);
        ParamPack back = pack_from_file_json(j);
        CHECK(back.datum.vertices == f.pack.datum.vertices);
        CHECK(validate_pack(back).pass());
        const int n = static_cast<int>(f.pack.datum.vertices.size());
        for (int i = 0; i < n; ++i)
            for (int jj = 0; jj < n; ++jj)
                if (i != jj) CHECK(back.p_poly(i, jj) == f.pack.p_poly(i, jj));
    }
}

TEST_CASE("pack graph carries the P-degree values") {
    Fixture f = get_fixture("sp4");
    ValuedGraph g = f.pack.pack_graph();
    REQUIRE(g.edges.size() == 1);
    CHECK(g.edges[0].eta == 2);
    CHECK(g.edges[0].nu == 1);
    CHECK(*g.edges[0].m == 2);
    CartanDatum cd = cartan_matrix(g);
    CHECK(cd.c == f.pack.datum.c);
}
