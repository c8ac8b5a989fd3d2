#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "klrfurl/completion.hpp"
#include "klrfurl/fixtures.hpp"

#include <random>

using namespace klrfurl;

namespace {

struct Setup {
    Fixture fx;
    UnfurledGraph unf;
    Setup(const std::string& name) : fx(get_fixture(name)), unf(build_unfurled(fx.pack, fx.spectra)) {}
    CompletionCtx ctx(int n, int N, Side side = Side::Completed) const {
        return CompletionCtx{&fx.pack, &unf, n, N, side};
    }
};

MPoly tvar(const CompletionCtx& c, int k) {
    return MPoly::var(static_cast<unsigned>(c.n), c.field(), static_cast<unsigned>(k - 1));
}

}  // namespace

TEST_CASE("decompose: N = 1 is evaluation, N = 2 is first-order Taylor data") {
    Setup s("single-vertex");  // U = {1,-1}, d = 1
    const FieldPtr& K = s.fx.field;
    {
        CompletionCtx c = s.ctx(1, 1);
        MPoly z = MPoly::var(1, K, 0);
        MPoly f = z * z * z + MPoly::constant(1, Scalar::from_int(K, 2));  // z^3 + 2
        auto comps = decompose(c, {0}, f, s.fx.spectra);
        REQUIRE(comps.size() == 2);
        // vertex order: (i,1) = 0, (i,-1) = 1
        CHECK(comps.at({0}) == MPoly::constant(1, Scalar::from_int(K, 3)));    // f(1)
        CHECK(comps.at({1}) == MPoly::constant(1, Scalar::from_int(K, 1)));    // f(-1)
    }
    {
        CompletionCtx c = s.ctx(1, 2);
        MPoly z = MPoly::var(1, K, 0);
        auto comps = decompose(c, {0}, z, s.fx.spectra);
        // z = 1 + t at u=1 and -1 + t at u=-1
        CHECK(comps.at({0}) == MPoly::constant(1, Scalar::one(K)) + z);
        CHECK(comps.at({1}) == MPoly::constant(1, -Scalar::one(K)) + z);
    }
}

TEST_CASE("CRT idempotents: sum to one, orthogonal, and reassemble random vectors") {
    FieldPtr K = FieldSpec::rationals();
    std::vector<Scalar> us = {Scalar::one(K), -Scalar::one(K), Scalar::from_int(K, 3)};
    const int N = 3;
    up::Poly M = {Scalar::one(K)};
    for (auto& u : us) {
        up::Poly f = {-u, Scalar::one(K)};
        for (int t = 0; t < N; ++t) M = up::mul(M, f);
    }
    std::vector<up::Poly> es;
    for (auto& u : us) es.push_back(crt_idempotent(us, u, N));
    up::Poly sum;
    for (auto& e : es) sum = up::add(sum, e);
    REQUIRE(up::deg(sum) == 0);
    CHECK(sum[0].is_one());
    for (std::size_t a = 0; a < es.size(); ++a)
        for (std::size_t b = 0; b < es.size(); ++b) {
            up::Poly prod = up::divmod(up::mul(es[a], es[b]), M).second;
            if (a == b)
                CHECK(up::sub(prod, es[a]).empty());
            else
                CHECK(up::is_zero(prod));
        }
    // reassembly of random vectors: sum_u e_u * f == f (mod M)
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<long> coef(-4, 4);
    for (int t = 0; t < 10; ++t) {
        up::Poly f;
        for (int i = 0; i < 8; ++i) f.push_back(Scalar::from_int(K, coef(rng)));
        up::trim(f);
        up::Poly acc;
        for (auto& e : es) acc = up::add(acc, up::divmod(up::mul(e, f), M).second);
        up::Poly fr = up::divmod(f, M).second;
        CHECK(up::sub(acc, fr).empty());
    }
}

TEST_CASE("dth_root: d = 1 collapses to u + t") {
    Setup s("single-vertex");
    CompletionCtx c = s.ctx(1, 4);
    MPoly ser = dth_root_series(c, {0}, 1);  // u = 1, d = 1
    CHECK(ser == MPoly::constant(1, Scalar::one(c.field())) + tvar(c, 1));
}

TEST_CASE("dth_root: d = 2, u = 4, root 2, N = 3: the frozen binomial series") {
    Setup s("sp4");
    // component on strand (2,4): vertex index of (2@4)
    int v24 = s.unf.vert_index(1, Scalar::from_int(s.fx.field, 4));
    REQUIRE(v24 >= 0);
    CompletionCtx c = s.ctx(1, 3);
    EigenLabel j = {v24};
    MPoly T = dth_root_series(c, j, 1);
    // T = 2 + t/4 - t^2/64  ==  2 (1 + t/8 - t^2/128)
    CHECK(T.coeff({0}) == Scalar::from_int(c.field(), 2));
    CHECK(T.coeff({1}) == Scalar::from_mpq(c.field(), mpq_class(1, 4)));
    CHECK(T.coeff({2}) == Scalar::from_mpq(c.field(), mpq_class(-1, 64)));
    // T^2 = 4 + t exactly mod t^3
    MPoly T2 = c.truncate(T * T);
    CHECK(T2 == MPoly::constant(1, Scalar::from_int(c.field(), 4)) + tvar(c, 1));
    // (T - u^{1/d})^N = 0 on the component
    MPoly nil = T - MPoly::constant(1, Scalar::from_int(c.field(), 2));
    MPoly pw = nil;
    for (int t = 1; t < 3; ++t) pw = c.truncate(pw * nil);
    CHECK(pw.is_zero());
}

TEST_CASE("a_element on the sp4 component ((1,2),(2,4)): unit, inverse, eq:Pii at N = 4") {
    Setup s("sp4");
    const FieldPtr& K = s.fx.field;
    int va = s.unf.vert_index(0, Scalar::from_int(K, 2));
    int vb = s.unf.vert_index(1, Scalar::from_int(K, 4));
    REQUIRE(va >= 0);
    REQUIRE(vb >= 0);
    CompletionCtx c = s.ctx(2, 4);
    EigenLabel j = {va, vb};
    MPoly A = a_element(c, j, 1);
    // exactly one matching fine root (a = 1), one non-matching (a = -1):
    // A = 2 (y_1 + y_2^{1/2}) with scalar part 2 (2 + 2) = 8
    CHECK(A.coeff({0, 0}) == Scalar::from_int(K, 8));
    MPoly Ainv = unit_inverse(c, A);
    CHECK(c.truncate(A * Ainv) == MPoly::constant(2, Scalar::one(K)));
    // eq:Pii: P12(y1,y2) eps = A * prod_matching ((u^{-1}y)^{1/d} - (u'^{-1}y')^{1/d'})
    MPoly z1 = MPoly::constant(2, Scalar::from_int(K, 2)) + tvar(c, 1);
    MPoly z2 = MPoly::constant(2, Scalar::from_int(K, 4)) + tvar(c, 2);
    MPoly lhs = c.truncate(eval_bivar(s.fx.pack.p_poly(0, 1), z1, z2));
    // matching factor series
    MPoly g1 = dth_root_series(c, j, 1).scaled(Scalar::from_mpq(K, mpq_class(1, 2)));   // (u^{-1}y)^{1/1}
    MPoly g2 = dth_root_series(c, j, 2).scaled(Scalar::from_mpq(K, mpq_class(1, 2)));   // (u'^{-1}y')^{1/2}
    MPoly rhs = c.truncate(A * (g1 - g2));
    CHECK(lhs == rhs);
}

TEST_CASE("psi operator fans: equal label, distinct eigenvalues") {
    Setup s("single-vertex");
    CompletionCtx c = s.ctx(2, 4);
    // component ((i,1),(i,-1))
    EigenLabel j = {0, 1};
    CompOp ps = op_psi(c, j, 1);
    CHECK(ps.blocks.size() == 2);
    CHECK(ps.blocks.count(j) == 1);
    CHECK(ps.blocks.count(EigenLabel{1, 0}) == 1);
    CHECK(ps.dd == 0);
    // the bigon on equal base labels: bare psi^2 eps = 0 (both strands i)
    CompOp ps2 = op_compose(c, OpFactory([&](const EigenLabel& t) { return op_psi(c, t, 1); }), ps);
    OpCompare cmpr = op_equal(c, ps2, op_zero(c, j), 4);
    CHECK(cmpr.equal);
    // while nu(psi~)^2 = 1: the unfurled bigon with no edges has Q = 1
    CompOp np = nu_psi(c, j, 1);
    CompOp np2 = op_compose(c, OpFactory([&](const EigenLabel& t) { return nu_psi(c, t, 1); }), np);
    OpCompare cmpr2 = op_equal(c, np2, op_identity(c, j), 4);
    CHECK(cmpr2.equal);
}

TEST_CASE("verify_iso: single-vertex two-eigenvalue case at N_out = 3") {
    Setup s("single-vertex");
    IsoOptions opt;
    opt.n = 2;
    opt.n_out = 3;
    Report rep = verify_iso(s.fx.pack, s.unf, opt);
    INFO(rep.to_json().dump(1));
    CHECK(rep.pass());
    // every identity certified at the target per-strand precision
    for (auto& c : rep.checks) {
        if (!c.details.contains("certified_strand")) continue;
        CHECK(c.details["certified_strand"].get<int>() >= 3);
    }
}

TEST_CASE("verify_iso: sp4 roots-of-unity case over Q(zeta_4) at N_out = 2") {
    Setup s("sp4-rou");
    IsoOptions opt;
    opt.n = 2;
    opt.n_out = 2;
    Report rep = verify_iso(s.fx.pack, s.unf, opt);
    CHECK(rep.pass());
}

TEST_CASE("precision monotonicity: extra working precision never flips results") {
    Setup s("single-vertex");
    IsoOptions opt;
    opt.n = 2;
    opt.n_out = 2;
    Report a = verify_iso(s.fx.pack, s.unf, opt);
    opt.extra_work = 2;
    Report b = verify_iso(s.fx.pack, s.unf, opt);
    REQUIRE(a.checks.size() == b.checks.size());
    for (std::size_t i = 0; i < a.checks.size(); ++i) {
        CHECK(a.checks[i].name == b.checks[i].name);
        CHECK(a.checks[i].pass == b.checks[i].pass);
        if (a.checks[i].details.contains("certified_strand"))
            CHECK(b.checks[i].details["certified_strand"].get<int>() >=
                  a.checks[i].details["certified_strand"].get<int>());
    }
}
