#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "klrfurl/scalar.hpp"

#include <random>

using namespace klrfurl;

TEST_CASE("rational arithmetic canonical forms") {
    FieldPtr Q = FieldSpec::rationals();
    Scalar a = Scalar::from_mpq(Q, mpq_class(1, 2));
    Scalar b = Scalar::from_mpq(Q, mpq_class(1, 3));
    CHECK((a + b) == Scalar::from_mpq(Q, mpq_class(5, 6)));
    CHECK((a - b) == Scalar::from_mpq(Q, mpq_class(1, 6)));
    CHECK((a * b) == Scalar::from_mpq(Q, mpq_class(1, 6)));
    CHECK((a / b) == Scalar::from_mpq(Q, mpq_class(3, 2)));
    CHECK(a.pow(-2) == Scalar::from_int(Q, 4));
    CHECK_THROWS_AS(a / Scalar::zero(Q), field_error);
}

TEST_CASE("cyclotomic(4): zeta^2 = -1") {
    FieldPtr K = FieldSpec::cyclotomic(4);
    Scalar z = Scalar::zeta(K);
    CHECK(z * z == -Scalar::one(K));
    CHECK(z.pow(4) == Scalar::one(K));
    CHECK(z.pow(3) == z.inv());
    CHECK((Scalar::one(K) + z) * (Scalar::one(K) - z) == Scalar::from_int(K, 2));
}

TEST_CASE("cyclotomic(6) reduction and inverse") {
    FieldPtr K = FieldSpec::cyclotomic(6);
    Scalar z = Scalar::zeta(K);
    // Phi_6 = x^2 - x + 1, so z^2 = z - 1
    std::vector<mpq_class> c(3, 0);
    c[2] = 1;
    CHECK(Scalar::cyclotomic_coeffs(K, c) == z - Scalar::one(K));
    CHECK(z.pow(3) == -Scalar::one(K));
    CHECK(z.pow(6) == Scalar::one(K));
    Scalar s = Scalar::from_int(K, 2) + z;
    CHECK(s * s.inv() == Scalar::one(K));
}

TEST_CASE("rational function field reduces (q-1)/(q^2-1) to 1/(q+1)") {
    FieldPtr F = FieldSpec::rational_functions(FieldSpec::rationals(), "q");
    Scalar q = Scalar::variable(F);
    Scalar one = Scalar::one(F);
    Scalar lhs = (q - one) / (q * q - one);
    Scalar rhs = one / (q + one);
    CHECK(lhs == rhs);
    const RatFunPayload* pl = lhs.ratfun();
    REQUIRE(pl != nullptr);
    CHECK(pl->den.size() == 2);  // q + 1, monic
    CHECK(pl->den.back().is_one());
}

TEST_CASE("prime field arithmetic") {
    FieldPtr F = FieldSpec::prime_field(7);
    Scalar three = Scalar::from_int(F, 3);
    CHECK(three * three.inv() == Scalar::one(F));
    CHECK(three.pow(6) == Scalar::one(F));
    CHECK_THROWS_AS(FieldSpec::prime_field(6), precondition_error);
}

TEST_CASE("field mismatch detected") {
    Scalar a = Scalar::one(FieldSpec::rationals());
    Scalar b = Scalar::one(FieldSpec::cyclotomic(4));
    CHECK_THROWS_AS(a + b, field_error);
}

TEST_CASE("primitive_root orders") {
    FieldPtr K6 = FieldSpec::cyclotomic(6);
    CHECK(primitive_root(K6, 6) == Scalar::zeta(K6));
    CHECK(primitive_root(K6, 2) == -Scalar::one(K6));
    CHECK(primitive_root(K6, 3) == Scalar::zeta(K6).pow(2));
    CHECK_THROWS_AS(primitive_root(FieldSpec::cyclotomic(4), 3), field_error);
    for (unsigned k : {1u, 2u, 3u, 6u}) {
        Scalar r = primitive_root(K6, k);
        CHECK(r.pow(k) == Scalar::one(K6));
        for (unsigned j = 1; j < k; ++j) CHECK(r.pow(j) != Scalar::one(K6));
    }
}

TEST_CASE("canonical-form uniqueness on random arithmetic routes") {
    // the same value by two different routes must have identical representations
    std::mt19937_64 rng(12345);
    std::uniform_int_distribution<long> small(-9, 9);
    FieldPtr K = FieldSpec::cyclotomic(6);
    Scalar z = Scalar::zeta(K);
    for (int t = 0; t < 1000; ++t) {
        long a = small(rng), b = small(rng), c = small(rng), d = small(rng);
        Scalar x = Scalar::from_int(K, a) + z * Scalar::from_int(K, b);
        Scalar y = Scalar::from_int(K, c) + z * Scalar::from_int(K, d);
        // route 1: product; route 2: distributed expansion with z^2 = z - 1
        Scalar r1 = x * y;
        Scalar r2 = Scalar::from_int(K, a * c) + z * Scalar::from_int(K, a * d + b * c) +
                    (z - Scalar::one(K)) * Scalar::from_int(K, b * d);
        CHECK(r1 == r2);
        CHECK(r1.key() == r2.key());
    }
}

TEST_CASE("field axioms on random triples (rationals and cyclotomic)") {
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<long> small(-20, 20);
    for (FieldPtr K : {FieldSpec::rationals(), FieldSpec::cyclotomic(5)}) {
        Scalar z = K->kind == FieldKind::Cyclotomic ? Scalar::zeta(K) : Scalar::from_int(K, 1);
        auto rnd = [&] {
            Scalar s = Scalar::from_int(K, small(rng));
            if (K->kind == FieldKind::Cyclotomic) s = s + z.pow(small(rng) % 5) * Scalar::from_int(K, small(rng));
            return s;
        };
        for (int t = 0; t < 200; ++t) {
            Scalar a = rnd(), b = rnd(), c = rnd();
            CHECK((a + b) + c == a + (b + c));
            CHECK((a * b) * c == a * (b * c));
            CHECK(a * (b + c) == a * b + a * c);
            CHECK(a + (-a) == Scalar::zero(K));
            if (!a.is_zero()) CHECK(a * a.inv() == Scalar::one(K));
        }
    }
}

TEST_CASE("kth_roots within the unit group") {
    FieldPtr Q = FieldSpec::rationals();
    RootSolve r = kth_roots(Scalar::from_int(Q, 4), 2);
    REQUIRE(r.solved);
    CHECK(r.roots.size() == 2);
    r = kth_roots(Scalar::from_int(Q, 2), 2);
    REQUIRE(r.solved);  // certified: no rational sqrt(2)
    CHECK(r.roots.empty());
    r = kth_roots(Scalar::from_int(Q, -8), 3);
    REQUIRE(r.solved);
    REQUIRE(r.roots.size() == 1);
    CHECK(r.roots[0] == Scalar::from_int(Q, -2));

    FieldPtr K = FieldSpec::cyclotomic(6);
    Scalar z = Scalar::zeta(K);
    r = kth_roots(z.pow(2), 2);
    REQUIRE(r.solved);
    CHECK(r.roots.size() == 2);  // +-z
    for (auto& x : r.roots) CHECK(x * x == z * z);
    // 2 has no sqrt expressible in the unit group of Q(zeta_6): undecided
    r = kth_roots(Scalar::from_int(K, 2), 2);
    CHECK_FALSE(r.solved);

    FieldPtr F = FieldSpec::rational_functions(Q, "q");
    Scalar q = Scalar::variable(F);
    r = kth_roots(q * q, 2);
    REQUIRE(r.solved);
    CHECK(r.roots.size() == 2);
}

TEST_CASE("root_of_unity_order") {
    FieldPtr K = FieldSpec::cyclotomic(6);
    CHECK(root_of_unity_order(Scalar::zeta(K)) == 6u);
    CHECK(root_of_unity_order(-Scalar::one(K)) == 2u);
    CHECK(root_of_unity_order(Scalar::from_int(K, 2)) == std::nullopt);
}

TEST_CASE("scalar json roundtrip") {
    FieldPtr K = FieldSpec::cyclotomic(4);
    Scalar s = Scalar::zeta(K) * Scalar::from_mpq(K, mpq_class(3, 7)) + Scalar::one(K);
    CHECK(Scalar::from_json(K, s.to_json()) == s);
    FieldPtr Q = FieldSpec::rationals();
    Scalar t = Scalar::from_mpq(Q, mpq_class(-22, 7));
    CHECK(t.to_json().get<std::string>() == "-22/7");
    CHECK(Scalar::from_json(Q, t.to_json()) == t);
    FieldPtr F = FieldSpec::rational_functions(Q, "q");
    Scalar u = (Scalar::variable(F) + Scalar::one(F)) / Scalar::variable(F);
    CHECK(Scalar::from_json(F, u.to_json()) == u);
    CHECK(field_from_json(field_to_json(F))->same(*F));
}
