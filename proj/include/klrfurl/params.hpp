#pragma once

// KLR parameter polynomials P_ij and their derived data: Q_ij, the constants
// p_ij / t_ij, the exponents g_ij / h_ij, and the coarse/fine root multisets
// that drive unfurling.

#include "klrfurl/cartan.hpp"
#include "klrfurl/mpoly.hpp"
#include "klrfurl/report.hpp"
#include "klrfurl/scalar.hpp"

#include <map>
#include <optional>

namespace klrfurl {

// multiset of scalars with multiplicities, canonically ordered by key
struct ScalarMultiset {
    std::vector<std::pair<Scalar, unsigned>> items;

    void add(const Scalar& s, unsigned mult = 1);
    unsigned total() const;
    bool operator==(const ScalarMultiset& o) const;
    nlohmann::json to_json() const;
};

struct ParamPack {
    CartanDatum datum;
    FieldPtr field;
    // P_ij for ordered pairs i != j; absent entries mean the constant 1.
    // Bivariate polynomials: 2 variables (u, v).
    std::map<std::pair<int, int>, MPoly> P;

    // supplied coarse roots (verified) or solved on demand
    std::map<std::pair<int, int>, ScalarMultiset> coarse;
    // supplied fine roots (A_ij), verified against coarse roots
    std::map<std::pair<int, int>, ScalarMultiset> fine;

    const MPoly& p_poly(int i, int j) const;    // P_ij (constant 1 when absent)
    MPoly q_poly(int i, int j) const;           // Q_ij(u,v) = P_ij(u,v) P_ji(v,u)
    Scalar p_const(int i, int j) const;         // p_ij = P_ij(1,0)
    Scalar t_const(int i, int j) const;         // t_ij = Q_ij(1,0)
    long g(int i, int j) const;                 // gcd(-c_ij, -c_ji)
    long h(int i, int j) const;                 // -c_ij / g_ij

    // the canonical absolutely valued graph of the pack: one edge i -> j per
    // nonconstant P_ij, with m_e = deg P_ij(x^{d_i}, 0)
    ValuedGraph pack_graph() const;

    nlohmann::json to_json() const;
    static ParamPack from_json(const nlohmann::json& j, const FieldPtr& f);
};

// all invariant checks; the pack is usable only if every check passes
Report validate_pack(const ParamPack& pack);

// the multiset of roots of P_ij(x^{1/h_ij}, 1); verified when supplied,
// solved over the unit group otherwise (throws field_error: cannot-factor)
ScalarMultiset coarse_roots(const ParamPack& pack, int i, int j);

// fine roots A_ij: the (d_i h_ij)-th roots of the coarse roots
ScalarMultiset fine_roots(const ParamPack& pack, int i, int j);

// Q_ij = +-(u^{h_ij} - v^{h_ji})^{g_ij} via P_ij = (u^{h_ij}-v^{h_ji})^{g_ij}, P_ji = +-1
ParamPack standard_pack(const CartanDatum& datum, const FieldPtr& field,
                        const std::map<std::pair<int, int>, int>& signs = {});

// P_ij = (u - v)^{#edges i->j} for a trivially valued quiver
ParamPack geometric_pack(const ValuedGraph& quiver, const FieldPtr& field);

}  // namespace klrfurl
