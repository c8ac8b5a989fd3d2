#pragma once

// The KLR algebra acting on its polynomial representation
//   y_k . f e_i = z_k f e_i
//   psi_k . f e_i = (f^{(k,k+1)} - f)/(z_{k+1} - z_k) e_i          (i_k = i_{k+1})
//                 = P_{i_{k+1} i_k}(z_k, z_{k+1}) f^{(k,k+1)} e_{i^{(k,k+1)}}
// and the machine verification of the defining relations as operator
// identities on monomials up to a degree bound.

#include "klrfurl/params.hpp"

#include <cstdint>
#include <optional>
#include <variant>

namespace klrfurl {

using IdempotentLabel = std::vector<int>;  // entries index datum.vertices

struct Letter {
    enum Kind { Dot, Crossing } kind;
    int k;  // 1-based strand index
};

struct Word {
    IdempotentLabel start;
    std::vector<Letter> letters;  // algebra order: letters.back() acts first
};

struct KLRElement {
    std::vector<std::pair<Scalar, Word>> terms;

    static KLRElement word(const Scalar& coeff, Word w);
    KLRElement& operator+=(const KLRElement& o);
};

// finitely supported label -> polynomial vector
using PolyVec = std::map<IdempotentLabel, MPoly>;

struct RepContext {
    const ParamPack& pack;
    int n;  // strand count
};

PolyVec act_letter(const RepContext& ctx, const Letter& letter, const PolyVec& v);
PolyVec act_idempotent(const IdempotentLabel& label, const PolyVec& v);
PolyVec act(const RepContext& ctx, const KLRElement& el, const PolyVec& v);

bool polyvec_equal(const PolyVec& a, const PolyVec& b);

// grading: deg y_k e = 2 d_{i_k}, deg psi_k e = -d_{i_k} c_{i_k i_{k+1}}, deg e = 0
std::optional<long> degree(const RepContext& ctx, const KLRElement& el);

struct RelationOptions {
    int degree_bound = 4;
    std::vector<IdempotentLabel> labels;  // empty: exhaustive for n<=3, sampled above
    std::uint64_t seed = 1;
    int sample_count = 64;  // label samples when not exhaustive
};

// verify relation families (dot slides, nilHecke, bigon, braids) on every
// monomial of total degree <= degree_bound
Report verify_relations(const ParamPack& pack, int n, const RelationOptions& opt);

}  // namespace klrfurl
