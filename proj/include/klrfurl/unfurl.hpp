#pragma once

// Spectra and their completeness closure, the unfurled graph with its
// projection furling, and the roots-of-unity automorphism sigma.

#include "klrfurl/cartan.hpp"
#include "klrfurl/params.hpp"

#include <optional>

namespace klrfurl {

struct SpectrumEntry {
    Scalar u;     // nonzero spectrum value
    Scalar root;  // designated d_i-th root, root^{d_i} == u
};

struct Spectra {
    // per base vertex index: entries with designated roots
    std::vector<std::vector<SpectrumEntry>> entries;

    void validate(const CartanDatum& datum) const;
    bool contains(int i, const Scalar& u) const;
    const SpectrumEntry* find(int i, const Scalar& u) const;

    nlohmann::json to_json(const CartanDatum& datum) const;
    static Spectra from_json(const nlohmann::json& j, const CartanDatum& datum, const FieldPtr& f);
};

struct UnfVertex {
    int i;        // base vertex index
    Scalar u;
    Scalar root;  // designated d_i-th root of u
    std::string name;
};

struct UnfurledGraph {
    std::vector<UnfVertex> verts;
    ValuedGraph graph;                       // trivially valued
    ValuedGraph base;                        // the pack graph
    GraphMap proj;                           // graph -> base
    std::map<std::string, Scalar> provenance;  // edge id -> certifying coarse root

    int vert_index(int i, const Scalar& u) const;
};

struct CompletenessWitness {
    int i;
    Scalar u;
    int j;
    Scalar uprime;  // escapes U_j
};

struct CompletenessResult {
    bool complete = true;
    std::vector<CompletenessWitness> witnesses;
};

// Q_ij(u, u') = 0 with u in U_i must imply u' in U_j.
// Throws field_error when a root equation cannot be decided.
CompletenessResult is_complete(const Spectra& spectra, const ParamPack& pack);

// least complete spectra containing the input, if it stabilizes;
// throws precondition_error("no-stabilization ...") otherwise
Spectra complete_closure(const Spectra& spectra, const ParamPack& pack, int max_iter);

// the graph I~ on pairs (i,u), edges from the coarse criterion
// u^{h_ii'} = alpha * u'^{h_i'i}, with multiplicity
UnfurledGraph build_unfurled(const ParamPack& pack, const Spectra& spectra);

// is_furling + check_cartan_column on the projection
FurlingResult verify_unfurl_furling(const UnfurledGraph& g);

struct SigmaResult {
    UnfurledGraph unfurled;
    Automorphism sigma;
    Spectra spectra;
    Report report;
    bool ok = true;
};

// the roots-of-unity setting: U_i = mu_{d/d_i}, sigma(i,u) = (i, zeta^{d_i} u);
// checks admissibility and that the quotient reproduces the base Cartan matrix
SigmaResult sigma_automorphism(const ParamPack& pack, long dlcm);

}  // namespace klrfurl
