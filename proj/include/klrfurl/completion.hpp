#pragma once

// Truncated completions of KLR algebras. A component is the local ring
// K[t_1..t_n]/(t_k^{N}) attached to an eigenvalue sequence; operators are
// block matrices between components with certified-precision bookkeeping.
// One engine serves both sides of nu: the completed algebra R^ acts with
// strands expanded at their eigenvalues, the unfurled algebra acts with
// geometric parameters and strands expanded at 0.

#include "klrfurl/klr_rep.hpp"
#include "klrfurl/unfurl.hpp"
#include "klrfurl/upoly.hpp"

#include <map>
#include <optional>

namespace klrfurl {

using EigenLabel = std::vector<int>;  // entries index UnfurledGraph::verts

struct Matrix {
    int rows = 0, cols = 0;
    std::vector<Scalar> a;  // row-major
    Scalar& at(int r, int c) { return a[static_cast<std::size_t>(r * cols + c)]; }
    const Scalar& at(int r, int c) const { return a[static_cast<std::size_t>(r * cols + c)]; }
    static Matrix zero(int r, int c, const FieldPtr& f);
    static Matrix identity(int n, const FieldPtr& f);
    friend Matrix operator*(const Matrix& x, const Matrix& y);
    friend Matrix operator+(const Matrix& x, const Matrix& y);
    Matrix scaled(const Scalar& c) const;
    bool is_zero() const;
};

enum class Side { Completed, UnfurledSide };

struct CompletionCtx {
    const ParamPack* pack = nullptr;
    const UnfurledGraph* unf = nullptr;
    int n = 2;       // strand count
    int N = 3;       // working per-strand truncation order
    Side side = Side::Completed;

    const FieldPtr& field() const { return pack->field; }
    const UnfVertex& vert(int v) const { return unf->verts[static_cast<std::size_t>(v)]; }
    long d_of(int v) const;                       // d_{i(v)}
    unsigned geo_mult(int v, int w) const;        // #edges v -> w in the unfurled graph

    // ring basis: monomials with every exponent < N, lexicographic
    std::vector<Expo> basis() const;
    int basis_index(const Expo& e) const;
    int dim() const;

    // expansion point of strand k on component j
    Scalar expansion(const EigenLabel& j, int k) const;

    MPoly truncate(const MPoly& p) const;
    // multiplication-by-element matrix on the component ring
    Matrix mult_matrix(const MPoly& elt) const;
};

// operator with a fixed source component; fan of target blocks
struct CompOp {
    EigenLabel src;
    std::map<EigenLabel, Matrix> blocks;
    int dd = 0;  // divided-difference steps (total-degree precision loss)

    CompOp scaled(const Scalar& c) const;
};

CompOp op_zero(const CompletionCtx& ctx, const EigenLabel& j);
CompOp op_identity(const CompletionCtx& ctx, const EigenLabel& j);
CompOp op_mult(const CompletionCtx& ctx, const EigenLabel& j, const MPoly& elt);
CompOp op_y(const CompletionCtx& ctx, const EigenLabel& j, int k);      // z_k resp. sans-z_k
CompOp op_psi(const CompletionCtx& ctx, const EigenLabel& j, int k);

CompOp op_add(const CompletionCtx& ctx, const CompOp& a, const CompOp& b);
// a after b (matrix product per matching component)
CompOp op_compose(const CompletionCtx& ctx, const CompOp& a_of /*built per component*/, const CompOp& b);
using OpFactory = std::function<CompOp(const EigenLabel&)>;
CompOp op_compose(const CompletionCtx& ctx, const OpFactory& a, const CompOp& b);

// truncated binomial series for the d-th root of y_k on a component
MPoly dth_root_series(const CompletionCtx& ctx, const EigenLabel& j, int k);
CompOp op_dth_root(const CompletionCtx& ctx, const EigenLabel& j, int k);

// A_k and its inverse (multiplication operators); i_k != i_{k+1} required
MPoly a_element(const CompletionCtx& ctx, const EigenLabel& j, int k);
CompOp op_a(const CompletionCtx& ctx, const EigenLabel& j, int k);
CompOp op_a_inv(const CompletionCtx& ctx, const EigenLabel& j, int k);

// inverse of a unit element of the component ring (geometric series)
MPoly unit_inverse(const CompletionCtx& ctx, const MPoly& elt);

// nu on generators (Completed-side operators)
CompOp nu_e(const CompletionCtx& ctx, const EigenLabel& j);
CompOp nu_y(const CompletionCtx& ctx, const EigenLabel& j, int k);
CompOp nu_psi(const CompletionCtx& ctx, const EigenLabel& j, int k);

// nu^{-1} on generators (UnfurledSide operators)
CompOp nu_inv_e(const CompletionCtx& ctx, const EigenLabel& j);
CompOp nu_inv_y(const CompletionCtx& ctx, const EigenLabel& j, int k);
CompOp nu_inv_psi(const CompletionCtx& ctx, const EigenLabel& j, int k);

// compare two operator fans; outputs restricted to the sound region:
// per-strand prefix P when no divided differences occurred, else the
// total-degree region N - max(dd)
struct OpCompare {
    bool equal = true;
    int certified_total = 0;    // coefficients certified below this total degree
    int certified_strand = 0;   // per-strand prefix implied by the above
    std::string witness;
};
OpCompare op_equal(const CompletionCtx& ctx, const CompOp& a, const CompOp& b, int strand_target);

// eigenspace decomposition of an exact polynomial (Taylor re-expansion)
std::map<EigenLabel, MPoly> decompose(const CompletionCtx& ctx, const IdempotentLabel& ilabel,
                                      const MPoly& f, const Spectra& spectra);

// univariate CRT idempotent for factor (z-u)^N inside prod_{u' in U}(z-u')^N
up::Poly crt_idempotent(const std::vector<Scalar>& values, const Scalar& u, int N);

struct IsoOptions {
    int n = 2;
    int n_out = 2;            // target certified per-strand precision
    int extra_work = 0;       // monotonicity experiments: pad N_work
    std::optional<int> sample_components;  // check only the first K components
    std::uint64_t seed = 1;
};

// the full nu verification: relation suite on nu-images, roundtrips both
// ways, eq:Pii; every identity run at its own sound working precision
Report verify_iso(const ParamPack& pack, const UnfurledGraph& unf, const IsoOptions& opt);

}  // namespace klrfurl
