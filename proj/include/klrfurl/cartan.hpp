#pragma once

// Cartan data, valued graphs, furling maps and the Cartan column-sum
// identities. All edge/vertex values are exact rationals.

#include "klrfurl/common.hpp"
#include "klrfurl/report.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace klrfurl {

struct CartanDatum {
    std::vector<std::string> vertices;
    std::vector<mpq_class> d;                 // symmetrizers, least positive integers
    std::vector<std::vector<long>> c;         // generalized Cartan matrix

    int index_of(const std::string& v) const;
    void validate() const;  // c_ii=2, c_ij<=0, zero symmetry, d_i c_ij = d_j c_ji
    long cij(int i, int j) const { return c[i][j]; }

    nlohmann::json to_json() const;
    static CartanDatum from_json(const nlohmann::json& j);
};

struct ValuedGraph {
    struct Edge {
        std::string id, src, tgt;
        mpq_class eta, nu;             // relative values
        std::optional<mpq_class> m;    // absolute edge value
    };
    std::vector<std::string> vertices;
    std::vector<Edge> edges;
    std::map<std::string, mpq_class> d;  // absolute vertex values (may be empty)

    int index_of(const std::string& v) const;
    const Edge* edge_by_id(const std::string& id) const;
    bool has_absolute() const;
    void validate() const;  // loops, duplicate ids, unknown endpoints, abs/rel consistency

    static ValuedGraph trivially_valued(std::vector<std::string> verts,
                                        std::vector<std::pair<std::string, std::string>> arrows);

    nlohmann::json to_json() const;
    static ValuedGraph from_json(const nlohmann::json& j);
    std::string to_dot() const;
};

struct GraphMap {
    ValuedGraph domain, codomain;
    std::map<std::string, std::string> vmap;  // vertex assignment
    std::map<std::string, std::string> emap;  // edge assignment

    void validate() const;  // totality + commutes with src/tgt

    nlohmann::json to_json() const;
    static GraphMap from_json(const nlohmann::json& j, ValuedGraph dom, ValuedGraph cod);
};

// relative-consistency check: propagated symmetrizers, least positive
// integers per connected component; throws precondition_error when none exist
std::vector<mpq_class> propagate_symmetrizers(const ValuedGraph& g);

// c_ij = -sum_{e:i->j} eta_e - sum_{e:j->i} nu_e; errors on non-integers
CartanDatum cartan_matrix(const ValuedGraph& g);

ValuedGraph abs_to_rel(const ValuedGraph& g);
ValuedGraph langlands_dual(const ValuedGraph& g);

// furling test per the fiberwise edge-value sums; failures are data
struct FurlingResult {
    bool ok = true;
    Report report;
};
FurlingResult is_furling(const GraphMap& f);

// push absolute values down a furling: d_y = d_x/|fiber|, m summed and
// averaged, then everything scaled by lcm of fiber sizes
ValuedGraph furl_values(const ValuedGraph& x, const GraphMap& f);

// column sums of Lemma lem:Cartan
FurlingResult check_cartan_column(const GraphMap& f);

// bracket identities of the Kac-Moody furling homomorphism (eq:serre1 families)
FurlingResult furling_hom_check(const GraphMap& f);

struct Automorphism {
    std::map<std::string, std::string> vperm;
    std::map<std::string, std::string> eperm;
};

// quotient by an admissible value-preserving automorphism; returns the
// quotient graph with absolute values and the projection map
std::pair<ValuedGraph, GraphMap> quotient_by_automorphism(const ValuedGraph& x, const Automorphism& sigma);

// exact graph isomorphism for small graphs (used by fixtures/tests)
bool graphs_isomorphic(const ValuedGraph& a, const ValuedGraph& b);

}  // namespace klrfurl
