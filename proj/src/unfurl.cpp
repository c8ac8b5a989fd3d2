#include "klrfurl/unfurl.hpp"

#include <algorithm>
#include <set>

namespace klrfurl {

void Spectra::validate(const CartanDatum& datum) const {
    if (entries.size() != datum.vertices.size()) throw precondition_error("spectra size mismatch with datum");
    for (std::size_t i = 0; i < entries.size(); ++i) {
        long di = mpz_class(datum.d[i].get_num()).get_si();
        if (datum.d[i].get_den() != 1) throw precondition_error("spectra require integer symmetrizers");
        std::set<std::string> seen;
        for (auto& e : entries[i]) {
            if (e.u.is_zero()) throw precondition_error("spectrum values must be nonzero");
            if (!seen.insert(e.u.key()).second)
                throw precondition_error("duplicate spectrum value at vertex " + datum.vertices[i]);
            if (!(e.root.pow(di) == e.u))
                throw precondition_error("designated root fails root^d = u at vertex " + datum.vertices[i]);
        }
    }
}

bool Spectra::contains(int i, const Scalar& u) const { return find(i, u) != nullptr; }

const SpectrumEntry* Spectra::find(int i, const Scalar& u) const {
    for (auto& e : entries[static_cast<std::size_t>(i)])
        if (e.u == u) return &e;
    return nullptr;
}

nlohmann::json Spectra::to_json(const CartanDatum& datum) const {
    nlohmann::json j = nlohmann::json::object();
    for (std::size_t i = 0; i < entries.size(); ++i) {
        nlohmann::json arr = nlohmann::json::array();
        for (auto& e : entries[i]) arr.push_back(nlohmann::json{{"u", e.u.to_json()}, {"root", e.root.to_json()}});
        j[datum.vertices[i]] = arr;
    }
    return j;
}

Spectra Spectra::from_json(const nlohmann::json& j, const CartanDatum& datum, const FieldPtr& f) {
    try {
        Spectra s;
        s.entries.resize(datum.vertices.size());
        for (std::size_t i = 0; i < datum.vertices.size(); ++i) {
            if (!j.contains(datum.vertices[i])) continue;
            for (auto& ej : j.at(datum.vertices[i])) {
                SpectrumEntry e;
                if (ej.is_object() && ej.contains("u")) {
                    e.u = Scalar::from_json(f, ej.at("u"));
                    e.root = ej.contains("root") ? Scalar::from_json(f, ej.at("root")) : e.u;
                } else {
                    e.u = Scalar::from_json(f, ej);
                    e.root = e.u;
                }
                s.entries[i].push_back(e);
            }
        }
        s.validate(datum);
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw parse_error(std::string("bad spectra: ") + e.what());
    }
}

// ------------------------------------------------------------- completeness

namespace {

// all u' with Q_ij(u, u') = 0, via the coarse factorization
// Q_ij = t_ij prod_{gamma in A_ij (+) B_ij} (u^{h_ij} - gamma u'^{h_ji})
std::vector<Scalar> q_partner_values(const ParamPack& pack, int i, int j, const Scalar& u) {
    std::vector<Scalar> out;
    if (pack.datum.c[i][j] == 0) return out;
    ScalarMultiset gammas = coarse_roots(pack, i, j);
    for (auto& [beta_inv, mult] : coarse_roots(pack, j, i).items) gammas.add(beta_inv.inv(), mult);
    long hij = pack.h(i, j), hji = pack.h(j, i);
    for (auto& [gamma, mult] : gammas.items) {
        Scalar rhs = u.pow(hij) / gamma;
        RootSolve rs = kth_roots(rhs, static_cast<unsigned>(hji));
        if (!rs.solved)
            throw field_error("unsolvable-root-equation: cannot solve u'^" + std::to_string(hji) +
                              " = " + rhs.str() + " within the stored unit group");
        for (auto& r : rs.roots) {
            bool dup = false;
            for (auto& o : out) dup = dup || o == r;
            if (!dup) out.push_back(r);
        }
    }
    return out;
}

std::string scalar_vertex_name(const CartanDatum& datum, int i, const Scalar& u) {
    return datum.vertices[static_cast<std::size_t>(i)] + "@" + u.str();
}

}  // namespace

CompletenessResult is_complete(const Spectra& spectra, const ParamPack& pack) {
    spectra.validate(pack.datum);
    CompletenessResult res;
    const int n = static_cast<int>(pack.datum.vertices.size());
    for (int i = 0; i < n; ++i) {
        for (auto& entry : spectra.entries[static_cast<std::size_t>(i)]) {
            for (int j = 0; j < n; ++j) {
                if (j == i || pack.datum.c[i][j] == 0) continue;
                for (auto& up : q_partner_values(pack, i, j, entry.u)) {
                    if (!spectra.contains(j, up)) {
                        res.complete = false;
                        res.witnesses.push_back({i, entry.u, j, up});
                    }
                }
            }
        }
    }
    return res;
}

Spectra complete_closure(const Spectra& spectra, const ParamPack& pack, int max_iter) {
    Spectra cur = spectra;
    for (int round = 0; round < max_iter; ++round) {
        CompletenessResult r = is_complete(cur, pack);
        if (r.complete) return cur;
        for (auto& w : r.witnesses) {
            if (cur.contains(w.j, w.uprime)) continue;
            // designate a root: canonical minimum by key among the exact d_j-th roots
            long dj = mpz_class(pack.datum.d[static_cast<std::size_t>(w.j)].get_num()).get_si();
            SpectrumEntry e;
            e.u = w.uprime;
            if (dj == 1) {
                e.root = w.uprime;
            } else {
                RootSolve rs = kth_roots(w.uprime, static_cast<unsigned>(dj));
                if (!rs.solved || rs.roots.empty())
                    throw field_error("complete_closure: no designated d-th root available for " + w.uprime.str() +
                                      "; supply it in the spectra file");
                e.root = rs.roots[0];
                for (auto& cand : rs.roots)
                    if (cand.key() < e.root.key()) e.root = cand;
            }
            cur.entries[static_cast<std::size_t>(w.j)].push_back(e);
        }
    }
    throw precondition_error("no-stabilization: closure did not stabilize within " + std::to_string(max_iter) +
                             " rounds (the true closure may be infinite)");
}

// ----------------------------------------------------------- unfurled graph

int UnfurledGraph::vert_index(int i, const Scalar& u) const {
    for (std::size_t k = 0; k < verts.size(); ++k)
        if (verts[k].i == i && verts[k].u == u) return static_cast<int>(k);
    return -1;
}

UnfurledGraph build_unfurled(const ParamPack& pack, const Spectra& spectra) {
    CompletenessResult comp = is_complete(spectra, pack);
    if (!comp.complete) {
        std::string w = "incomplete-spectra:";
        for (auto& x : comp.witnesses)
            w += " (" + pack.datum.vertices[static_cast<std::size_t>(x.i)] + "," + x.u.str() + ") -> (" +
                 pack.datum.vertices[static_cast<std::size_t>(x.j)] + "," + x.uprime.str() + ")";
        throw precondition_error(w);
    }
    UnfurledGraph g;
    g.base = pack.pack_graph();
    const int n = static_cast<int>(pack.datum.vertices.size());
    for (int i = 0; i < n; ++i)
        for (auto& e : spectra.entries[static_cast<std::size_t>(i)]) {
            UnfVertex v{i, e.u, e.root, scalar_vertex_name(pack.datum, i, e.u)};
            g.verts.push_back(v);
        }
    g.graph.vertices.clear();
    for (auto& v : g.verts) {
        g.graph.vertices.push_back(v.name);
        g.graph.d[v.name] = 1;
        g.proj.vmap[v.name] = pack.datum.vertices[static_cast<std::size_t>(v.i)];
    }
    // edges: (i,u) -> (i',u') once per coarse root alpha (with multiplicity)
    // such that u^{h_ii'} = alpha u'^{h_i'i}
    int eid = 0;
    for (auto& vsrc : g.verts) {
        for (auto& vtgt : g.verts) {
            if (vsrc.i == vtgt.i) continue;
            if (pack.datum.c[vsrc.i][vtgt.i] == 0) continue;
            const MPoly& p = pack.p_poly(vsrc.i, vtgt.i);
            if (p.total_degree() == 0) continue;
            long hij = pack.h(vsrc.i, vtgt.i), hji = pack.h(vtgt.i, vsrc.i);
            Scalar lhs = vsrc.u.pow(hij);
            std::string base_edge;
            for (auto& be : g.base.edges)
                if (be.src == pack.datum.vertices[static_cast<std::size_t>(vsrc.i)] &&
                    be.tgt == pack.datum.vertices[static_cast<std::size_t>(vtgt.i)])
                    base_edge = be.id;
            for (auto& [alpha, mult] : coarse_roots(pack, vsrc.i, vtgt.i).items) {
                if (!(lhs == alpha * vtgt.u.pow(hji))) continue;
                for (unsigned t = 0; t < mult; ++t) {
                    ValuedGraph::Edge e;
                    e.id = "u" + std::to_string(eid++);
                    e.src = vsrc.name;
                    e.tgt = vtgt.name;
                    e.eta = e.nu = 1;
                    e.m = mpq_class(1);
                    g.graph.edges.push_back(e);
                    g.proj.emap[e.id] = base_edge;
                    g.provenance[e.id] = alpha;
                }
            }
        }
    }
    g.graph.validate();
    g.proj.domain = g.graph;
    g.proj.codomain = g.base;
    g.proj.validate();
    return g;
}

FurlingResult verify_unfurl_furling(const UnfurledGraph& g) {
    FurlingResult res = is_furling(g.proj);
    FurlingResult col = check_cartan_column(g.proj);
    res.ok = res.ok && col.ok;
    res.report.merge(col.report);
    return res;
}

// ------------------------------------------------------------------- sigma

SigmaResult sigma_automorphism(const ParamPack& pack, long dlcm) {
    SigmaResult out;
    const auto& dat = pack.datum;
    // d must be lcm of the d_i
    mpz_class l = 1;
    for (auto& dv : dat.d) {
        if (dv.get_den() != 1) throw precondition_error("sigma_automorphism needs integer symmetrizers");
        l = mpz_lcm_(l, dv.get_num());
    }
    if (l != dlcm) throw precondition_error("sigma_automorphism: d must equal lcm(d_i) = " + l.get_str());

    const FieldPtr& K = pack.field;
    Scalar zeta = primitive_root(K, static_cast<unsigned>(dlcm));

    // every coarse root must be a root of unity
    const int n = static_cast<int>(dat.vertices.size());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j || dat.c[i][j] == 0) continue;
            for (auto& [alpha, mult] : coarse_roots(pack, i, j).items)
                if (!root_of_unity_order(alpha))
                    throw field_error("sigma_automorphism: coarse root " + alpha.str() + " is not a root of unity");
        }

    // U_i = mu_{d/d_i} with canonical zeta-power designated roots:
    // u = zeta^{d_i k} gets root zeta^k
    Spectra sp;
    sp.entries.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        long di = mpz_class(dat.d[static_cast<std::size_t>(i)].get_num()).get_si();
        long cnt = dlcm / di;
        for (long k = 0; k < cnt; ++k) {
            SpectrumEntry e;
            e.root = zeta.pow(k);
            e.u = e.root.pow(di);
            bool dup = false;
            for (auto& x : sp.entries[static_cast<std::size_t>(i)]) dup = dup || x.u == e.u;
            if (!dup) sp.entries[static_cast<std::size_t>(i)].push_back(e);
        }
    }
    out.spectra = sp;
    out.unfurled = build_unfurled(pack, sp);

    // sigma: (i,u) -> (i, zeta^{d_i} u); edges carry their coarse-root
    // certificate, so the edge permutation matches source/target transport
    Automorphism s;
    for (auto& v : out.unfurled.verts) {
        long di = mpz_class(dat.d[static_cast<std::size_t>(v.i)].get_num()).get_si();
        Scalar nu = zeta.pow(di) * v.u;
        int t = out.unfurled.vert_index(v.i, nu);
        if (t < 0) throw precondition_error("sigma image leaves the spectra (internal)");
        s.vperm[v.name] = out.unfurled.verts[static_cast<std::size_t>(t)].name;
    }
    // map each edge to the edge with the same certificate between the image vertices
    std::map<std::string, std::vector<std::string>> bucket;  // (src,tgt,alpha-key) -> ids
    for (auto& e : out.unfurled.graph.edges)
        bucket[e.src + ">" + e.tgt + "#" + out.unfurled.provenance.at(e.id).key()].push_back(e.id);
    std::map<std::string, int> cursor;
    for (auto& e : out.unfurled.graph.edges) {
        std::string key = s.vperm.at(e.src) + ">" + s.vperm.at(e.tgt) + "#" + out.unfurled.provenance.at(e.id).key();
        auto it = bucket.find(key);
        if (it == bucket.end() || cursor[key] >= static_cast<int>(it->second.size()))
            throw precondition_error("sigma is not an edge permutation (internal)");
        s.eperm[e.id] = it->second[static_cast<std::size_t>(cursor[key]++)];
    }
    out.sigma = s;

    // quotient and compare the Cartan matrix with the base datum
    auto [quot, proj] = quotient_by_automorphism(out.unfurled.graph, s);
    out.report.add("sigma is an admissible automorphism", true);
    FurlingResult fr = is_furling(proj);
    out.report.add("projection is a furling", fr.ok);
    out.ok = out.ok && fr.ok;
    CartanDatum qc = cartan_matrix(quot);
    // match rows through the vertex correspondence orbit-rep -> base vertex
    bool same = qc.vertices.size() == dat.vertices.size();
    std::vector<int> to_base(qc.vertices.size(), -1);
    if (same) {
        for (std::size_t a = 0; a < qc.vertices.size(); ++a) {
            int idx = -1;
            for (auto& v : out.unfurled.verts)
                if (v.name == qc.vertices[a]) idx = v.i;
            to_base[a] = idx;
            same = same && idx >= 0;
        }
    }
    if (same)
        for (std::size_t a = 0; a < qc.vertices.size() && same; ++a)
            for (std::size_t b = 0; b < qc.vertices.size() && same; ++b)
                same = qc.c[a][b] == dat.c[static_cast<std::size_t>(to_base[a])][static_cast<std::size_t>(to_base[b])];
    auto& c = out.report.add("quotient Cartan matrix equals base", same);
    if (!same) {
        c.details["quotient"] = qc.to_json();
        c.details["base"] = dat.to_json();
    }
    out.ok = out.ok && same;
    return out;
}

}  // namespace klrfurl
