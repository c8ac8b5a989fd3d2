#include "klrfurl/cartan.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>

namespace klrfurl {

// ------------------------------------------------------------- CartanDatum

int CartanDatum::index_of(const std::string& v) const {
    for (std::size_t i = 0; i < vertices.size(); ++i)
        if (vertices[i] == v) return static_cast<int>(i);
    throw precondition_error("unknown vertex: " + v);
}

void CartanDatum::validate() const {
    const std::size_t n = vertices.size();
    if (d.size() != n || c.size() != n) throw precondition_error("Cartan datum size mismatch");
    for (std::size_t i = 0; i < n; ++i) {
        if (d[i] <= 0) throw precondition_error("symmetrizer d must be positive");
        if (c[i].size() != n) throw precondition_error("Cartan matrix not square");
        if (c[i][i] != 2) throw precondition_error("Cartan diagonal entry != 2");
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            if (c[i][j] > 0) throw precondition_error("positive off-diagonal Cartan entry");
            if ((c[i][j] == 0) != (c[j][i] == 0)) throw precondition_error("Cartan zero pattern not symmetric");
            if (d[i] * c[i][j] != d[j] * c[j][i]) throw precondition_error("Cartan matrix not symmetrizable by d");
        }
    }
}

nlohmann::json CartanDatum::to_json() const {
    nlohmann::json j;
    j["vertices"] = vertices;
    nlohmann::json dd = nlohmann::json::object();
    for (std::size_t i = 0; i < vertices.size(); ++i) dd[vertices[i]] = d[i].get_str();
    j["d"] = dd;
    nlohmann::json cc = nlohmann::json::array();
    for (auto& row : c) cc.push_back(row);
    j["cartan"] = cc;
    return j;
}

CartanDatum CartanDatum::from_json(const nlohmann::json& j) {
    try {
        CartanDatum cd;
        cd.vertices = j.at("vertices").get<std::vector<std::string>>();
        for (auto& v : cd.vertices) {
            auto lit = j.at("d").at(v);
            cd.d.push_back(lit.is_string() ? mpq_from_str(lit.get<std::string>()) : mpq_class(lit.get<long>()));
        }
        for (auto& row : j.at("cartan")) cd.c.push_back(row.get<std::vector<long>>());
        cd.validate();
        return cd;
    } catch (const nlohmann::json::exception& e) {
        throw parse_error(std::string("bad Cartan datum: ") + e.what());
    }
}

// -------------------------------------------------------------- ValuedGraph

int ValuedGraph::index_of(const std::string& v) const {
    for (std::size_t i = 0; i < vertices.size(); ++i)
        if (vertices[i] == v) return static_cast<int>(i);
    throw precondition_error("unknown vertex: " + v);
}

const ValuedGraph::Edge* ValuedGraph::edge_by_id(const std::string& id) const {
    for (auto& e : edges)
        if (e.id == id) return &e;
    return nullptr;
}

bool ValuedGraph::has_absolute() const {
    if (d.size() != vertices.size()) return false;
    for (auto& e : edges)
        if (!e.m) return false;
    return true;
}

void ValuedGraph::validate() const {
    std::set<std::string> vs(vertices.begin(), vertices.end());
    if (vs.size() != vertices.size()) throw precondition_error("duplicate vertex names");
    std::set<std::string> ids;
    for (auto& e : edges) {
        if (!ids.insert(e.id).second) throw precondition_error("duplicate edge id: " + e.id);
        if (!vs.count(e.src) || !vs.count(e.tgt)) throw precondition_error("edge endpoint not a vertex: " + e.id);
        if (e.src == e.tgt) throw precondition_error("loop edge not allowed: " + e.id);
        if (e.eta <= 0 || e.nu <= 0) throw precondition_error("edge values must be positive: " + e.id);
    }
    if (has_absolute()) {
        for (auto& [v, dv] : d)
            if (dv <= 0) throw precondition_error("vertex value d must be positive");
        for (auto& e : edges) {
            if (e.eta != *e.m / d.at(e.src) || e.nu != *e.m / d.at(e.tgt))
                throw precondition_error("absolute/relative value mismatch on edge " + e.id);
        }
    }
}

ValuedGraph ValuedGraph::trivially_valued(std::vector<std::string> verts,
                                          std::vector<std::pair<std::string, std::string>> arrows) {
    ValuedGraph g;
    g.vertices = std::move(verts);
    int k = 0;
    for (auto& [s, t] : arrows) {
        Edge e;
        e.id = "e" + std::to_string(k++);
        e.src = s;
        e.tgt = t;
        e.eta = e.nu = 1;
        e.m = mpq_class(1);
        g.edges.push_back(e);
    }
    for (auto& v : g.vertices) g.d[v] = 1;
    return g;
}

nlohmann::json ValuedGraph::to_json() const {
    nlohmann::json j;
    j["vertices"] = vertices;
    j["edges"] = nlohmann::json::array();
    for (auto& e : edges) {
        nlohmann::json je{{"id", e.id}, {"src", e.src}, {"tgt", e.tgt}, {"eta", e.eta.get_str()}, {"nu", e.nu.get_str()}};
        if (e.m) je["m"] = e.m->get_str();
        j["edges"].push_back(je);
    }
    if (!d.empty()) {
        nlohmann::json dd = nlohmann::json::object();
        for (auto& [v, dv] : d) dd[v] = dv.get_str();
        j["d"] = dd;
    }
    return j;
}

ValuedGraph ValuedGraph::from_json(const nlohmann::json& j) {
    try {
        ValuedGraph g;
        g.vertices = j.at("vertices").get<std::vector<std::string>>();
        auto num = [](const nlohmann::json& x) {
            return x.is_string() ? mpq_from_str(x.get<std::string>()) : mpq_class(x.get<long>());
        };
        for (auto& je : j.at("edges")) {
            Edge e;
            e.id = je.at("id").get<std::string>();
            e.src = je.at("src").get<std::string>();
            e.tgt = je.at("tgt").get<std::string>();
            if (je.contains("eta")) e.eta = num(je.at("eta"));
            if (je.contains("nu")) e.nu = num(je.at("nu"));
            if (je.contains("m")) e.m = num(je.at("m"));
            g.edges.push_back(e);
        }
        if (j.contains("d"))
            for (auto& [v, dv] : j.at("d").items()) g.d[v] = num(dv);
        // edges given only absolutely: derive relative values
        if (g.has_absolute()) {
            for (auto& e : g.edges) {
                if (e.eta == 0) e.eta = *e.m / g.d.at(e.src);
                if (e.nu == 0) e.nu = *e.m / g.d.at(e.tgt);
            }
        }
        g.validate();
        return g;
    } catch (const nlohmann::json::exception& e) {
        throw parse_error(std::string("bad graph: ") + e.what());
    }
}

std::string ValuedGraph::to_dot() const {
    std::ostringstream os;
    os << "digraph G {\n";
    for (auto& v : vertices) {
        os << "  \"" << v << "\"";
        auto it = d.find(v);
        if (it != d.end()) os << " [label=\"" << v << " (d=" << it->second.get_str() << ")\"]";
        os << ";\n";
    }
    for (auto& e : edges) {
        os << "  \"" << e.src << "\" -> \"" << e.tgt << "\" [label=\"(" << e.eta.get_str() << ","
           << e.nu.get_str() << ")\"];\n";
    }
    os << "}\n";
    return os.str();
}

// ----------------------------------------------------------------- GraphMap

void GraphMap::validate() const {
    domain.validate();
    codomain.validate();
    std::set<std::string> cod_vs(codomain.vertices.begin(), codomain.vertices.end());
    for (auto& v : domain.vertices) {
        auto it = vmap.find(v);
        if (it == vmap.end()) throw precondition_error("graph map misses vertex " + v);
        if (!cod_vs.count(it->second)) throw precondition_error("vertex image not in codomain: " + it->second);
    }
    for (auto& e : domain.edges) {
        auto it = emap.find(e.id);
        if (it == emap.end()) throw precondition_error("graph map misses edge " + e.id);
        const auto* ce = codomain.edge_by_id(it->second);
        if (!ce) throw precondition_error("edge image not in codomain: " + it->second);
        if (vmap.at(e.src) != ce->src || vmap.at(e.tgt) != ce->tgt)
            throw precondition_error("edge map does not commute with endpoints on " + e.id);
    }
}

nlohmann::json GraphMap::to_json() const {
    nlohmann::json j;
    j["vertex_map"] = vmap;
    j["edge_map"] = emap;
    return j;
}

GraphMap GraphMap::from_json(const nlohmann::json& j, ValuedGraph dom, ValuedGraph cod) {
    try {
        GraphMap f;
        f.domain = std::move(dom);
        f.codomain = std::move(cod);
        f.vmap = j.at("vertex_map").get<std::map<std::string, std::string>>();
        f.emap = j.at("edge_map").get<std::map<std::string, std::string>>();
        f.validate();
        return f;
    } catch (const nlohmann::json::exception& e) {
        throw parse_error(std::string("bad graph map: ") + e.what());
    }
}

// ------------------------------------------------------------- symmetrizers

std::vector<mpq_class> propagate_symmetrizers(const ValuedGraph& g) {
    const std::size_t n = g.vertices.size();
    std::vector<mpq_class> d(n, mpq_class(0));
    std::vector<std::vector<std::pair<int, const ValuedGraph::Edge*>>> adj(n);
    for (auto& e : g.edges) {
        int i = g.index_of(e.src), j = g.index_of(e.tgt);
        adj[i].push_back({j, &e});
        adj[j].push_back({i, &e});
    }
    std::vector<int> comp(n, -1);
    int ncomp = 0;
    for (std::size_t s = 0; s < n; ++s) {
        if (comp[s] != -1) continue;
        int cid = ncomp++;
        // spanning-forest propagation with the component's first vertex at 1
        std::deque<int> bfs{static_cast<int>(s)};
        comp[s] = cid;
        d[s] = 1;
        while (!bfs.empty()) {
            int v = bfs.front();
            bfs.pop_front();
            for (auto& [w, e] : adj[v]) {
                int i = g.index_of(e->src), j = g.index_of(e->tgt);
                // d_i * eta = d_j * nu
                mpq_class dw = (w == j) ? d[i] * e->eta / e->nu : d[j] * e->nu / e->eta;
                if (comp[w] == -1) {
                    comp[w] = cid;
                    d[w] = dw;
                    bfs.push_back(w);
                }
            }
        }
        // rescale this component to least positive integers
        mpz_class den_lcm = 1, num_gcd = 0;
        for (std::size_t v = 0; v < n; ++v)
            if (comp[v] == cid) den_lcm = mpz_lcm_(den_lcm, d[v].get_den());
        for (std::size_t v = 0; v < n; ++v)
            if (comp[v] == cid) {
                d[v] *= mpq_class(den_lcm);
                d[v].canonicalize();
                num_gcd = mpz_gcd_(num_gcd, d[v].get_num());
            }
        if (num_gcd > 1)
            for (std::size_t v = 0; v < n; ++v)
                if (comp[v] == cid) {
                    d[v] /= mpq_class(num_gcd);
                    d[v].canonicalize();
                }
    }
    // verify every edge, not only the spanning forest
    for (auto& e : g.edges) {
        int i = g.index_of(e.src), j = g.index_of(e.tgt);
        if (d[i] * e.eta != d[j] * e.nu)
            throw precondition_error("graph values are not relatively consistent (edge " + e.id + ")");
    }
    return d;
}

CartanDatum cartan_matrix(const ValuedGraph& g) {
    g.validate();
    CartanDatum cd;
    cd.vertices = g.vertices;
    cd.d = propagate_symmetrizers(g);
    const std::size_t n = g.vertices.size();
    cd.c.assign(n, std::vector<long>(n, 0));
    std::vector<std::vector<mpq_class>> acc(n, std::vector<mpq_class>(n, mpq_class(0)));
    for (auto& e : g.edges) {
        int i = g.index_of(e.src), j = g.index_of(e.tgt);
        acc[i][j] -= e.eta;
        acc[j][i] -= e.nu;
    }
    for (std::size_t i = 0; i < n; ++i) {
        cd.c[i][i] = 2;
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            if (acc[i][j].get_den() != 1)
                throw precondition_error("graph does not define a generalized Cartan matrix: entry (" +
                                         g.vertices[i] + "," + g.vertices[j] + ") = " + acc[i][j].get_str());
            cd.c[i][j] = static_cast<long>(acc[i][j].get_num().get_si());
        }
    }
    cd.validate();
    return cd;
}

ValuedGraph abs_to_rel(const ValuedGraph& g) {
    if (g.d.size() != g.vertices.size()) throw precondition_error("abs_to_rel: absolute vertex values missing");
    ValuedGraph r = g;
    for (auto& e : r.edges) {
        if (!e.m) throw precondition_error("abs_to_rel: edge " + e.id + " has no absolute value");
        e.eta = *e.m / r.d.at(e.src);
        e.nu = *e.m / r.d.at(e.tgt);
    }
    r.validate();
    return r;
}

ValuedGraph langlands_dual(const ValuedGraph& g) {
    ValuedGraph r = g;
    for (auto& e : r.edges) std::swap(e.eta, e.nu);
    // absolute values no longer match the swapped relative ones; drop them
    r.d.clear();
    for (auto& e : r.edges) e.m.reset();
    return r;
}

// ----------------------------------------------------------------- furlings

namespace {

std::map<std::string, std::vector<std::string>> vertex_fibers(const GraphMap& f) {
    std::map<std::string, std::vector<std::string>> fib;
    for (auto& y : f.codomain.vertices) fib[y] = {};
    for (auto& x : f.domain.vertices) fib[f.vmap.at(x)].push_back(x);
    return fib;
}

}  // namespace

FurlingResult is_furling(const GraphMap& f) {
    f.validate();
    FurlingResult res;
    auto fib = vertex_fibers(f);
    for (auto& E : f.codomain.edges) {
        // nu condition at each x over the source
        for (auto& x : fib[E.src]) {
            mpq_class sum = 0;
            for (auto& e : f.domain.edges)
                if (f.emap.at(e.id) == E.id && e.src == x) sum += e.nu;
            bool ok = sum == E.nu;
            auto& c = res.report.add("nu-sum edge=" + E.id + " x=" + x, ok);
            if (!ok) {
                res.ok = false;
                c.details = ojson{{"expected", E.nu.get_str()}, {"got", sum.get_str()}};
            }
        }
        // eta condition at each x over the target
        for (auto& x : fib[E.tgt]) {
            mpq_class sum = 0;
            for (auto& e : f.domain.edges)
                if (f.emap.at(e.id) == E.id && e.tgt == x) sum += e.eta;
            bool ok = sum == E.eta;
            auto& c = res.report.add("eta-sum edge=" + E.id + " x=" + x, ok);
            if (!ok) {
                res.ok = false;
                c.details = ojson{{"expected", E.eta.get_str()}, {"got", sum.get_str()}};
            }
        }
    }
    return res;
}

ValuedGraph furl_values(const ValuedGraph& x, const GraphMap& f) {
    f.validate();
    if (!x.has_absolute()) throw precondition_error("furl_values: domain needs absolute values");
    auto fib = vertex_fibers(f);
    for (auto& [y, xs] : fib)
        if (xs.empty()) throw precondition_error("furl_values: empty fiber over " + y);
    // d and m must be constant on fibers
    for (auto& [y, xs] : fib) {
        for (auto& v : xs)
            if (x.d.at(v) != x.d.at(xs[0]))
                throw precondition_error("furl_values: d not constant on fiber over " + y);
    }
    std::map<std::string, std::vector<const ValuedGraph::Edge*>> efib;
    for (auto& E : f.codomain.edges) efib[E.id] = {};
    for (auto& e : x.edges) efib[f.emap.at(e.id)].push_back(&e);
    for (auto& [Eid, es] : efib)
        for (auto* e : es)
            if (*e->m != *es[0]->m)
                throw precondition_error("furl_values: m not constant on fiber over edge " + Eid);

    mpz_class scale = 1;
    for (auto& [y, xs] : fib) scale = mpz_lcm_(scale, mpz_class(static_cast<unsigned long>(xs.size())));

    ValuedGraph out = f.codomain;
    out.d.clear();
    for (auto& [y, xs] : fib) {
        mpq_class dy = x.d.at(xs[0]) / mpq_class(static_cast<unsigned long>(xs.size())) * mpq_class(scale);
        dy.canonicalize();
        out.d[y] = dy;
    }
    for (auto& E : out.edges) {
        mpq_class msum = 0;
        for (auto* e : efib[E.id]) msum += *e->m;
        mpq_class me = msum /
                       mpq_class(static_cast<unsigned long>(fib[E.src].size())) /
                       mpq_class(static_cast<unsigned long>(fib[E.tgt].size())) * mpq_class(scale);
        me.canonicalize();
        E.m = me;
        E.eta = me / out.d.at(E.src);
        E.nu = me / out.d.at(E.tgt);
    }
    out.validate();
    return out;
}

FurlingResult check_cartan_column(const GraphMap& f) {
    FurlingResult res;
    CartanDatum cx = cartan_matrix(f.domain);
    CartanDatum cy = cartan_matrix(f.codomain);
    auto fib = vertex_fibers(f);
    for (auto& y : f.codomain.vertices) {
        for (auto& y2 : f.codomain.vertices) {
            long target = cy.c[cy.index_of(y)][cy.index_of(y2)];
            for (auto& x2 : fib[y2]) {
                long sum = 0;
                for (auto& x : fib[y]) sum += cx.c[cx.index_of(x)][cx.index_of(x2)];
                bool ok = sum == target;
                auto& c = res.report.add("column-sum y=" + y + " y'=" + y2 + " x'=" + x2, ok);
                if (!ok) {
                    res.ok = false;
                    c.details = ojson{{"expected", target}, {"got", sum}};
                }
            }
        }
    }
    return res;
}

FurlingResult furling_hom_check(const GraphMap& f) {
    FurlingResult res;
    FurlingResult fur = is_furling(f);
    auto& pre = res.report.add("precondition: is_furling", fur.ok);
    if (!fur.ok) {
        res.ok = false;
        pre.details["note"] = "input map is not a furling; bracket identities not evaluated";
        return res;
    }
    // [H,E] and [H,F] reduce to the column sums of Lemma lem:Cartan
    FurlingResult col = check_cartan_column(f);
    res.report.add("[H,E] family (column sums)", col.ok);
    res.report.add("[H,F] family (column sums, negated)", col.ok);
    if (!col.ok) {
        res.ok = false;
        res.report.merge(col.report, "  ");
    }
    // [E,F] family: fibers partition the domain vertex set
    auto fib = vertex_fibers(f);
    std::set<std::string> seen;
    bool disjoint = true;
    std::size_t total = 0;
    for (auto& [y, xs] : fib) {
        total += xs.size();
        for (auto& x : xs) disjoint = disjoint && seen.insert(x).second;
    }
    bool ok = disjoint && total == f.domain.vertices.size();
    res.report.add("[E,F] family (fiber disjointness)", ok);
    res.ok = res.ok && ok;
    return res;
}

std::pair<ValuedGraph, GraphMap> quotient_by_automorphism(const ValuedGraph& x, const Automorphism& sigma) {
    x.validate();
    // sigma must be a value-preserving automorphism
    auto check_perm = [](const std::map<std::string, std::string>& p, const std::vector<std::string>& names,
                         const char* what) {
        std::set<std::string> src, img;
        for (auto& n : names) src.insert(n);
        for (auto& n : names) {
            auto it = p.find(n);
            if (it == p.end()) throw precondition_error(std::string("automorphism misses ") + what + " " + n);
            if (!src.count(it->second) || !img.insert(it->second).second)
                throw precondition_error(std::string("automorphism is not a permutation of ") + what + "s");
        }
    };
    std::vector<std::string> eids;
    for (auto& e : x.edges) eids.push_back(e.id);
    check_perm(sigma.vperm, x.vertices, "vertex");
    check_perm(sigma.eperm, eids, "edge");
    for (auto& e : x.edges) {
        const auto* ie = x.edge_by_id(sigma.eperm.at(e.id));
        if (ie->src != sigma.vperm.at(e.src) || ie->tgt != sigma.vperm.at(e.tgt))
            throw precondition_error("automorphism does not commute with endpoints on edge " + e.id);
        if (ie->eta != e.eta || ie->nu != e.nu) throw precondition_error("automorphism does not preserve edge values");
        if (e.m && ie->m && *ie->m != *e.m) throw precondition_error("automorphism does not preserve m");
    }
    if (!x.d.empty())
        for (auto& v : x.vertices)
            if (x.d.at(sigma.vperm.at(v)) != x.d.at(v))
                throw precondition_error("automorphism does not preserve d");

    // orbits
    auto orbit_rep = [](const std::map<std::string, std::string>& p, const std::string& s) {
        std::string rep = s, cur = s;
        do {
            cur = p.at(cur);
            if (cur < rep) rep = cur;
        } while (cur != s);
        return rep;
    };
    std::map<std::string, std::string> vrep, erep;
    for (auto& v : x.vertices) vrep[v] = orbit_rep(sigma.vperm, v);
    for (auto& e : x.edges) erep[e.id] = orbit_rep(sigma.eperm, e.id);

    // admissibility: no edge joins two vertices of one orbit
    for (auto& e : x.edges)
        if (vrep[e.src] == vrep[e.tgt])
            throw precondition_error("inadmissible automorphism: edge " + e.id + " joins one orbit");

    ValuedGraph y;
    for (auto& v : x.vertices)
        if (vrep[v] == v) y.vertices.push_back(v);
    for (auto& e : x.edges) {
        if (erep[e.id] != e.id) continue;
        ValuedGraph::Edge E;
        E.id = e.id;
        E.src = vrep[e.src];
        E.tgt = vrep[e.tgt];
        E.eta = E.nu = 1;  // provisional; set by furl_values below
        y.edges.push_back(E);
    }

    GraphMap proj;
    proj.domain = x;
    proj.codomain = y;
    for (auto& [v, r] : vrep) proj.vmap[v] = r;
    for (auto& [e, r] : erep) proj.emap[e] = r;

    // values: use the absolute structure, defaulting to the trivial valuation
    ValuedGraph xabs = x;
    if (!xabs.has_absolute()) {
        for (auto& e : xabs.edges) {
            if (e.eta != 1 || e.nu != 1)
                throw precondition_error("quotient of a non-trivially valued graph requires absolute values");
            e.m = mpq_class(1);
        }
        for (auto& v : xabs.vertices) xabs.d[v] = 1;
    }
    proj.codomain.d.clear();
    ValuedGraph yv = furl_values(xabs, proj);
    proj.codomain = yv;
    return {yv, proj};
}

// ------------------------------------------------------------- isomorphism

bool graphs_isomorphic(const ValuedGraph& a, const ValuedGraph& b) {
    if (a.vertices.size() != b.vertices.size() || a.edges.size() != b.edges.size()) return false;
    const std::size_t n = a.vertices.size();
    if (n > 12) throw precondition_error("graphs_isomorphic: too many vertices");

    auto pair_sig = [](const ValuedGraph& g, int i, int j) {
        std::vector<std::string> sig;
        for (auto& e : g.edges)
            if (g.index_of(e.src) == i && g.index_of(e.tgt) == j)
                sig.push_back(e.eta.get_str() + "|" + e.nu.get_str());
        std::sort(sig.begin(), sig.end());
        return sig;
    };

    std::vector<int> perm(n, -1);
    std::vector<bool> used(n, false);
    std::function<bool(std::size_t)> rec = [&](std::size_t k) -> bool {
        if (k == n) return true;
        for (std::size_t t = 0; t < n; ++t) {
            if (used[t]) continue;
            bool ok = true;
            for (std::size_t p = 0; p <= k && ok; ++p) {
                int ip = p == k ? static_cast<int>(t) : perm[p];
                if (p < k) {
                    ok = pair_sig(a, static_cast<int>(k), static_cast<int>(p)) == pair_sig(b, static_cast<int>(t), ip) &&
                         pair_sig(a, static_cast<int>(p), static_cast<int>(k)) == pair_sig(b, ip, static_cast<int>(t));
                }
            }
            if (!ok) continue;
            perm[k] = static_cast<int>(t);
            used[t] = true;
            if (rec(k + 1)) return true;
            used[t] = false;
            perm[k] = -1;
        }
        return false;
    };
    return rec(0);
}

}  // namespace klrfurl
