#include "klrfurl/params.hpp"

#include <algorithm>
#include <numeric>

namespace klrfurl {

void ScalarMultiset::add(const Scalar& s, unsigned mult) {
    for (auto& [v, m] : items)
        if (v == s) {
            m += mult;
            return;
        }
    items.push_back({s, mult});
    std::sort(items.begin(), items.end(),
              [](const auto& a, const auto& b) { return a.first.key() < b.first.key(); });
}

unsigned ScalarMultiset::total() const {
    unsigned t = 0;
    for (auto& [v, m] : items) t += m;
    return t;
}

bool ScalarMultiset::operator==(const ScalarMultiset& o) const {
    if (items.size() != o.items.size()) return false;
    for (std::size_t k = 0; k < items.size(); ++k)
        if (items[k].second != o.items[k].second || !(items[k].first == o.items[k].first)) return false;
    return true;
}

nlohmann::json ScalarMultiset::to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (auto& [v, m] : items) arr.push_back(nlohmann::json{{"value", v.to_json()}, {"mult", m}});
    return arr;
}

const MPoly& ParamPack::p_poly(int i, int j) const {
    static std::map<std::string, MPoly> ones;
    auto it = P.find({i, j});
    if (it != P.end()) return it->second;
    std::string k = field->describe();
    auto jt = ones.find(k);
    if (jt == ones.end()) jt = ones.emplace(k, MPoly::constant(2, Scalar::one(field))).first;
    return jt->second;
}

MPoly ParamPack::q_poly(int i, int j) const {
    return p_poly(i, j) * p_poly(j, i).swapped(0, 1);
}

Scalar ParamPack::p_const(int i, int j) const {
    return p_poly(i, j).eval({Scalar::one(field), Scalar::zero(field)});
}

Scalar ParamPack::t_const(int i, int j) const {
    return q_poly(i, j).eval({Scalar::one(field), Scalar::zero(field)});
}

long ParamPack::g(int i, int j) const {
    long a = -datum.c[i][j], b = -datum.c[j][i];
    if (a == 0 || b == 0) throw precondition_error("g_ij undefined for c_ij = 0");
    return std::gcd(a, b);
}

long ParamPack::h(int i, int j) const { return -datum.c[i][j] / g(i, j); }

ValuedGraph ParamPack::pack_graph() const {
    ValuedGraph g;
    g.vertices = datum.vertices;
    for (std::size_t i = 0; i < datum.vertices.size(); ++i) g.d[datum.vertices[i]] = datum.d[i];
    int k = 0;
    for (std::size_t i = 0; i < datum.vertices.size(); ++i) {
        for (std::size_t j = 0; j < datum.vertices.size(); ++j) {
            if (i == j) continue;
            const MPoly& p = p_poly(static_cast<int>(i), static_cast<int>(j));
            if (p.total_degree() == 0) continue;
            ValuedGraph::Edge e;
            e.id = "b" + std::to_string(k++);
            e.src = datum.vertices[i];
            e.tgt = datum.vertices[j];
            // relative values (deg P(x,0), deg P(0,x)); m = deg P(x^{d_i}, 0)
            unsigned du = 0, dv = 0;
            for (auto& [ex, c] : p.terms()) {
                if (ex[1] == 0) du = std::max(du, ex[0]);
                if (ex[0] == 0) dv = std::max(dv, ex[1]);
            }
            e.eta = mpq_class(du);
            e.nu = mpq_class(dv);
            e.m = mpq_class(du) * datum.d[i];
            g.edges.push_back(e);
        }
    }
    g.validate();
    return g;
}

nlohmann::json ParamPack::to_json() const {
    nlohmann::json j;
    j["datum"] = datum.to_json();
    j["P"] = nlohmann::json::array();
    for (auto& [ij, p] : P) {
        nlohmann::json mon = nlohmann::json::array();
        for (auto& [e, c] : p.terms())
            mon.push_back(nlohmann::json{{"a", e[0]}, {"b", e[1]}, {"coeff", c.to_json()}});
        j["P"].push_back(nlohmann::json{{"i", datum.vertices[ij.first]},
                                        {"j", datum.vertices[ij.second]},
                                        {"monomials", mon}});
    }
    if (!coarse.empty()) {
        nlohmann::json cr = nlohmann::json::array();
        for (auto& [ij, ms] : coarse)
            cr.push_back(nlohmann::json{{"i", datum.vertices[ij.first]},
                                        {"j", datum.vertices[ij.second]},
                                        {"roots", ms.to_json()}});
        j["coarse_roots"] = cr;
    }
    if (!fine.empty()) {
        nlohmann::json fr = nlohmann::json::array();
        for (auto& [ij, ms] : fine)
            fr.push_back(nlohmann::json{{"i", datum.vertices[ij.first]},
                                        {"j", datum.vertices[ij.second]},
                                        {"roots", ms.to_json()}});
        j["fine_roots"] = fr;
    }
    return j;
}

ParamPack ParamPack::from_json(const nlohmann::json& j, const FieldPtr& f) {
    try {
        ParamPack pk;
        pk.field = f;
        pk.datum = CartanDatum::from_json(j.at("datum"));
        for (auto& pj : j.at("P")) {
            int i = pk.datum.index_of(pj.at("i").get<std::string>());
            int jj = pk.datum.index_of(pj.at("j").get<std::string>());
            MPoly p(2, f);
            for (auto& mj : pj.at("monomials")) {
                Expo e{mj.at("a").get<unsigned>(), mj.at("b").get<unsigned>()};
                p.add_term(e, Scalar::from_json(f, mj.at("coeff")));
            }
            pk.P[{i, jj}] = std::move(p);
        }
        auto read_roots = [&](const char* key, std::map<std::pair<int, int>, ScalarMultiset>& out) {
            if (!j.contains(key)) return;
            for (auto& rj : j.at(key)) {
                int i = pk.datum.index_of(rj.at("i").get<std::string>());
                int jj = pk.datum.index_of(rj.at("j").get<std::string>());
                ScalarMultiset ms;
                for (auto& it : rj.at("roots"))
                    ms.add(Scalar::from_json(f, it.at("value")), it.at("mult").get<unsigned>());
                out[{i, jj}] = std::move(ms);
            }
        };
        read_roots("coarse_roots", pk.coarse);
        read_roots("fine_roots", pk.fine);
        return pk;
    } catch (const nlohmann::json::exception& e) {
        throw parse_error(std::string("bad parameter pack: ") + e.what());
    }
}

// ------------------------------------------------------------------ checks

namespace {

// P_ij(x^{1/h}, 1) as a univariate polynomial in x (coefficient list),
// requires every u-exponent divisible by h
std::optional<std::vector<Scalar>> substituted_poly(const MPoly& p, long h, const FieldPtr& f) {
    std::vector<Scalar> cs;
    for (auto& [e, c] : p.terms()) {
        if (e[0] % h != 0) return std::nullopt;
        std::size_t k = e[0] / h;
        if (cs.size() <= k) cs.resize(k + 1, Scalar::zero(f));
        cs[k] = cs[k] + c;
    }
    while (!cs.empty() && cs.back().is_zero()) cs.pop_back();
    return cs;
}

}  // namespace

Report validate_pack(const ParamPack& pack) {
    Report rep;
    pack.datum.validate();
    const auto& dat = pack.datum;
    const int n = static_cast<int>(dat.vertices.size());

    // characteristic coprime to every d_i
    {
        std::uint64_t ch = pack.field->characteristic();
        bool ok = true;
        for (auto& dv : dat.d)
            if (ch != 0 && mpz_class(dv.get_num()) % mpz_class(static_cast<unsigned long>(ch)) == 0) ok = false;
        rep.add("characteristic coprime to all d_i", ok);
    }

    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            std::string tag = "(" + dat.vertices[i] + "," + dat.vertices[j] + ")";
            MPoly q = pack.q_poly(i, j);
            // c_ij = 0 forces constant Q
            if (dat.c[i][j] == 0) {
                bool ok = q.total_degree() == 0;
                rep.add("P constant when c=0 " + tag, ok);
                continue;
            }
            // Q_ij(u,v) == Q_ji(v,u)
            {
                MPoly qt = pack.q_poly(j, i).swapped(0, 1);
                rep.add("Q symmetry " + tag, q == qt);
            }
            // weighted homogeneity: 2 d_i a + 2 d_j b = -2 d_i c_ij per monomial
            {
                mpq_class want = mpq_class(-2) * dat.d[i] * dat.c[i][j];
                bool ok = true;
                std::string witness;
                for (auto& [e, c] : q.terms()) {
                    mpq_class have = mpq_class(2) * dat.d[i] * static_cast<long>(e[0]) +
                                     mpq_class(2) * dat.d[j] * static_cast<long>(e[1]);
                    if (have != want) {
                        ok = false;
                        witness = "u^" + std::to_string(e[0]) + " v^" + std::to_string(e[1]) +
                                  " has weighted degree " + have.get_str() + " != " + want.get_str();
                        break;
                    }
                }
                auto& c = rep.add("Q homogeneity " + tag, ok);
                if (!ok) c.details["monomial"] = witness;
            }
            // p_ij nonzero (pure-u leading term present)
            {
                bool ok = !pack.p_const(i, j).is_zero();
                rep.add("p_ij = P_ij(1,0) nonzero " + tag, ok);
                if (!ok) continue;
            }
            // d_i h_ij = d_j h_ji = lcm(d_i, d_j)
            {
                mpq_class lhs = dat.d[i] * pack.h(i, j);
                mpq_class rhs = dat.d[j] * pack.h(j, i);
                mpz_class l = mpz_lcm_(dat.d[i].get_num(), dat.d[j].get_num());
                bool ok = lhs == rhs && dat.d[i].get_den() == 1 && dat.d[j].get_den() == 1 && lhs == mpq_class(l);
                rep.add("d_i h_ij = d_j h_ji = lcm(d_i,d_j) " + tag, ok);
            }
            // integer exponents of P_ij(x^{1/h},1)
            {
                auto cs = substituted_poly(pack.p_poly(i, j), pack.h(i, j), pack.field);
                rep.add("P(x^{1/h},1) integral exponents " + tag, cs.has_value());
                if (!cs) continue;
                // supplied coarse roots re-expand exactly
                auto it = pack.coarse.find({i, j});
                if (it != pack.coarse.end()) {
                    std::vector<Scalar> expand = {pack.p_const(i, j)};
                    for (auto& [root, mult] : it->second.items)
                        for (unsigned t = 0; t < mult; ++t) {
                            std::vector<Scalar> nxt(expand.size() + 1, Scalar::zero(pack.field));
                            for (std::size_t k = 0; k < expand.size(); ++k) {
                                nxt[k + 1] = nxt[k + 1] + expand[k];
                                nxt[k] = nxt[k] - expand[k] * root;
                            }
                            expand = std::move(nxt);
                        }
                    bool ok = expand.size() == cs->size();
                    for (std::size_t k = 0; ok && k < expand.size(); ++k) ok = expand[k] == (*cs)[k];
                    rep.add("supplied coarse roots re-expand to P " + tag, ok);
                }
            }
        }
    }
    return rep;
}

ScalarMultiset coarse_roots(const ParamPack& pack, int i, int j) {
    auto it = pack.coarse.find({i, j});
    if (it != pack.coarse.end()) return it->second;  // verified by validate_pack

    const MPoly& p = pack.p_poly(i, j);
    if (p.total_degree() == 0) return {};
    long h = pack.h(i, j);
    auto cs = substituted_poly(p, h, pack.field);
    if (!cs) throw precondition_error("coarse_roots: P(x^{1/h},1) has fractional exponents; validate the pack");
    ScalarMultiset out;
    std::vector<Scalar> f = *cs;  // will be divided down
    const FieldPtr& K = pack.field;

    auto try_root = [&](const Scalar& cand) -> bool {
        if (cand.is_zero()) return false;
        // synthetic division by (x - cand); accept only exact roots
        Scalar acc = Scalar::zero(K);
        for (auto it2 = f.rbegin(); it2 != f.rend(); ++it2) acc = acc * cand + *it2;
        if (!acc.is_zero()) return false;
        std::vector<Scalar> q(f.size() - 1, Scalar::zero(K));
        Scalar carry = Scalar::zero(K);
        for (std::size_t k = f.size(); k-- > 1;) {
            carry = f[k] + carry * cand;
            q[k - 1] = carry;
        }
        f = std::move(q);
        out.add(cand);
        return true;
    };

    std::vector<Scalar> mu = roots_of_unity(K);
    while (f.size() > 1) {
        bool progressed = false;
        // candidate rational parts from coefficient ratios of the current factor
        std::vector<Scalar> cands;
        unsigned D = static_cast<unsigned>(f.size() - 1);
        Scalar lead = f.back();
        Scalar c0 = f.front();
        // all D-th roots of +-c0/lead (the product of remaining roots)
        for (const Scalar& target : {c0 / lead, -(c0 / lead)}) {
            RootSolve rs = kth_roots(target, D);
            if (rs.solved)
                for (auto& r : rs.roots) cands.push_back(r);
        }
        if (f.size() >= 2) cands.push_back(-(f[f.size() - 2] / (Scalar::from_mpq(K, mpq_class(static_cast<long>(D))) * lead)));
        std::vector<Scalar> full;
        for (auto& base : cands)
            for (auto& w : mu) full.push_back(base * w);
        for (auto& cand : full)
            if (try_root(cand)) {
                progressed = true;
                break;
            }
        if (!progressed)
            throw field_error("coarse_roots: cannot factor P(x^{1/h},1) over the stored unit group; supply coarse_roots");
    }
    return out;
}

ScalarMultiset fine_roots(const ParamPack& pack, int i, int j) {
    auto it = pack.fine.find({i, j});
    if (it != pack.fine.end()) return it->second;
    ScalarMultiset co = coarse_roots(pack, i, j);
    long dh = mpz_class(pack.datum.d[i].get_num() * pack.h(i, j)).get_si();
    ScalarMultiset out;
    for (auto& [alpha, mult] : co.items) {
        RootSolve rs = kth_roots(alpha, static_cast<unsigned>(dh));
        if (!rs.solved)
            throw field_error("fine_roots: cannot extract d_i h_ij-th roots in this field; supply fine_roots");
        if (rs.roots.size() != static_cast<std::size_t>(dh))
            throw field_error("fine_roots: field lacks the full set of d_i h_ij-th roots (need " +
                              std::to_string(dh) + ", found " + std::to_string(rs.roots.size()) + ")");
        for (auto& r : rs.roots) out.add(r, mult);
    }
    return out;
}

ParamPack standard_pack(const CartanDatum& datum, const FieldPtr& field,
                        const std::map<std::pair<int, int>, int>& signs) {
    datum.validate();
    ParamPack pk;
    pk.datum = datum;
    pk.field = field;
    const int n = static_cast<int>(datum.vertices.size());
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (datum.c[i][j] == 0) continue;
            long gij = std::gcd(-datum.c[i][j], -datum.c[j][i]);
            long hij = -datum.c[i][j] / gij;
            long hji = -datum.c[j][i] / gij;
            // P_ij = (u^{h_ij} - v^{h_ji})^{g_ij}
            MPoly base(2, field);
            base.add_term({static_cast<unsigned>(hij), 0}, Scalar::one(field));
            base.add_term({0, static_cast<unsigned>(hji)}, -Scalar::one(field));
            pk.P[{i, j}] = base.pow(static_cast<unsigned>(gij));
            int sign = 1;
            auto it = signs.find({i, j});
            if (it != signs.end()) sign = it->second;
            MPoly c = MPoly::constant(2, Scalar::from_mpq(field, mpq_class(sign)));
            pk.P[{j, i}] = c;
            ScalarMultiset ms;
            ms.add(Scalar::one(field), static_cast<unsigned>(gij));
            pk.coarse[{i, j}] = ms;
            pk.coarse[{j, i}] = {};
        }
    }
    return pk;
}

ParamPack geometric_pack(const ValuedGraph& quiver, const FieldPtr& field) {
    quiver.validate();
    for (auto& e : quiver.edges)
        if (e.eta != 1 || e.nu != 1)
            throw precondition_error("geometric_pack requires a trivially valued quiver");
    ParamPack pk;
    pk.field = field;
    pk.datum = cartan_matrix(quiver);
    const int n = static_cast<int>(quiver.vertices.size());
    std::map<std::pair<int, int>, unsigned> count;
    for (auto& e : quiver.edges) count[{quiver.index_of(e.src), quiver.index_of(e.tgt)}]++;
    for (auto& [ij, k] : count) {
        MPoly base(2, field);
        base.add_term({1, 0}, Scalar::one(field));
        base.add_term({0, 1}, -Scalar::one(field));
        pk.P[ij] = base.pow(k);
        ScalarMultiset ms;
        ms.add(Scalar::one(field), k);
        pk.coarse[ij] = ms;
    }
    (void)n;
    return pk;
}

}  // namespace klrfurl
