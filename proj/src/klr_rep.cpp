#include "klrfurl/klr_rep.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace klrfurl {

KLRElement KLRElement::word(const Scalar& coeff, Word w) {
    KLRElement e;
    e.terms.push_back({coeff, std::move(w)});
    return e;
}

KLRElement& KLRElement::operator+=(const KLRElement& o) {
    for (auto& t : o.terms) terms.push_back(t);
    return *this;
}

namespace {

void pv_add(PolyVec& v, const IdempotentLabel& lab, const MPoly& p) {
    if (p.is_zero()) return;
    auto it = v.find(lab);
    if (it == v.end()) {
        v.emplace(lab, p);
    } else {
        it->second = it->second + p;
        if (it->second.is_zero()) v.erase(it);
    }
}

}  // namespace

PolyVec act_letter(const RepContext& ctx, const Letter& letter, const PolyVec& v) {
    PolyVec out;
    const int k = letter.k;
    for (auto& [lab, f] : v) {
        if (letter.kind == Letter::Dot) {
            pv_add(out, lab, f * MPoly::var(static_cast<unsigned>(ctx.n), ctx.pack.field, static_cast<unsigned>(k - 1)));
        } else {
            if (k < 1 || k >= ctx.n) throw precondition_error("crossing index out of range");
            int ik = lab[static_cast<std::size_t>(k - 1)], ik1 = lab[static_cast<std::size_t>(k)];
            if (ik == ik1) {
                pv_add(out, lab, f.divided_difference(static_cast<unsigned>(k - 1), static_cast<unsigned>(k)));
            } else {
                IdempotentLabel swapped = lab;
                std::swap(swapped[static_cast<std::size_t>(k - 1)], swapped[static_cast<std::size_t>(k)]);
                MPoly zk = MPoly::var(static_cast<unsigned>(ctx.n), ctx.pack.field, static_cast<unsigned>(k - 1));
                MPoly zk1 = MPoly::var(static_cast<unsigned>(ctx.n), ctx.pack.field, static_cast<unsigned>(k));
                MPoly pij = eval_bivar(ctx.pack.p_poly(ik1, ik), zk, zk1);
                pv_add(out, swapped, pij * f.swapped(static_cast<unsigned>(k - 1), static_cast<unsigned>(k)));
            }
        }
    }
    return out;
}

PolyVec act_idempotent(const IdempotentLabel& label, const PolyVec& v) {
    PolyVec out;
    auto it = v.find(label);
    if (it != v.end()) out.emplace(*it);
    return out;
}

PolyVec act(const RepContext& ctx, const KLRElement& el, const PolyVec& v) {
    PolyVec out;
    for (auto& [coeff, w] : el.terms) {
        PolyVec cur = act_idempotent(w.start, v);
        for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it) cur = act_letter(ctx, *it, cur);
        for (auto& [lab, f] : cur) pv_add(out, lab, f.scaled(coeff));
    }
    return out;
}

bool polyvec_equal(const PolyVec& a, const PolyVec& b) {
    for (auto& [lab, f] : a) {
        auto it = b.find(lab);
        if (it == b.end()) {
            if (!f.is_zero()) return false;
        } else if (!(f == it->second)) {
            return false;
        }
    }
    for (auto& [lab, f] : b)
        if (!a.count(lab) && !f.is_zero()) return false;
    return true;
}

std::optional<long> degree(const RepContext& ctx, const KLRElement& el) {
    std::optional<long> common;
    for (auto& [coeff, w] : el.terms) {
        if (coeff.is_zero()) continue;
        IdempotentLabel lab = w.start;
        long deg = 0;
        for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it) {
            const auto& dat = ctx.pack.datum;
            if (it->kind == Letter::Dot) {
                long di = mpz_class(dat.d[static_cast<std::size_t>(lab[static_cast<std::size_t>(it->k - 1)])].get_num()).get_si();
                deg += 2 * di;
            } else {
                int ik = lab[static_cast<std::size_t>(it->k - 1)], ik1 = lab[static_cast<std::size_t>(it->k)];
                long di = mpz_class(dat.d[static_cast<std::size_t>(ik)].get_num()).get_si();
                deg -= di * dat.c[static_cast<std::size_t>(ik)][static_cast<std::size_t>(ik1)];
                std::swap(lab[static_cast<std::size_t>(it->k - 1)], lab[static_cast<std::size_t>(it->k)]);
            }
        }
        if (!common) {
            common = deg;
        } else if (*common != deg) {
            return std::nullopt;  // non-homogeneous
        }
    }
    return common ? common : std::optional<long>(0);
}

// ---------------------------------------------------------------- relations

namespace {

std::string label_str(const CartanDatum& dat, const IdempotentLabel& lab) {
    std::string s = "(";
    for (std::size_t k = 0; k < lab.size(); ++k)
        s += (k ? "," : "") + dat.vertices[static_cast<std::size_t>(lab[k])];
    return s + ")";
}

Word mk_word(const IdempotentLabel& start, std::initializer_list<Letter> ls) {
    Word w;
    w.start = start;
    w.letters.assign(ls);
    return w;
}

// multiplication by a polynomial in the dots, as an element
KLRElement dots_poly(const MPoly& p, const IdempotentLabel& lab) {
    KLRElement el;
    for (auto& [e, c] : p.terms()) {
        Word w;
        w.start = lab;
        for (unsigned k = 0; k < e.size(); ++k)
            for (unsigned t = 0; t < e[k]; ++t) w.letters.push_back(Letter{Letter::Dot, static_cast<int>(k + 1)});
        el.terms.push_back({c, std::move(w)});
    }
    return el;
}

struct RelInstance {
    std::string name;
    KLRElement lhs, rhs;
};

std::vector<RelInstance> relation_instances(const RepContext& ctx, const IdempotentLabel& lab) {
    std::vector<RelInstance> out;
    const auto& dat = ctx.pack.datum;
    const int n = ctx.n;
    const FieldPtr& K = ctx.pack.field;
    const Letter D1{Letter::Dot, 1};
    auto lname = label_str(dat, lab);

    for (int k = 1; k < n; ++k) {
        Letter Ps{Letter::Crossing, k}, Dk{Letter::Dot, k}, Dk1{Letter::Dot, k + 1};
        bool eq = lab[static_cast<std::size_t>(k - 1)] == lab[static_cast<std::size_t>(k)];
        int ik = lab[static_cast<std::size_t>(k - 1)], ik1 = lab[static_cast<std::size_t>(k)];
        if (!eq) {
            out.push_back({"first-QH k=" + std::to_string(k) + " " + lname,
                           KLRElement::word(Scalar::one(K), mk_word(lab, {Dk, Ps})),
                           KLRElement::word(Scalar::one(K), mk_word(lab, {Ps, Dk1}))});
            out.push_back({"second-QH k=" + std::to_string(k) + " " + lname,
                           KLRElement::word(Scalar::one(K), mk_word(lab, {Dk1, Ps})),
                           KLRElement::word(Scalar::one(K), mk_word(lab, {Ps, Dk}))});
            // bigon: psi^2 = Q_{ik ik1}(y_k, y_{k+1})
            MPoly q = eval_bivar(ctx.pack.q_poly(ik, ik1),
                                 MPoly::var(static_cast<unsigned>(n), K, static_cast<unsigned>(k - 1)),
                                 MPoly::var(static_cast<unsigned>(n), K, static_cast<unsigned>(k)));
            out.push_back({"black-bigon k=" + std::to_string(k) + " " + lname,
                           KLRElement::word(Scalar::one(K), mk_word(lab, {Ps, Ps})), dots_poly(q, lab)});
        } else {
            KLRElement rhs1 = KLRElement::word(Scalar::one(K), mk_word(lab, {Ps, Dk1}));
            rhs1 += KLRElement::word(Scalar::one(K), mk_word(lab, {}));
            out.push_back({"nilHecke-1 k=" + std::to_string(k) + " " + lname,
                           KLRElement::word(Scalar::one(K), mk_word(lab, {Dk, Ps})), rhs1});
            KLRElement rhs2 = KLRElement::word(Scalar::one(K), mk_word(lab, {Dk1, Ps}));
            rhs2 += KLRElement::word(Scalar::one(K), mk_word(lab, {}));
            out.push_back({"nilHecke-2 k=" + std::to_string(k) + " " + lname,
                           KLRElement::word(Scalar::one(K), mk_word(lab, {Ps, Dk})), rhs2});
            out.push_back({"black-bigon k=" + std::to_string(k) + " " + lname,
                           KLRElement::word(Scalar::one(K), mk_word(lab, {Ps, Ps})), KLRElement{}});
        }
    }
    for (int k = 1; k + 1 < n; ++k) {
        Letter A{Letter::Crossing, k}, B{Letter::Crossing, k + 1};
        int i = lab[static_cast<std::size_t>(k - 1)], j = lab[static_cast<std::size_t>(k)],
            l = lab[static_cast<std::size_t>(k + 1)];
        KLRElement lhs = KLRElement::word(Scalar::one(K), mk_word(lab, {A, B, A}));
        KLRElement rhs = KLRElement::word(Scalar::one(K), mk_word(lab, {B, A, B}));
        if (i == l && i != j) {
            // (Q_ij(y_{k+2}, y_{k+1}) - Q_ij(y_k, y_{k+1})) / (y_{k+2} - y_k)
            MPoly q = eval_bivar(ctx.pack.q_poly(i, j),
                                 MPoly::var(static_cast<unsigned>(n), K, static_cast<unsigned>(k - 1)),
                                 MPoly::var(static_cast<unsigned>(n), K, static_cast<unsigned>(k)));
            MPoly corr = q.divided_difference(static_cast<unsigned>(k - 1), static_cast<unsigned>(k + 1));
            rhs += dots_poly(corr, lab);
            out.push_back({"triple-smart k=" + std::to_string(k) + " " + lname, lhs, rhs});
        } else {
            out.push_back({"triple-dumb k=" + std::to_string(k) + " " + lname, lhs, rhs});
        }
    }
    (void)D1;
    return out;
}

}  // namespace

Report verify_relations(const ParamPack& pack, int n, const RelationOptions& opt) {
    Report rep;
    RepContext ctx{pack, n};
    const auto& dat = pack.datum;
    const int nv = static_cast<int>(dat.vertices.size());

    std::vector<IdempotentLabel> labels = opt.labels;
    bool exhaustive = labels.empty() && n <= 3;
    if (labels.empty()) {
        if (exhaustive) {
            IdempotentLabel cur(static_cast<std::size_t>(n), 0);
            while (true) {
                labels.push_back(cur);
                int k = n - 1;
                while (k >= 0 && cur[static_cast<std::size_t>(k)] == nv - 1) cur[static_cast<std::size_t>(k--)] = 0;
                if (k < 0) break;
                cur[static_cast<std::size_t>(k)]++;
            }
        } else {
            std::mt19937_64 rng(opt.seed);
            std::uniform_int_distribution<int> pick(0, nv - 1);
            for (int s = 0; s < opt.sample_count; ++s) {
                IdempotentLabel lab(static_cast<std::size_t>(n));
                for (auto& x : lab) x = pick(rng);
                labels.push_back(lab);
            }
        }
    }
    rep.meta["n"] = n;
    rep.meta["degree_bound"] = opt.degree_bound;
    rep.meta["labels"] = labels.size();
    rep.meta["exhaustive"] = exhaustive;
    if (!exhaustive && opt.labels.empty()) rep.meta["seed"] = opt.seed;

    // monomial basis of total degree <= D
    std::vector<Expo> monos;
    Expo cur(static_cast<std::size_t>(n), 0);
    std::function<void(int, int)> gen = [&](int pos, int left) {
        if (pos == n) {
            monos.push_back(cur);
            return;
        }
        for (int e = 0; e <= left; ++e) {
            cur[static_cast<std::size_t>(pos)] = static_cast<unsigned>(e);
            gen(pos + 1, left - e);
        }
        cur[static_cast<std::size_t>(pos)] = 0;
    };
    gen(0, opt.degree_bound);

    for (auto& lab : labels) {
        for (auto& inst : relation_instances(ctx, lab)) {
            bool ok = true;
            std::string witness;
            for (auto& e : monos) {
                MPoly f(static_cast<unsigned>(n), pack.field);
                f.add_term(e, Scalar::one(pack.field));
                PolyVec v{{lab, f}};
                PolyVec L = act(ctx, inst.lhs, v);
                PolyVec R = act(ctx, inst.rhs, v);
                if (!polyvec_equal(L, R)) {
                    ok = false;
                    witness = f.str();
                    break;
                }
            }
            auto& c = rep.add(inst.name, ok);
            if (!ok) c.details["witness_monomial"] = witness;
        }
    }
    return rep;
}

}  // namespace klrfurl
