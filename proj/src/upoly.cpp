#include "klrfurl/upoly.hpp"

namespace klrfurl::up {

void trim(Poly& p) {
    while (!p.empty() && p.back().is_zero()) p.pop_back();
}

int deg(const Poly& p) { return static_cast<int>(p.size()) - 1; }

bool is_zero(const Poly& p) { return p.empty(); }

Poly constant(const FieldPtr& f, const Scalar& c) {
    if (c.is_zero()) return {};
    (void)f;
    return {c};
}

Poly add(const Poly& a, const Poly& b) {
    Poly r = a;
    if (r.size() < b.size()) r.resize(b.size(), b.empty() ? Scalar() : Scalar::zero(b[0].field()));
    for (std::size_t i = 0; i < b.size(); ++i) r[i] = r[i] + b[i];
    trim(r);
    return r;
}

Poly neg(const Poly& a) {
    Poly r = a;
    for (auto& c : r) c = -c;
    return r;
}

Poly sub(const Poly& a, const Poly& b) { return add(a, neg(b)); }

Poly mul(const Poly& a, const Poly& b) {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, Scalar::zero(a[0].field()));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = r[i + j] + a[i] * b[j];
    trim(r);
    return r;
}

Poly scale(const Poly& a, const Scalar& c) {
    if (c.is_zero()) return {};
    Poly r = a;
    for (auto& x : r) x = x * c;
    return r;
}

Scalar eval(const Poly& a, const Scalar& x) {
    Scalar r = Scalar::zero(x.field());
    for (auto it = a.rbegin(); it != a.rend(); ++it) r = r * x + *it;
    return r;
}

Poly monic(const Poly& a) {
    if (a.empty()) return a;
    return scale(a, a.back().inv());
}

std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
    if (b.empty()) throw error("polynomial division by zero");
    Poly rem = a, q;
    trim(rem);
    if (rem.size() >= b.size()) q.assign(rem.size() - b.size() + 1, Scalar::zero(b[0].field()));
    Scalar li = b.back().inv();
    while (rem.size() >= b.size()) {
        Scalar c = rem.back() * li;
        std::size_t off = rem.size() - b.size();
        q[off] = c;
        for (std::size_t j = 0; j < b.size(); ++j) rem[off + j] = rem[off + j] - c * b[j];
        rem.pop_back();
        trim(rem);
    }
    trim(q);
    return {q, rem};
}

Poly gcd(const Poly& a, const Poly& b) {
    Poly x = a, y = b;
    trim(x);
    trim(y);
    while (!y.empty()) {
        Poly r = divmod(x, y).second;
        x = std::move(y);
        y = std::move(r);
    }
    return monic(x);
}

void xgcd(const Poly& a, const Poly& b, Poly& g, Poly& s, Poly& t) {
    Poly r0 = a, r1 = b;
    trim(r0);
    trim(r1);
    FieldPtr f = !r0.empty() ? r0[0].field() : (!r1.empty() ? r1[0].field() : FieldSpec::rationals());
    Poly s0 = {Scalar::one(f)}, s1 = {};
    Poly t0 = {}, t1 = {Scalar::one(f)};
    while (!r1.empty()) {
        auto [q, r2] = divmod(r0, r1);
        Poly s2 = sub(s0, mul(q, s1));
        Poly t2 = sub(t0, mul(q, t1));
        r0 = std::move(r1);
        r1 = std::move(r2);
        s0 = std::move(s1);
        s1 = std::move(s2);
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    if (r0.empty()) {
        g = s = t = {};
        return;
    }
    Scalar li = r0.back().inv();
    g = scale(r0, li);
    s = scale(s0, li);
    t = scale(t0, li);
}

std::optional<Poly> monic_kth_root(const Poly& a, unsigned k, const FieldPtr& f) {
    if (a.empty()) return std::nullopt;
    if (!a.back().is_one()) return std::nullopt;
    std::size_t d = a.size() - 1;
    if (d % k != 0) return std::nullopt;
    if (d == 0) return Poly{Scalar::one(f)};
    std::size_t dr = d / k;
    // top-down coefficient matching: r = x^dr + c_{dr-1} x^{dr-1} + ...
    Poly r(dr + 1, Scalar::zero(f));
    r[dr] = Scalar::one(f);
    Scalar kf = Scalar::from_mpq(f, mpq_class(static_cast<long>(k)));
    if (kf.is_zero()) return std::nullopt;  // char divides k: bail out
    for (std::size_t step = 1; step <= dr; ++step) {
        // coefficient of x^{d - step} in r^k is k*c_{dr-step} + (terms from known coeffs)
        Poly rk = r;
        for (unsigned i = 1; i < k; ++i) rk = mul(rk, r);
        Scalar cur = d >= step && (d - step) < rk.size() ? rk[d - step] : Scalar::zero(f);
        Scalar want = (d - step) < a.size() ? a[d - step] : Scalar::zero(f);
        r[dr - step] = (want - cur) / kf;
    }
    Poly rk = r;
    for (unsigned i = 1; i < k; ++i) rk = mul(rk, r);
    Poly diff = sub(rk, a);
    if (!diff.empty()) return std::nullopt;
    return r;
}

}  // namespace klrfurl::up
