#include "klrfurl/mpoly.hpp"

#include <sstream>

namespace klrfurl {

MPoly MPoly::constant(unsigned n, const Scalar& c) {
    MPoly p(n, c.field());
    if (!c.is_zero()) p.terms_[Expo(n, 0)] = c;
    return p;
}

MPoly MPoly::var(unsigned n, const FieldPtr& f, unsigned k, unsigned e) {
    MPoly p(n, f);
    Expo ex(n, 0);
    ex.at(k) = e;
    p.terms_[ex] = Scalar::one(f);
    return p;
}

void MPoly::add_term(const Expo& e, const Scalar& c) {
    if (c.is_zero()) return;
    auto it = terms_.find(e);
    if (it == terms_.end()) {
        terms_.emplace(e, c);
    } else {
        it->second = it->second + c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

MPoly operator+(const MPoly& a, const MPoly& b) {
    MPoly r = a;
    for (auto& [e, c] : b.terms_) r.add_term(e, c);
    return r;
}

MPoly MPoly::operator-() const {
    MPoly r(n_, field_);
    for (auto& [e, c] : terms_) r.terms_.emplace(e, -c);
    return r;
}

MPoly operator-(const MPoly& a, const MPoly& b) { return a + (-b); }

MPoly operator*(const MPoly& a, const MPoly& b) {
    MPoly r(a.n_, a.field_);
    for (auto& [ea, ca] : a.terms_) {
        for (auto& [eb, cb] : b.terms_) {
            Expo e = ea;
            for (unsigned k = 0; k < r.n_; ++k) e[k] += eb[k];
            r.add_term(e, ca * cb);
        }
    }
    return r;
}

MPoly MPoly::scaled(const Scalar& c) const {
    MPoly r(n_, field_);
    if (c.is_zero()) return r;
    for (auto& [e, v] : terms_) r.terms_.emplace(e, v * c);
    return r;
}

MPoly MPoly::pow(unsigned e) const {
    MPoly r = MPoly::constant(n_, Scalar::one(field_));
    MPoly b = *this;
    while (e) {
        if (e & 1) r = r * b;
        b = b * b;
        e >>= 1;
    }
    return r;
}

bool MPoly::operator==(const MPoly& o) const {
    if (terms_.size() != o.terms_.size()) return false;
    auto it = terms_.begin(), jt = o.terms_.begin();
    for (; it != terms_.end(); ++it, ++jt)
        if (it->first != jt->first || !(it->second == jt->second)) return false;
    return true;
}

MPoly MPoly::swapped(unsigned a, unsigned b) const {
    MPoly r(n_, field_);
    for (auto& [e, c] : terms_) {
        Expo f = e;
        std::swap(f[a], f[b]);
        r.terms_.emplace(f, c);  // bijective on exponents
    }
    return r;
}

MPoly MPoly::divided_difference(unsigned a, unsigned b) const {
    // per-monomial Demazure formula; exact, no remainder possible
    MPoly r(n_, field_);
    for (auto& [e, c] : terms_) {
        unsigned ea = e[a], eb = e[b];
        if (ea == eb) continue;
        unsigned lo = std::min(ea, eb);
        unsigned gap = (ea > eb ? ea - eb : eb - ea);
        Scalar cc = (ea > eb) ? c : -c;
        for (unsigned i = 0; i < gap; ++i) {
            Expo f = e;
            f[a] = lo + i;
            f[b] = lo + gap - 1 - i;
            r.add_term(f, cc);
        }
    }
    return r;
}

MPoly MPoly::shifted(const std::vector<Scalar>& shift) const {
    // x_k -> shift_k + x_k via repeated binomial expansion
    MPoly r(n_, field_);
    for (auto& [e, c] : terms_) {
        MPoly term = MPoly::constant(n_, c);
        for (unsigned k = 0; k < n_; ++k) {
            if (e[k] == 0) continue;
            MPoly base = MPoly::constant(n_, shift[k]) + MPoly::var(n_, field_, k);
            term = term * base.pow(e[k]);
        }
        r = r + term;
    }
    return r;
}

MPoly MPoly::truncated(const std::vector<unsigned>& caps) const {
    MPoly r(n_, field_);
    for (auto& [e, c] : terms_) {
        bool keep = true;
        for (unsigned k = 0; k < n_; ++k)
            if (e[k] >= caps[k]) {
                keep = false;
                break;
            }
        if (keep) r.terms_.emplace(e, c);
    }
    return r;
}

MPoly MPoly::total_truncated(unsigned cap) const {
    MPoly r(n_, field_);
    for (auto& [e, c] : terms_) {
        unsigned td = 0;
        for (unsigned k = 0; k < n_; ++k) td += e[k];
        if (td < cap) r.terms_.emplace(e, c);
    }
    return r;
}

Scalar MPoly::coeff(const Expo& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? Scalar::zero(field_) : it->second;
}

Scalar MPoly::eval(const std::vector<Scalar>& xs) const {
    Scalar r = Scalar::zero(field_);
    for (auto& [e, c] : terms_) {
        Scalar t = c;
        for (unsigned k = 0; k < n_; ++k)
            if (e[k]) t = t * xs[k].pow(static_cast<long>(e[k]));
        r = r + t;
    }
    return r;
}

unsigned MPoly::total_degree() const {
    unsigned d = 0;
    for (auto& [e, c] : terms_) {
        unsigned td = 0;
        for (auto x : e) td += x;
        d = std::max(d, td);
    }
    return d;
}

unsigned MPoly::degree_in(unsigned k) const {
    unsigned d = 0;
    for (auto& [e, c] : terms_) d = std::max(d, e[k]);
    return d;
}

std::string MPoly::str(const std::vector<std::string>& names) const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto& [e, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << "(" << c.str() << ")";
        for (unsigned k = 0; k < n_; ++k) {
            if (e[k] == 0) continue;
            os << "*" << (k < names.size() ? names[k] : "x" + std::to_string(k + 1));
            if (e[k] > 1) os << "^" << e[k];
        }
    }
    return os.str();
}

MPoly eval_bivar(const MPoly& p2, const MPoly& x, const MPoly& y) {
    MPoly r(x.nvars(), x.field());
    for (auto& [e, c] : p2.terms()) {
        MPoly t = x.pow(e[0]) * y.pow(e[1]);
        r = r + t.scaled(c);
    }
    return r;
}

}  // namespace klrfurl
