#include "klrfurl/scalar.hpp"

#include "klrfurl/upoly.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace klrfurl {

// ---------------------------------------------------------------- mpq polys
// small local toolkit for Q[x], used by the cyclotomic layer
namespace {

using QP = std::vector<mpq_class>;

void qp_trim(QP& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

QP qp_rem(QP a, const QP& monic_div) {
    // remainder of a modulo a monic divisor
    const std::size_t dn = monic_div.size() - 1;
    while (a.size() > dn) {
        mpq_class c = a.back();
        a.pop_back();
        if (c != 0) {
            const std::size_t off = a.size() - dn;
            for (std::size_t j = 0; j < dn; ++j) a[off + j] -= c * monic_div[j];
        }
    }
    qp_trim(a);
    return a;
}

std::pair<QP, QP> qp_divmod(QP a, QP b) {
    qp_trim(a);
    qp_trim(b);
    if (b.empty()) throw error("qp_divmod: division by zero polynomial");
    QP q(a.size() > b.size() - 1 ? a.size() - b.size() + 1 : 0, mpq_class(0));
    const mpq_class lead = b.back();
    while (a.size() >= b.size()) {
        mpq_class c = a.back() / lead;
        std::size_t off = a.size() - b.size();
        q[off] = c;
        for (std::size_t j = 0; j < b.size(); ++j) a[off + j] -= c * b[j];
        qp_trim(a);
        if (a.size() >= b.size() && a.back() == 0) qp_trim(a);
        if (!a.empty() && a.size() > off + b.size() - 1) a.resize(off + b.size() - 1);
        qp_trim(a);
    }
    qp_trim(q);
    return {q, a};
}

QP qp_mul(const QP& a, const QP& b) {
    if (a.empty() || b.empty()) return {};
    QP r(a.size() + b.size() - 1, mpq_class(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    qp_trim(r);
    return r;
}

QP qp_sub(QP a, const QP& b) {
    if (a.size() < b.size()) a.resize(b.size(), mpq_class(0));
    for (std::size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
    qp_trim(a);
    return a;
}

// extended euclid in Q[x]; returns monic g and s with s*a == g (mod modp).
// Enough for inverses: a*s + m*t = g.
QP qp_inverse_mod(const QP& a, const QP& modp) {
    QP r0 = modp, r1 = a, s0 = {}, s1 = {mpq_class(1)};
    while (!r1.empty()) {
        auto [q, r2] = qp_divmod(r0, r1);
        QP s2 = qp_sub(s0, qp_mul(q, s1));
        r0 = std::move(r1);
        r1 = std::move(r2);
        s0 = std::move(s1);
        s1 = std::move(s2);
    }
    if (r0.size() != 1) throw error("cyclotomic inverse: element not a unit");
    mpq_class lead = r0[0];
    for (auto& c : s0) c /= lead;
    qp_trim(s0);
    return s0;
}

// Phi_m over Z, cached
const std::vector<mpz_class>& cyclotomic_polynomial(unsigned m) {
    static std::map<unsigned, std::vector<mpz_class>> cache;
    auto it = cache.find(m);
    if (it != cache.end()) return it->second;
    // x^m - 1 divided by all Phi_d, d|m, d<m (exact integer division)
    std::vector<mpz_class> f(m + 1, mpz_class(0));
    f[0] = -1;
    f[m] = 1;
    for (unsigned d = 1; d < m; ++d) {
        if (m % d != 0) continue;
        const auto& pd = cyclotomic_polynomial(d);
        // f /= pd, both monic
        std::vector<mpz_class> q(f.size() - pd.size() + 1, mpz_class(0));
        std::vector<mpz_class> rem = f;
        while (rem.size() >= pd.size()) {
            mpz_class c = rem.back();
            std::size_t off = rem.size() - pd.size();
            q[off] = c;
            for (std::size_t j = 0; j < pd.size(); ++j) rem[off + j] -= c * pd[j];
            while (!rem.empty() && rem.back() == 0) rem.pop_back();
        }
        if (!rem.empty()) throw error("cyclotomic polynomial division not exact");
        f = std::move(q);
    }
    return cache.emplace(m, std::move(f)).first->second;
}

bool is_prime_u64(std::uint64_t p) {
    if (p < 2) return false;
    for (std::uint64_t d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

std::uint64_t pf_mul(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
}

std::uint64_t pf_pow(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
    std::uint64_t r = 1 % p;
    while (e) {
        if (e & 1) r = pf_mul(r, a, p);
        a = pf_mul(a, a, p);
        e >>= 1;
    }
    return r;
}

std::uint64_t pf_inv(std::uint64_t a, std::uint64_t p) {
    if (a == 0) throw error("division by zero");
    // p prime
    return pf_pow(a, p - 2, p);
}

// exact rational k-th root of q > 0, if any
std::optional<mpq_class> positive_rational_kth_root(const mpq_class& q, unsigned k) {
    mpz_class num = q.get_num(), den = q.get_den();
    mpz_class rn, rd;
    if (!mpz_root(rn.get_mpz_t(), num.get_mpz_t(), k)) return std::nullopt;
    if (!mpz_root(rd.get_mpz_t(), den.get_mpz_t(), k)) return std::nullopt;
    mpq_class r(rn, rd);
    r.canonicalize();
    return r;
}

}  // namespace

// ---------------------------------------------------------------- FieldSpec

FieldPtr FieldSpec::rationals() {
    static FieldPtr f = [] {
        auto s = std::make_shared<FieldSpec>();
        s->kind = FieldKind::Rationals;
        return FieldPtr(s);
    }();
    return f;
}

FieldPtr FieldSpec::cyclotomic(unsigned m) {
    if (m < 1) throw precondition_error("cyclotomic order must be >= 1");
    if (m > 2000) throw precondition_error("cyclotomic order too large");
    auto s = std::make_shared<FieldSpec>();
    s->kind = FieldKind::Cyclotomic;
    s->m = m;
    s->cyclo = cyclotomic_polynomial(m);
    s->phi = static_cast<unsigned>(s->cyclo.size() - 1);
    return s;
}

FieldPtr FieldSpec::prime_field(std::uint64_t p) {
    if (!is_prime_u64(p)) throw precondition_error("prime-field characteristic must be prime");
    auto s = std::make_shared<FieldSpec>();
    s->kind = FieldKind::PrimeField;
    s->p = p;
    return s;
}

FieldPtr FieldSpec::rational_functions(FieldPtr base, std::string var) {
    if (!base) throw precondition_error("rational-function field needs a base field");
    if (base->kind == FieldKind::RationalFunctions)
        throw precondition_error("rational-function fields are univariate only");
    auto s = std::make_shared<FieldSpec>();
    s->kind = FieldKind::RationalFunctions;
    s->base = std::move(base);
    s->var = var.empty() ? std::string("q") : std::move(var);
    return s;
}

bool FieldSpec::same(const FieldSpec& o) const {
    if (kind != o.kind) return false;
    switch (kind) {
        case FieldKind::Rationals: return true;
        case FieldKind::Cyclotomic: return m == o.m;
        case FieldKind::PrimeField: return p == o.p;
        case FieldKind::RationalFunctions: return var == o.var && base->same(*o.base);
    }
    return false;
}

std::uint64_t FieldSpec::characteristic() const {
    switch (kind) {
        case FieldKind::PrimeField: return p;
        case FieldKind::RationalFunctions: return base->characteristic();
        default: return 0;
    }
}

std::string FieldSpec::describe() const {
    switch (kind) {
        case FieldKind::Rationals: return "Q";
        case FieldKind::Cyclotomic: return "Q(zeta_" + std::to_string(m) + ")";
        case FieldKind::PrimeField: return "GF(" + std::to_string(p) + ")";
        case FieldKind::RationalFunctions: return base->describe() + "(" + var + ")";
    }
    return "?";
}

// ------------------------------------------------------------------- Scalar

void Scalar::check_same_field(const Scalar& o) const {
    if (!fs_->same(*o.fs_)) throw field_error("field mismatch: " + fs_->describe() + " vs " + o.fs_->describe());
}

Scalar Scalar::zero(const FieldPtr& f) {
    Scalar s;
    s.fs_ = f;
    if (f->kind == FieldKind::RationalFunctions) {
        auto pl = std::make_shared<RatFunPayload>();
        pl->den = {Scalar::one(f->base)};
        s.rf_ = std::move(pl);
    }
    return s;
}

Scalar Scalar::one(const FieldPtr& f) { return from_mpq(f, mpq_class(1)); }

Scalar Scalar::from_int(const FieldPtr& f, long v) { return from_mpq(f, mpq_class(v)); }

Scalar Scalar::from_mpq(const FieldPtr& f, const mpq_class& q) {
    Scalar s = zero(f);
    switch (f->kind) {
        case FieldKind::Rationals: s.q_ = q; break;
        case FieldKind::Cyclotomic:
            if (q != 0) s.cv_ = {q};
            break;
        case FieldKind::PrimeField: {
            mpz_class num = q.get_num() % mpz_class(static_cast<unsigned long>(f->p));
            if (num < 0) num += static_cast<unsigned long>(f->p);
            mpz_class den = q.get_den() % mpz_class(static_cast<unsigned long>(f->p));
            if (den == 0) throw field_error("rational with denominator divisible by p");
            std::uint64_t n = num.get_ui(), d = den.get_ui();
            s.r_ = pf_mul(n, pf_inv(d, f->p), f->p);
            break;
        }
        case FieldKind::RationalFunctions: {
            auto pl = std::make_shared<RatFunPayload>();
            Scalar c = Scalar::from_mpq(f->base, q);
            if (!c.is_zero()) pl->num = {c};
            pl->den = {Scalar::one(f->base)};
            s.rf_ = std::move(pl);
            break;
        }
    }
    return s;
}

Scalar Scalar::cyclotomic_coeffs(const FieldPtr& f, std::vector<mpq_class> cs) {
    if (f->kind != FieldKind::Cyclotomic) throw field_error("cyclotomic_coeffs on non-cyclotomic field");
    Scalar s = zero(f);
    // reduce modulo Phi_m
    QP v(cs.begin(), cs.end());
    QP phim(f->cyclo.size());
    for (std::size_t i = 0; i < f->cyclo.size(); ++i) phim[i] = mpq_class(f->cyclo[i]);
    v = qp_rem(std::move(v), phim);
    s.cv_.assign(v.begin(), v.end());
    return s;
}

Scalar Scalar::zeta(const FieldPtr& f) {
    if (f->kind != FieldKind::Cyclotomic) throw field_error("zeta on non-cyclotomic field");
    std::vector<mpq_class> cs(2, mpq_class(0));
    cs[1] = 1;
    return cyclotomic_coeffs(f, std::move(cs));
}

Scalar Scalar::variable(const FieldPtr& f) {
    if (f->kind != FieldKind::RationalFunctions) throw field_error("variable on non-function field");
    return rat_fun(f, {Scalar::zero(f->base), Scalar::one(f->base)}, {Scalar::one(f->base)});
}

Scalar Scalar::rat_fun(const FieldPtr& f, std::vector<Scalar> num, std::vector<Scalar> den) {
    if (f->kind != FieldKind::RationalFunctions) throw field_error("rat_fun on non-function field");
    up::trim(num);
    up::trim(den);
    if (up::is_zero(den)) throw field_error("rational function with zero denominator");
    up::Poly g = up::gcd(num, den);
    if (up::deg(g) > 0) {
        num = up::divmod(num, g).first;
        den = up::divmod(den, g).first;
    }
    // normalize: monic denominator
    Scalar lead = den.back();
    if (!lead.is_one()) {
        Scalar li = lead.inv();
        num = up::scale(num, li);
        den = up::scale(den, li);
    }
    Scalar s = zero(f);
    auto pl = std::make_shared<RatFunPayload>();
    pl->num = std::move(num);
    pl->den = std::move(den);
    s.rf_ = std::move(pl);
    return s;
}

bool Scalar::is_zero() const {
    switch (fs_->kind) {
        case FieldKind::Rationals: return q_ == 0;
        case FieldKind::Cyclotomic: return cv_.empty();
        case FieldKind::PrimeField: return r_ == 0;
        case FieldKind::RationalFunctions: return rf_->num.empty();
    }
    return false;
}

bool Scalar::is_one() const { return *this == Scalar::one(fs_); }

Scalar operator+(const Scalar& a, const Scalar& b) {
    a.check_same_field(b);
    Scalar s = Scalar::zero(a.fs_);
    switch (a.fs_->kind) {
        case FieldKind::Rationals: s.q_ = a.q_ + b.q_; break;
        case FieldKind::Cyclotomic: {
            std::vector<mpq_class> v(std::max(a.cv_.size(), b.cv_.size()), mpq_class(0));
            for (std::size_t i = 0; i < a.cv_.size(); ++i) v[i] += a.cv_[i];
            for (std::size_t i = 0; i < b.cv_.size(); ++i) v[i] += b.cv_[i];
            while (!v.empty() && v.back() == 0) v.pop_back();
            s.cv_ = std::move(v);
            break;
        }
        case FieldKind::PrimeField: {
            std::uint64_t r = a.r_ + b.r_;
            if (r >= a.fs_->p) r -= a.fs_->p;
            s.r_ = r;
            break;
        }
        case FieldKind::RationalFunctions: {
            const auto &x = *a.rf_, &y = *b.rf_;
            auto num = up::add(up::mul(x.num, y.den), up::mul(y.num, x.den));
            auto den = up::mul(x.den, y.den);
            return Scalar::rat_fun(a.fs_, std::move(num), std::move(den));
        }
    }
    return s;
}

Scalar Scalar::operator-() const {
    Scalar s = Scalar::zero(fs_);
    switch (fs_->kind) {
        case FieldKind::Rationals: s.q_ = -q_; break;
        case FieldKind::Cyclotomic:
            s.cv_ = cv_;
            for (auto& c : s.cv_) c = -c;
            break;
        case FieldKind::PrimeField: s.r_ = r_ == 0 ? 0 : fs_->p - r_; break;
        case FieldKind::RationalFunctions: {
            auto pl = std::make_shared<RatFunPayload>();
            pl->num = up::neg(rf_->num);
            pl->den = rf_->den;
            s.rf_ = std::move(pl);
            break;
        }
    }
    return s;
}

Scalar operator-(const Scalar& a, const Scalar& b) { return a + (-b); }

Scalar operator*(const Scalar& a, const Scalar& b) {
    a.check_same_field(b);
    Scalar s = Scalar::zero(a.fs_);
    switch (a.fs_->kind) {
        case FieldKind::Rationals: s.q_ = a.q_ * b.q_; break;
        case FieldKind::Cyclotomic: {
            if (a.cv_.empty() || b.cv_.empty()) return s;
            std::vector<mpq_class> v(a.cv_.size() + b.cv_.size() - 1, mpq_class(0));
            for (std::size_t i = 0; i < a.cv_.size(); ++i)
                for (std::size_t j = 0; j < b.cv_.size(); ++j) v[i + j] += a.cv_[i] * b.cv_[j];
            return Scalar::cyclotomic_coeffs(a.fs_, std::move(v));
        }
        case FieldKind::PrimeField: s.r_ = pf_mul(a.r_, b.r_, a.fs_->p); break;
        case FieldKind::RationalFunctions:
            return Scalar::rat_fun(a.fs_, up::mul(a.rf_->num, b.rf_->num), up::mul(a.rf_->den, b.rf_->den));
    }
    return s;
}

Scalar Scalar::inv() const {
    if (is_zero()) throw field_error("division by zero");
    Scalar s = Scalar::zero(fs_);
    switch (fs_->kind) {
        case FieldKind::Rationals: s.q_ = 1 / q_; break;
        case FieldKind::Cyclotomic: {
            QP a(cv_.begin(), cv_.end());
            QP phim(fs_->cyclo.size());
            for (std::size_t i = 0; i < fs_->cyclo.size(); ++i) phim[i] = mpq_class(fs_->cyclo[i]);
            QP r = qp_inverse_mod(a, phim);
            s.cv_.assign(r.begin(), r.end());
            break;
        }
        case FieldKind::PrimeField: s.r_ = pf_inv(r_, fs_->p); break;
        case FieldKind::RationalFunctions: return Scalar::rat_fun(fs_, rf_->den, rf_->num);
    }
    return s;
}

Scalar operator/(const Scalar& a, const Scalar& b) { return a * b.inv(); }

Scalar Scalar::pow(long e) const {
    if (e < 0) return inv().pow(-e);
    Scalar r = Scalar::one(fs_);
    Scalar b = *this;
    unsigned long u = static_cast<unsigned long>(e);
    while (u) {
        if (u & 1) r = r * b;
        b = b * b;
        u >>= 1;
    }
    return r;
}

bool Scalar::operator==(const Scalar& o) const {
    if (!fs_->same(*o.fs_)) return false;
    switch (fs_->kind) {
        case FieldKind::Rationals: return q_ == o.q_;
        case FieldKind::Cyclotomic: return cv_ == o.cv_;
        case FieldKind::PrimeField: return r_ == o.r_;
        case FieldKind::RationalFunctions: {
            if (rf_->num.size() != o.rf_->num.size() || rf_->den.size() != o.rf_->den.size()) return false;
            for (std::size_t i = 0; i < rf_->num.size(); ++i)
                if (!(rf_->num[i] == o.rf_->num[i])) return false;
            for (std::size_t i = 0; i < rf_->den.size(); ++i)
                if (!(rf_->den[i] == o.rf_->den[i])) return false;
            return true;
        }
    }
    return false;
}

const mpq_class& Scalar::rational_value() const {
    if (fs_->kind != FieldKind::Rationals) throw field_error("rational_value on non-rational scalar");
    return q_;
}

std::string Scalar::key() const {
    switch (fs_->kind) {
        case FieldKind::Rationals: return q_.get_str();
        case FieldKind::Cyclotomic: {
            std::string k = "c" + std::to_string(fs_->m) + ":";
            for (auto& c : cv_) k += c.get_str() + ",";
            return k;
        }
        case FieldKind::PrimeField: return "p" + std::to_string(fs_->p) + ":" + std::to_string(r_);
        case FieldKind::RationalFunctions: {
            std::string k = "f(";
            for (auto& c : rf_->num) k += c.key() + ",";
            k += ")/(";
            for (auto& c : rf_->den) k += c.key() + ",";
            return k + ")";
        }
    }
    return "";
}

std::string Scalar::str() const {
    switch (fs_->kind) {
        case FieldKind::Rationals: return q_.get_str();
        case FieldKind::Cyclotomic: {
            if (cv_.empty()) return "0";
            std::ostringstream os;
            bool first = true;
            for (std::size_t i = 0; i < cv_.size(); ++i) {
                if (cv_[i] == 0) continue;
                if (!first) os << " + ";
                first = false;
                if (i == 0 || cv_[i] != 1) os << cv_[i].get_str();
                if (i > 0) {
                    if (cv_[i] != 1) os << "*";
                    os << "z" << fs_->m;
                    if (i > 1) os << "^" << i;
                }
            }
            return os.str();
        }
        case FieldKind::PrimeField: return std::to_string(r_);
        case FieldKind::RationalFunctions: {
            auto poly_str = [&](const up::Poly& p) {
                if (p.empty()) return std::string("0");
                std::ostringstream os;
                bool first = true;
                for (std::size_t i = 0; i < p.size(); ++i) {
                    if (p[i].is_zero()) continue;
                    if (!first) os << " + ";
                    first = false;
                    os << "(" << p[i].str() << ")";
                    if (i > 0) {
                        os << "*" << fs_->var;
                        if (i > 1) os << "^" << i;
                    }
                }
                return os.str();
            };
            return "(" + poly_str(rf_->num) + ")/(" + poly_str(rf_->den) + ")";
        }
    }
    return "?";
}

nlohmann::json Scalar::to_json() const {
    switch (fs_->kind) {
        case FieldKind::Rationals: return q_.get_str();
        case FieldKind::Cyclotomic: {
            nlohmann::json cs = nlohmann::json::array();
            for (auto& c : cv_) cs.push_back(c.get_str());
            return nlohmann::json{{"zeta_order", fs_->m}, {"coeffs", cs}};
        }
        case FieldKind::PrimeField: return r_;
        case FieldKind::RationalFunctions: {
            nlohmann::json num = nlohmann::json::array(), den = nlohmann::json::array();
            for (auto& c : rf_->num) num.push_back(c.to_json());
            for (auto& c : rf_->den) den.push_back(c.to_json());
            return nlohmann::json{{"num", num}, {"den", den}};
        }
    }
    return nullptr;
}

Scalar Scalar::from_json(const FieldPtr& f, const nlohmann::json& j) {
    try {
        switch (f->kind) {
            case FieldKind::Rationals:
                if (j.is_number_integer()) return from_mpq(f, mpq_class(j.get<long>()));
                return from_mpq(f, mpq_from_str(j.get<std::string>()));
            case FieldKind::Cyclotomic: {
                if (j.is_string() || j.is_number_integer()) {
                    // plain rational literal embeds
                    mpq_class q = j.is_string() ? mpq_from_str(j.get<std::string>()) : mpq_class(j.get<long>());
                    return from_mpq(f, q);
                }
                if (j.contains("zeta_order") && j["zeta_order"].get<unsigned>() != f->m)
                    throw parse_error("zeta_order mismatch");
                std::vector<mpq_class> cs;
                for (auto& c : j.at("coeffs"))
                    cs.push_back(c.is_string() ? mpq_from_str(c.get<std::string>()) : mpq_class(c.get<long>()));
                return cyclotomic_coeffs(f, std::move(cs));
            }
            case FieldKind::PrimeField: {
                long v = j.is_string() ? std::stol(j.get<std::string>()) : j.get<long>();
                return from_mpq(f, mpq_class(v));
            }
            case FieldKind::RationalFunctions: {
                if (j.is_string() || j.is_number_integer()) {
                    mpq_class q = j.is_string() ? mpq_from_str(j.get<std::string>()) : mpq_class(j.get<long>());
                    return from_mpq(f, q);
                }
                std::vector<Scalar> num, den;
                for (auto& c : j.at("num")) num.push_back(from_json(f->base, c));
                for (auto& c : j.at("den")) den.push_back(from_json(f->base, c));
                return rat_fun(f, std::move(num), std::move(den));
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw parse_error(std::string("bad scalar literal: ") + e.what());
    }
    throw parse_error("bad scalar literal");
}

std::optional<std::pair<mpq_class, unsigned>> Scalar::unit_decompose() const {
    if (fs_->kind == FieldKind::Rationals) return std::make_pair(q_, 0u);
    if (fs_->kind != FieldKind::Cyclotomic) return std::nullopt;
    Scalar z = Scalar::zeta(fs_);
    Scalar t = *this;
    Scalar zinv = z.pow(static_cast<long>(fs_->m) - 1);  // zeta^{-1} = zeta^{m-1}
    for (unsigned e = 0; e < fs_->m; ++e) {
        if (t.cv_.size() <= 1) {
            mpq_class q = t.cv_.empty() ? mpq_class(0) : t.cv_[0];
            return std::make_pair(q, e);
        }
        t = t * zinv;
    }
    return std::nullopt;
}

// ------------------------------------------------------------ field helpers

Scalar primitive_root(const FieldPtr& f, unsigned k) {
    if (k == 0) throw precondition_error("primitive_root: k must be positive");
    if (f->kind == FieldKind::Rationals) {
        if (k == 1) return Scalar::one(f);
        if (k == 2) return -Scalar::one(f);
        throw field_error("primitive_root: Q only contains 1st and 2nd roots of unity");
    }
    if (f->kind != FieldKind::Cyclotomic) throw field_error("primitive_root: field is not cyclotomic");
    if (f->m % k != 0) throw field_error("primitive_root: k does not divide the cyclotomic order");
    return Scalar::zeta(f).pow(static_cast<long>(f->m / k));
}

std::vector<Scalar> roots_of_unity(const FieldPtr& f) {
    std::vector<Scalar> out;
    auto push_unique = [&](const Scalar& s) {
        for (auto& t : out)
            if (t == s) return;
        out.push_back(s);
    };
    switch (f->kind) {
        case FieldKind::Rationals:
            out = {Scalar::one(f), -Scalar::one(f)};
            break;
        case FieldKind::Cyclotomic: {
            Scalar z = Scalar::zeta(f);
            Scalar t = Scalar::one(f);
            for (unsigned j = 0; j < f->m; ++j) {
                push_unique(t);
                push_unique(-t);
                t = t * z;
            }
            break;
        }
        case FieldKind::PrimeField: {
            if (f->p > 4096) throw field_error("roots of unity enumeration: prime field too large");
            for (std::uint64_t x = 1; x < f->p; ++x) push_unique(Scalar::from_mpq(f, mpq_class(static_cast<unsigned long>(x))));
            break;
        }
        case FieldKind::RationalFunctions: {
            for (auto& r : roots_of_unity(f->base)) {
                up::Poly num = {r}, den = {Scalar::one(f->base)};
                out.push_back(Scalar::rat_fun(f, num, den));
            }
            break;
        }
    }
    return out;
}

std::optional<unsigned> root_of_unity_order(const Scalar& s) {
    if (s.is_zero()) return std::nullopt;
    unsigned cap = 2;
    switch (s.field()->kind) {
        case FieldKind::Rationals: cap = 2; break;
        case FieldKind::Cyclotomic: cap = 2 * s.field()->m; break;
        case FieldKind::PrimeField: cap = 4096; break;
        case FieldKind::RationalFunctions: cap = s.field()->base->kind == FieldKind::Cyclotomic ? 2 * s.field()->base->m : 4096; break;
    }
    Scalar t = s;
    Scalar one = Scalar::one(s.field());
    for (unsigned k = 1; k <= cap; ++k) {
        if (t == one) return k;
        t = t * s;
    }
    return std::nullopt;
}

nlohmann::json field_to_json(const FieldPtr& f) {
    switch (f->kind) {
        case FieldKind::Rationals: return nlohmann::json{{"kind", "rationals"}};
        case FieldKind::Cyclotomic: return nlohmann::json{{"kind", "cyclotomic"}, {"m", f->m}};
        case FieldKind::PrimeField: return nlohmann::json{{"kind", "prime-field"}, {"p", f->p}};
        case FieldKind::RationalFunctions:
            return nlohmann::json{{"kind", "rational-functions"}, {"base", field_to_json(f->base)}, {"variable", f->var}};
    }
    return nullptr;
}

FieldPtr field_from_json(const nlohmann::json& j) {
    try {
        std::string kind = j.at("kind").get<std::string>();
        if (kind == "rationals") return FieldSpec::rationals();
        if (kind == "cyclotomic") return FieldSpec::cyclotomic(j.at("m").get<unsigned>());
        if (kind == "prime-field") return FieldSpec::prime_field(j.at("p").get<std::uint64_t>());
        if (kind == "rational-functions")
            return FieldSpec::rational_functions(field_from_json(j.at("base")), j.value("variable", "q"));
        throw parse_error("unknown field kind: " + kind);
    } catch (const nlohmann::json::exception& e) {
        throw parse_error(std::string("bad field spec: ") + e.what());
    }
}

RootSolve kth_roots(const Scalar& s, unsigned k) {
    if (k == 0) throw precondition_error("kth_roots: k must be positive");
    const FieldPtr& f = s.field();
    RootSolve out;
    if (k == 1) {
        out.solved = true;
        out.roots = {s};
        return out;
    }
    if (s.is_zero()) {
        out.solved = true;
        out.roots = {s};
        return out;
    }
    switch (f->kind) {
        case FieldKind::Rationals: {
            out.solved = true;
            const mpq_class& q = s.rational_value();
            mpq_class aq = q < 0 ? mpq_class(-q) : q;
            auto r = positive_rational_kth_root(aq, k);
            if (!r) return out;  // certified: no rational k-th root
            if (q > 0) {
                out.roots.push_back(Scalar::from_mpq(f, *r));
                if (k % 2 == 0) out.roots.push_back(Scalar::from_mpq(f, mpq_class(-*r)));
            } else {
                if (k % 2 == 1) out.roots.push_back(Scalar::from_mpq(f, mpq_class(-*r)));
                // k even, q < 0: no solution in Q
            }
            return out;
        }
        case FieldKind::Cyclotomic: {
            auto dec = s.unit_decompose();
            if (!dec) return out;  // not expressible in the unit group
            mpq_class q = dec->first;
            mpq_class aq = q < 0 ? mpq_class(-q) : q;
            auto r0 = positive_rational_kth_root(aq, k);
            if (!r0) return out;  // solved=false: could have a root outside the unit group
            // candidates r0 * (+-zeta^t) are exhaustive (see ledger)
            Scalar base = Scalar::from_mpq(f, *r0);
            Scalar z = Scalar::zeta(f);
            Scalar t = base;
            out.solved = true;
            for (unsigned j = 0; j < f->m; ++j) {
                for (const Scalar& cand : {t, -t}) {
                    if (cand.pow(k) == s) {
                        bool dup = false;
                        for (auto& e : out.roots) dup = dup || e == cand;
                        if (!dup) out.roots.push_back(cand);
                    }
                }
                t = t * z;
            }
            return out;
        }
        case FieldKind::PrimeField: {
            if (f->p > 65536) return out;  // solved=false
            out.solved = true;
            for (std::uint64_t x = 0; x < f->p; ++x) {
                Scalar c = Scalar::from_mpq(f, mpq_class(static_cast<unsigned long>(x)));
                if (c.pow(k) == s) out.roots.push_back(c);
            }
            return out;
        }
        case FieldKind::RationalFunctions: {
            const RatFunPayload& pl = *s.ratfun();
            Scalar lead = pl.num.back();
            up::Poly nmonic = up::scale(pl.num, lead.inv());
            auto nroot = up::monic_kth_root(nmonic, k, f->base);
            auto droot = up::monic_kth_root(pl.den, k, f->base);
            if (!nroot || !droot) {
                out.solved = true;  // certified by unique factorization
                return out;
            }
            RootSolve cs = kth_roots(lead, k);
            if (!cs.solved) return out;
            out.solved = true;
            for (auto& c : cs.roots) {
                up::Poly num = up::scale(*nroot, c);
                out.roots.push_back(Scalar::rat_fun(f, num, *droot));
            }
            return out;
        }
    }
    return out;
}

}  // namespace klrfurl
