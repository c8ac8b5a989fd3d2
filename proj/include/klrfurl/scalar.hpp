#pragma once

// Exact coefficient fields: rationals, cyclotomic fields Q(zeta_m), prime
// fields GF(p), and univariate rational-function fields over any of these.
// Every value is kept in a canonical form, so equality of values is equality
// of representations.

#include "klrfurl/common.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace klrfurl {

enum class FieldKind { Rationals, Cyclotomic, PrimeField, RationalFunctions };

struct FieldSpec;
using FieldPtr = std::shared_ptr<const FieldSpec>;

struct FieldSpec {
    FieldKind kind = FieldKind::Rationals;
    unsigned m = 0;            // cyclotomic order
    std::uint64_t p = 0;       // prime characteristic
    FieldPtr base;             // rational-function base field
    std::string var;           // rational-function variable name

    std::vector<mpz_class> cyclo;  // monic Phi_m, ascending, size phi(m)+1
    unsigned phi = 0;

    static FieldPtr rationals();
    static FieldPtr cyclotomic(unsigned m);
    static FieldPtr prime_field(std::uint64_t p);
    static FieldPtr rational_functions(FieldPtr base, std::string var);

    bool same(const FieldSpec& o) const;
    std::uint64_t characteristic() const;  // 0 or p
    std::string describe() const;
};

class Scalar;
struct RatFunPayload;  // dense num/den coefficient lists over the base field

class Scalar {
  public:
    Scalar() = default;  // rational 0
    Scalar(const Scalar&) = default;
    Scalar(Scalar&&) = default;
    Scalar& operator=(const Scalar&) = default;
    Scalar& operator=(Scalar&&) = default;

    static Scalar zero(const FieldPtr& f);
    static Scalar one(const FieldPtr& f);
    static Scalar from_mpq(const FieldPtr& f, const mpq_class& q);  // embed Q
    static Scalar from_int(const FieldPtr& f, long v);
    // cyclotomic element from coefficient vector on 1, zeta, ..., zeta^{k-1}
    static Scalar cyclotomic_coeffs(const FieldPtr& f, std::vector<mpq_class> cs);
    static Scalar zeta(const FieldPtr& f);  // the generator zeta_m
    // the field variable x of a rational-function field
    static Scalar variable(const FieldPtr& f);
    static Scalar rat_fun(const FieldPtr& f, std::vector<Scalar> num, std::vector<Scalar> den);

    const FieldPtr& field() const { return fs_; }
    bool is_zero() const;
    bool is_one() const;

    friend Scalar operator+(const Scalar& a, const Scalar& b);
    friend Scalar operator-(const Scalar& a, const Scalar& b);
    friend Scalar operator*(const Scalar& a, const Scalar& b);
    friend Scalar operator/(const Scalar& a, const Scalar& b);
    Scalar operator-() const;
    Scalar inv() const;
    Scalar pow(long e) const;
    bool operator==(const Scalar& o) const;
    bool operator!=(const Scalar& o) const { return !(*this == o); }

    // canonical compact serialization; doubles as a total order key
    std::string key() const;
    std::string str() const;  // human-readable

    nlohmann::json to_json() const;
    static Scalar from_json(const FieldPtr& f, const nlohmann::json& j);

    // s == q * zeta^e with q rational (cyclotomic/rational fields only)
    std::optional<std::pair<mpq_class, unsigned>> unit_decompose() const;
    const mpq_class& rational_value() const;  // requires Rationals kind

    // payload access for upoly/ratfun internals
    const std::vector<mpq_class>& cyc_coeffs() const { return cv_; }
    const RatFunPayload* ratfun() const { return rf_.get(); }

  private:
    FieldPtr fs_ = FieldSpec::rationals();
    mpq_class q_;                // Rationals
    std::vector<mpq_class> cv_;  // Cyclotomic, reduced mod Phi_m, trimmed
    std::uint64_t r_ = 0;        // PrimeField, in [0, p)
    std::shared_ptr<const RatFunPayload> rf_;

    void check_same_field(const Scalar& o) const;
    friend struct ScalarOps;
};

struct RatFunPayload {
    std::vector<Scalar> num, den;  // dense ascending, den monic, gcd(num,den)=1
};

// --- field-level helpers -----------------------------------------------

// zeta_m^{m/k}: exact multiplicative order k; requires k | m
Scalar primitive_root(const FieldPtr& f, unsigned k);

// all roots of unity of the field (finite for rational/cyclotomic: {+-zeta^j})
std::vector<Scalar> roots_of_unity(const FieldPtr& f);

struct RootSolve {
    bool solved = false;            // false: cannot decide within the unit group
    std::vector<Scalar> roots;      // complete solution set when solved
};

// every x in the field with x^k == s, or solved=false when the stored unit
// group cannot decide (see ledger)
RootSolve kth_roots(const Scalar& s, unsigned k);

// multiplicative order if s is a root of unity, else nullopt
std::optional<unsigned> root_of_unity_order(const Scalar& s);

nlohmann::json field_to_json(const FieldPtr& f);
FieldPtr field_from_json(const nlohmann::json& j);

}  // namespace klrfurl
