#pragma once

// Sparse multivariate polynomials over Scalar. Exponent vectors are fixed
// length n; the map ordering makes iteration deterministic. Also carries the
// exact divided-difference (Demazure) operator used by the KLR action.

#include "klrfurl/scalar.hpp"

#include <map>
#include <vector>

namespace klrfurl {

using Expo = std::vector<unsigned>;

class MPoly {
  public:
    MPoly() = default;
    MPoly(unsigned n, FieldPtr f) : n_(n), field_(std::move(f)) {}

    static MPoly zero(unsigned n, const FieldPtr& f) { return MPoly(n, f); }
    static MPoly constant(unsigned n, const Scalar& c);
    static MPoly var(unsigned n, const FieldPtr& f, unsigned k, unsigned e = 1);  // x_k^e, k is 0-based

    unsigned nvars() const { return n_; }
    const FieldPtr& field() const { return field_; }
    bool is_zero() const { return terms_.empty(); }
    const std::map<Expo, Scalar>& terms() const { return terms_; }

    void add_term(const Expo& e, const Scalar& c);

    friend MPoly operator+(const MPoly& a, const MPoly& b);
    friend MPoly operator-(const MPoly& a, const MPoly& b);
    friend MPoly operator*(const MPoly& a, const MPoly& b);
    MPoly operator-() const;
    MPoly scaled(const Scalar& c) const;
    MPoly pow(unsigned e) const;
    bool operator==(const MPoly& o) const;
    bool operator!=(const MPoly& o) const { return !(*this == o); }

    // swap variables a and b (0-based) in every exponent vector
    MPoly swapped(unsigned a, unsigned b) const;

    // (f^{(a,b)} - f) / (x_b - x_a), computed exactly
    MPoly divided_difference(unsigned a, unsigned b) const;

    // substitute x_k = shift_k + x_k for all k (Taylor re-expansion)
    MPoly shifted(const std::vector<Scalar>& shift) const;

    // drop monomials with exponent of var k >= caps[k]
    MPoly truncated(const std::vector<unsigned>& caps) const;
    // drop monomials of total degree >= cap
    MPoly total_truncated(unsigned cap) const;

    Scalar coeff(const Expo& e) const;
    Scalar eval(const std::vector<Scalar>& xs) const;
    unsigned total_degree() const;  // 0 for zero polynomial
    unsigned degree_in(unsigned k) const;

    std::string str(const std::vector<std::string>& names = {}) const;

  private:
    unsigned n_ = 0;
    FieldPtr field_ = FieldSpec::rationals();
    std::map<Expo, Scalar> terms_;
};

// P(u,v) for bivariate parameter polynomials: exponents (a,b) on (u,v).
// Evaluate a bivariate polynomial at two n-variate arguments.
MPoly eval_bivar(const MPoly& p2, const MPoly& x, const MPoly& y);

}  // namespace klrfurl
