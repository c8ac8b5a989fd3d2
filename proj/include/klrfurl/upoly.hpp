#pragma once

// Dense univariate polynomials over Scalar, ascending coefficient order.
// Used for rational-function payloads, CRT idempotents and series helpers.

#include "klrfurl/scalar.hpp"

#include <optional>
#include <vector>

namespace klrfurl::up {

using Poly = std::vector<Scalar>;

void trim(Poly& p);
int deg(const Poly& p);  // -1 for zero
bool is_zero(const Poly& p);
Poly constant(const FieldPtr& f, const Scalar& c);
Poly add(const Poly& a, const Poly& b);
Poly sub(const Poly& a, const Poly& b);
Poly neg(const Poly& a);
Poly mul(const Poly& a, const Poly& b);
Poly scale(const Poly& a, const Scalar& c);
Scalar eval(const Poly& a, const Scalar& x);
Poly monic(const Poly& a);

// euclidean division; divisor nonzero
std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b);
Poly gcd(const Poly& a, const Poly& b);  // monic
// g = s*a + t*b with g = gcd(a,b) monic
void xgcd(const Poly& a, const Poly& b, Poly& g, Poly& s, Poly& t);

// exact monic k-th root of a monic polynomial, if it exists
std::optional<Poly> monic_kth_root(const Poly& a, unsigned k, const FieldPtr& f);

}  // namespace klrfurl::up
