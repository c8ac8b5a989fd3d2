#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace klrfurl {

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// bad or inconsistent input data / unmet operation precondition -> CLI exit 2
struct precondition_error : error {
    using error::error;
};

// coefficient-field problems (mismatched fields, missing roots, ...) -> CLI exit 3
struct field_error : error {
    using error::error;
};

// malformed files / options -> CLI exit 4
struct parse_error : error {
    using error::error;
};

inline mpz_class mpz_lcm_(const mpz_class& a, const mpz_class& b) {
    mpz_class r;
    mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

inline mpz_class mpz_gcd_(const mpz_class& a, const mpz_class& b) {
    mpz_class r;
    mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

inline std::string mpq_str(const mpq_class& q) { return q.get_str(); }

inline mpq_class mpq_from_str(const std::string& s) {
    mpq_class q;
    if (q.set_str(s, 10) != 0) throw parse_error("bad rational literal: " + s);
    q.canonicalize();
    return q;
}

}  // namespace klrfurl
