#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace seedtrace {

using BigInt = mpz_class;
using Rational = mpq_class;

// Cached factorials; grows on demand. Returns a copy because the cache may
// reallocate on later calls.
BigInt factorial(std::size_t n);

BigInt binomial(std::uint64_t n, std::uint64_t k);

// Descending factorial [k]_j = k (k-1) ... (k-j+1), with [k]_0 = 1.
BigInt descending_factorial(const BigInt& k, std::uint64_t j);

inline Rational make_rational(const BigInt& num, const BigInt& den) {
    Rational r(num, den);
    r.canonicalize();
    return r;
}

inline Rational make_rational(long num, long den) {
    Rational r(num, den);
    r.canonicalize();
    return r;
}

inline double to_double(const Rational& r) { return r.get_d(); }

std::string rational_to_string(const Rational& r);
Rational rational_from_string(const std::string& s);

}  // namespace seedtrace
