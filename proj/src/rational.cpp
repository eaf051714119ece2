#include "seedtrace/rational.hpp"

#include <mutex>

namespace seedtrace {

namespace {
std::vector<BigInt> g_factorials{BigInt(1)};
std::mutex g_factorial_mutex;
}  // namespace

BigInt factorial(std::size_t n) {
    std::lock_guard<std::mutex> lock(g_factorial_mutex);
    while (g_factorials.size() <= n) {
        g_factorials.push_back(g_factorials.back() *
                               BigInt(static_cast<unsigned long>(g_factorials.size())));
    }
    return g_factorials[n];
}

BigInt binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return BigInt(0);
    BigInt result;
    mpz_bin_uiui(result.get_mpz_t(), n, k);
    return result;
}

BigInt descending_factorial(const BigInt& k, std::uint64_t j) {
    BigInt result(1);
    BigInt factor = k;
    for (std::uint64_t i = 0; i < j; ++i) {
        result *= factor;
        factor -= 1;
    }
    return result;
}

std::string rational_to_string(const Rational& r) { return r.get_str(); }

Rational rational_from_string(const std::string& s) {
    Rational r;
    if (r.set_str(s, 10) != 0) {
        throw std::invalid_argument("bad rational literal: " + s);
    }
    r.canonicalize();
    return r;
}

}  // namespace seedtrace
