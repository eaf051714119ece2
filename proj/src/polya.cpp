#include "seedtrace/polya.hpp"

#include <cmath>
#include <stdexcept>

namespace seedtrace {

namespace {

// Integer numerators u_k = C(n,k) (k+alpha-1)! (n-k+beta-1)!; the pmf is
// u_k * (alpha+beta-1)! / ((n+alpha+beta-1)! (alpha-1)! (beta-1)!).
std::vector<BigInt> pmf_numerators(const BetaBinomialParams& p) {
    const std::uint32_t n = p.draws;
    factorial(p.total());  // warm the cache once
    std::vector<BigInt> u(n + 1);
    for (std::uint32_t k = 0; k <= n; ++k) {
        u[k] = binomial(n, k) * factorial(k + p.alpha - 1) * factorial(n - k + p.beta - 1);
    }
    return u;
}

BigInt pmf_denominator(const BetaBinomialParams& p) {
    return factorial(p.total() - 1) * factorial(p.alpha - 1) * factorial(p.beta - 1);
}

BigInt pmf_scale(const BetaBinomialParams& p) { return factorial(p.alpha + p.beta - 1); }

// E[(X)_r] for the white-draw count X = B - alpha. By exchangeability this is
// (n)_r * P(first r draws are white) = (n)_r * prod (alpha+i)/(alpha+beta+i),
// so moments stay cheap for arbitrarily large n.
Rational falling_draw_moment(const BetaBinomialParams& p, std::uint32_t r) {
    Rational m(descending_factorial(BigInt(p.draws), r));
    for (std::uint32_t i = 0; i < r; ++i) {
        m *= make_rational(p.alpha + i, p.alpha + p.beta + i);
    }
    return m;
}

}  // namespace

Rational pmf(const BetaBinomialParams& p, std::uint32_t k) {
    if (k > p.draws) {
        throw std::invalid_argument("pmf: k out of range");
    }
    const std::uint32_t n = p.draws;
    BigInt num = binomial(n, k) * factorial(k + p.alpha - 1) * factorial(n - k + p.beta - 1) *
                 pmf_scale(p);
    return make_rational(num, pmf_denominator(p));
}

std::vector<Rational> pmf_table(const BetaBinomialParams& p) {
    auto u = pmf_numerators(p);
    const BigInt scale = pmf_scale(p);
    const BigInt den = pmf_denominator(p);
    std::vector<Rational> table(u.size());
    for (std::size_t k = 0; k < u.size(); ++k) {
        table[k] = make_rational(u[k] * scale, den);
    }
    return table;
}

std::vector<double> pmf_table_double(const BetaBinomialParams& p) {
    const std::uint32_t n = p.draws;
    const double a = p.alpha, b = p.beta;
    // log pmf(0) via lgamma, then stable one-step ratios.
    double log_p0 =
        std::lgamma(n + b) + std::lgamma(a + b) - std::lgamma(b) - std::lgamma(n + a + b);
    std::vector<double> table(n + 1);
    double cur = std::exp(log_p0);
    for (std::uint32_t k = 0; k <= n; ++k) {
        table[k] = cur;
        if (k < n) {
            cur *= (static_cast<double>(n - k) * (k + a)) /
                   (static_cast<double>(k + 1) * (n - k + b - 1));
        }
    }
    return table;
}

std::uint32_t sample(const BetaBinomialParams& p, RngStream& rng) {
    std::uint32_t white = p.alpha;
    std::uint32_t total = p.alpha + p.beta;
    for (std::uint32_t i = 0; i < p.draws; ++i) {
        if (rng.uniform_below(total) < white) {
            ++white;
        }
        ++total;
    }
    return white;
}

Rational raw_moment(const BetaBinomialParams& p, std::uint32_t order) {
    if (order < 1) {
        throw std::invalid_argument("raw_moment: order must be >= 1");
    }
    // Stirling numbers of the second kind turn falling factorial moments of
    // the draw count into power moments.
    std::vector<std::vector<BigInt>> stirling(order + 1,
                                              std::vector<BigInt>(order + 1, BigInt(0)));
    stirling[0][0] = 1;
    for (std::uint32_t i = 1; i <= order; ++i) {
        for (std::uint32_t j = 1; j <= i; ++j) {
            stirling[i][j] = stirling[i - 1][j - 1] + BigInt(j) * stirling[i - 1][j];
        }
    }
    std::vector<Rational> xmom(order + 1, Rational(0));
    xmom[0] = 1;
    for (std::uint32_t j = 1; j <= order; ++j) {
        for (std::uint32_t r = 1; r <= j; ++r) {
            xmom[j] += Rational(stirling[j][r]) * falling_draw_moment(p, r);
        }
    }
    // E[B^order] = E[(X + alpha)^order]
    Rational result(0);
    for (std::uint32_t j = 0; j <= order; ++j) {
        BigInt alpha_pow(1);
        for (std::uint32_t i = 0; i < order - j; ++i) alpha_pow *= p.alpha;
        result += Rational(binomial(order, j) * alpha_pow) * xmom[j];
    }
    return result;
}

Rational squared_split_moment(const BetaBinomialParams& p, std::uint64_t m) {
    // E[B^2 (m - B)^2] = m^2 E[B^2] - 2m E[B^3] + E[B^4]
    Rational mm(BigInt(static_cast<unsigned long>(m)));
    return mm * mm * raw_moment(p, 2) - 2 * mm * raw_moment(p, 3) + raw_moment(p, 4);
}

Rational tail_small_probability(const BetaBinomialParams& p, const Rational& t) {
    Rational threshold = t * p.total() * make_rational(p.alpha, p.alpha + p.beta);
    auto u = pmf_numerators(p);
    BigInt sum(0);
    for (std::uint32_t k = 0; k < u.size(); ++k) {
        if (Rational(p.alpha + k) < threshold) {
            sum += u[k];
        }
    }
    return make_rational(sum * pmf_scale(p), pmf_denominator(p));
}

bool moment_bound_check(const BetaBinomialParams& p, std::uint32_t order) {
    if (p.alpha + p.beta > p.total()) {
        throw std::invalid_argument("moment_bound_check: requires alpha+beta <= n_total");
    }
    Rational moment = raw_moment(p, order);
    Rational bound = make_rational(
        BigInt(order + 1) * p.total() * p.alpha, BigInt(p.alpha + p.beta));
    Rational bound_pow(1);
    for (std::uint32_t i = 0; i < order; ++i) bound_pow *= bound;
    return moment <= bound_pow;
}

}  // namespace seedtrace
