#pragma once

#include <cstdint>
#include <vector>

#include "seedtrace/rational.hpp"
#include "seedtrace/rng.hpp"

namespace seedtrace {

// Parameters of B_{alpha,beta,n}: the white count of a standard Polya urn
// started at (alpha, beta) after n draws. Support is {alpha, ..., alpha+n}.
struct BetaBinomialParams {
    std::uint32_t alpha = 1;
    std::uint32_t beta = 1;
    std::uint32_t draws = 0;  // n

    std::uint32_t total() const { return alpha + beta + draws; }  // n_total
};

struct UrnState {
    std::uint32_t white;
    std::uint32_t black;
    std::uint32_t draws_made = 0;

    // The urn martingale M = white / (white + black).
    Rational fraction() const { return make_rational(white, white + black); }
};

// Exact P(B = alpha + k), 0 <= k <= n. Throws std::invalid_argument on k > n.
Rational pmf(const BetaBinomialParams& p, std::uint32_t k);

// All pmf values at once, indexed by k; one pass of integer numerators over a
// common factorial denominator, so it is much cheaper than n+1 pmf() calls.
std::vector<Rational> pmf_table(const BetaBinomialParams& p);

// Same table in double precision (stable incremental ratios); for large-n
// statistical checks where exact rationals are unnecessary.
std::vector<double> pmf_table_double(const BetaBinomialParams& p);

// One urn sample: final white count after p.draws draws.
std::uint32_t sample(const BetaBinomialParams& p, RngStream& rng);

// Exact E[B^order] by summation over the support.
Rational raw_moment(const BetaBinomialParams& p, std::uint32_t order);

// Exact E[B^2 (m - B)^2] for an arbitrary integer m; the edge statistic
// moment used for the G mean computations.
Rational squared_split_moment(const BetaBinomialParams& p, std::uint64_t m);

// Exact P(B < t * n_total * alpha/(alpha+beta)).
Rational tail_small_probability(const BetaBinomialParams& p, const Rational& t);

// True iff E[B^order] <= ((order+1) * n_total * alpha/(alpha+beta))^order,
// i.e. the moment bound with constant C(p) = p + 1, compared in exact
// rationals at the order-th power.
bool moment_bound_check(const BetaBinomialParams& p, std::uint32_t order);

// One urn draw-step; used by the exact one-step martingale enumeration tests.
inline UrnState urn_step(const UrnState& s, bool drew_white) {
    UrnState next = s;
    next.draws_made += 1;
    if (drew_white) {
        next.white += 1;
    } else {
        next.black += 1;
    }
    return next;
}

}  // namespace seedtrace
