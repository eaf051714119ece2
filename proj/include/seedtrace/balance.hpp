#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "seedtrace/mc.hpp"
#include "seedtrace/polya.hpp"
#include "seedtrace/rational.hpp"
#include "seedtrace/tree.hpp"

namespace seedtrace {

struct GStatReport {
    std::map<std::uint32_t, Rational> g_per_edge;  // keyed by child vertex
    Rational g_total;
};

// g(T,e) = |T1|^2 |T2|^2 / |T|^4 for the edge identified by its child vertex.
Rational g_edge(const GrowthTree& t, std::uint32_t child);

GStatReport g_report(const GrowthTree& t);
Rational g_total(const GrowthTree& t);

// Same statistic in double precision; one subtree pass, used in Monte Carlo.
double g_total_double(const GrowthTree& t);

// E[G(UA(n,P4))] - E[G(UA(n,S4))], computed from the beta-binomial edge
// moments and cross-checked against the closed form
// (2n^3 + 5n^2 + 8n + 5) / (140 n^3); throws std::logic_error if the two
// routes disagree, std::invalid_argument if n < 4.
Rational exact_mean_diff_p4_s4(std::uint64_t n);

struct EdgeLawReport {
    BetaBinomialParams law;
    std::vector<std::uint64_t> observed;  // indexed by k = child_size - alpha
    ChiSquareReport chi_square;
};

// Simulates the child-side component size of a seed edge after growth to n and
// tests it against the matching beta-binomial law.
EdgeLawReport edge_split_law_check(const GrowthTree& seed, std::uint32_t child,
                                   std::uint32_t n, std::size_t samples,
                                   std::uint64_t master_seed,
                                   unsigned workers = default_workers());

struct StarSeparationReport {
    double threshold = 0.0;       // empirical midpoint of the two medians
    double tail_star = 0.0;       // P(G(UA(n,S_k)) >= threshold)
    double tail_other = 0.0;      // P(G(UA(n,t)) < threshold)
    double accuracy = 0.5;        // 1 - (tail_star + tail_other)/2
    double mean_star = 0.0;
    double mean_other = 0.0;
};

StarSeparationReport star_threshold_test(std::uint32_t k, const GrowthTree& other,
                                         std::uint32_t n, std::size_t samples,
                                         std::uint64_t master_seed,
                                         unsigned workers = default_workers());

}  // namespace seedtrace
