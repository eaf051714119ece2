#pragma once

#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

#include "seedtrace/rng.hpp"

namespace seedtrace {

// Runs fn(sample_index, rng) for every sample and stores the results by
// sample index. Each sample gets its own RngStream(master_seed, sample_index),
// so the output vector is a pure function of (master_seed, samples) and does
// not depend on the worker count; --workers only changes throughput.
std::vector<double> parallel_samples(std::size_t samples, unsigned workers,
                                     std::uint64_t master_seed,
                                     const std::function<double(std::size_t, RngStream&)>& fn);

// Neumaier compensated sum, in index order.
double compensated_sum(const std::vector<double>& values);

struct SampleSummary {
    std::size_t count = 0;
    double mean = 0.0;
    double variance = 0.0;  // unbiased
    double std_error = 0.0;
};

SampleSummary summarize(const std::vector<double>& values);

// Regularized lower incomplete gamma P(a, x).
double regularized_gamma_p(double a, double x);

// Upper tail of the chi-square distribution with dof degrees of freedom.
double chi_square_upper_tail(double statistic, double dof);

struct ChiSquareReport {
    double statistic = 0.0;
    std::size_t dof = 0;
    double p_value = 1.0;
    std::size_t pooled_bins = 0;
};

// Goodness of fit of observed counts against expected probabilities. Bins are
// pooled left to right until each pooled bin has expected count >= min_expected.
ChiSquareReport chi_square_gof(const std::vector<std::uint64_t>& observed,
                               const std::vector<double>& expected_prob,
                               double min_expected = 5.0);

unsigned default_workers();

}  // namespace seedtrace
