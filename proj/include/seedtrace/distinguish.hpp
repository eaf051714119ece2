#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "seedtrace/decorated.hpp"
#include "seedtrace/martingale.hpp"
#include "seedtrace/rational.hpp"
#include "seedtrace/tree.hpp"

namespace seedtrace {

// Exact-expectation enumeration would need more growth paths than allowed.
class EnumerationBudgetError : public std::runtime_error {
  public:
    EnumerationBudgetError(BigInt required, std::uint64_t budget);
    const BigInt& required_paths() const { return required_; }
    std::uint64_t budget() const { return budget_; }

  private:
    BigInt required_;
    std::uint64_t budget_;
};

// E[F_tau(UA(n, seed))] by exact enumeration of all attachment sequences,
// aggregated by isomorphism class at each step. The budget counts raw paths
// |seed| (|seed|+1) ... (n-1).
Rational exact_expected_f(const GrowthTree& seed, std::uint32_t n, const DecoratedTree& tau,
                          std::uint64_t max_paths = 10'000'000);

struct SeparationResult {
    bool found = false;
    DecoratedTree tau = DecoratedTree::single_vertex(1);
    Rational mean_s, mean_t;   // exact expectations at n0 = max(|s|,|t|)
    std::uint32_t n0 = 0;
    std::size_t checked = 0;   // candidates examined, in linear-extension order
    bool cap_bound = false;    // true when not found and a label cap was active
};

// First tau (in the fixed linear extension of the partial order, capped at the
// all-ones labeling of the larger seed) whose exact expected F differs between
// the two seeds at n0. Throws std::invalid_argument on isomorphic seeds.
SeparationResult find_separating_tau(const GrowthTree& s, const GrowthTree& t,
                                     std::uint32_t label_cap = 0,
                                     std::uint64_t max_paths = 10'000'000);

// A scalar statistic of a grown tree, used by the Monte Carlo layers.
struct Statistic {
    std::string name;
    std::function<double(const GrowthTree&)> eval;
};

Statistic g_statistic();
Statistic martingale_statistic(std::shared_ptr<const MartingaleTableD> table);

struct TVReport {
    std::string statistic;
    std::string seed_s;  // canonical forms
    std::string seed_t;
    std::uint32_t n = 0;
    std::size_t samples = 0;
    double mean_s = 0.0, mean_t = 0.0;
    double var_s = 0.0, var_t = 0.0;
    double pz_lower_bound = 0.0;     // plug-in estimate, not a certified bound
    double ci_low = 0.0, ci_high = 0.0;  // bootstrap 95% interval for the estimate
    double classifier_accuracy = 0.5;
};

// (mu_s - mu_t)^2 / (2 var_s + 2 var_t + (mu_s - mu_t)^2); 0 when everything
// is zero.
double pz_bound(double mean_s, double mean_t, double var_s, double var_t);

TVReport tv_lower_bound(const GrowthTree& s, const GrowthTree& t, const Statistic& stat,
                        std::uint32_t n, std::size_t samples, std::uint64_t master_seed,
                        unsigned workers = 0);

struct ClassifyReport {
    std::string statistic;
    double observed = 0.0;
    double tail_s = 0.0;  // two-sided empirical tail under each calibration
    double tail_t = 0.0;
    bool chose_s = false;
};

// Likelihood-free decision: calibrates the statistic under both candidate
// seeds at n = |sample_tree| and picks the seed whose empirical distribution
// makes the observed value less extreme. Calibration samples are cached under
// $SEEDTRACE_CACHE_DIR when set.
ClassifyReport classify(const GrowthTree& sample_tree, const GrowthTree& s,
                        const GrowthTree& t, const Statistic& stat, std::size_t calibration,
                        std::uint64_t master_seed, unsigned workers = 0);

// Repeated classify trials on fresh trees grown from truth; returns the
// fraction decided correctly.
double classification_accuracy(const GrowthTree& truth, const GrowthTree& s,
                               const GrowthTree& t, const Statistic& stat, std::uint32_t n,
                               std::size_t trials, std::size_t calibration,
                               std::uint64_t master_seed, unsigned workers = 0);

}  // namespace seedtrace
