#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "seedtrace/decorated.hpp"
#include "seedtrace/rational.hpp"
#include "seedtrace/tree.hpp"

namespace seedtrace {

// Coefficient tables for the martingale
//   M_tau(n) = beta_n(tau) (F_tau(T_n) - sum_{sigma < tau} a_n(tau,sigma) F_sigma(T_n)).
//
// basis lists every sigma in D+ with sigma <= tau in a fixed linear extension
// of the partial order (sorted by size, weight, canonical id); tau is the last
// entry. All per-n matrices are strictly lower triangular in that order and
// indexed [n - n0][row][col]. Coefficients are seed independent.
struct MartingaleTable {
    std::vector<DecoratedTree> basis;
    std::vector<std::string> ids;
    std::uint32_t n0 = 2;
    std::uint32_t n_max = 2;

    // c[i][j]: coefficient of F_{basis[j]} in the one-step recurrence for
    // basis[i]; zero when j is not a reduction of i.
    std::vector<std::vector<Rational>> c;

    std::vector<std::vector<Rational>> beta;               // [n - n0][i]
    std::vector<std::vector<std::vector<Rational>>> a;     // [n - n0][i][j]
    std::vector<std::vector<std::vector<Rational>>> abar;  // [n - n0][i][j]
    std::vector<std::vector<std::vector<Rational>>> b;     // strict part of A_n^{-1}

    std::size_t tau_index() const { return basis.size() - 1; }
    const std::string& tau_id() const { return ids.back(); }
    std::size_t rows(std::uint32_t n) const { return static_cast<std::size_t>(n - n0); }
};

struct MartingaleValue {
    std::uint32_t n = 0;
    Rational value;
};

// Builds the full exact coefficient table for tau and everything below it,
// for n in [n0, n_max]. Throws std::invalid_argument if tau has a label
// outside D+ or n0 < 2 or n_max < n0.
MartingaleTable build_table(const DecoratedTree& tau, std::uint32_t n0, std::uint32_t n_max);

// Exact M value at n = |t|. Throws std::out_of_range if |t| is outside
// [n0, n_max].
MartingaleValue evaluate(const MartingaleTable& table, const GrowthTree& t);

// Exact one-step martingale identity at t: the average of evaluate over all
// |t| single-vertex extensions equals evaluate(t).
bool martingale_step_check(const MartingaleTable& table, const GrowthTree& t);

// Same tables in double precision, built by running the identical recursion
// in doubles; used for Monte Carlo at sizes where exact rationals are
// impractical.
struct MartingaleTableD {
    std::vector<DecoratedTree> basis;
    std::uint32_t n0 = 2;
    std::uint32_t n_max = 2;
    std::vector<std::vector<double>> c;
    std::vector<std::vector<double>> beta;
    std::vector<std::vector<std::vector<double>>> a;
    std::vector<std::vector<std::vector<double>>> b;
    std::size_t tau_index() const { return basis.size() - 1; }
};

MartingaleTableD build_table_double(const DecoratedTree& tau, std::uint32_t n0,
                                    std::uint32_t n_max);

double evaluate_double(const MartingaleTableD& table, const GrowthTree& t);

struct L2Point {
    std::uint32_t n = 0;
    double mean = 0.0;
    double variance = 0.0;
    double std_error = 0.0;
};

struct L2Diagnostic {
    std::vector<L2Point> points;
    // Last-point variance within a factor 2 of the mid-point variance.
    bool variance_plateau = false;
};

// Monte Carlo variance trace of M over a grid of sizes, grown from seed.
// The grid must be increasing and lie within the table range.
L2Diagnostic l2_diagnostic(const MartingaleTableD& table, const GrowthTree& seed,
                           const std::vector<std::uint32_t>& grid, std::size_t samples,
                           std::uint64_t master_seed, unsigned workers = 0);

// JSON serialization; rationals stored as "num/den" strings.
void write_table_json(std::ostream& os, const MartingaleTable& table);
MartingaleTable read_table_json(std::istream& is);

}  // namespace seedtrace
