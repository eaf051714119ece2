#include "seedtrace/balance.hpp"

#include <algorithm>
#include <stdexcept>

namespace seedtrace {

Rational g_edge(const GrowthTree& t, std::uint32_t child) {
    if (child == 0 || child >= t.size()) {
        throw std::invalid_argument("g_edge: not an edge");
    }
    auto size = subtree_size_array(t);
    BigInt s(size[child]), n(t.size());
    BigInt num = s * s * (n - s) * (n - s);
    return make_rational(num, n * n * n * n);
}

GStatReport g_report(const GrowthTree& t) {
    GStatReport report;
    report.g_total = 0;
    auto size = subtree_size_array(t);
    BigInt n(t.size());
    BigInt n4 = n * n * n * n;
    for (std::uint32_t v = 1; v < t.size(); ++v) {
        BigInt s(size[v]);
        report.g_per_edge[v] = make_rational(s * s * (n - s) * (n - s), n4);
        report.g_total += report.g_per_edge[v];
    }
    return report;
}

Rational g_total(const GrowthTree& t) {
    auto size = subtree_size_array(t);
    BigInt n(t.size());
    BigInt sum(0);
    for (std::uint32_t v = 1; v < t.size(); ++v) {
        BigInt s(size[v]);
        sum += s * s * (n - s) * (n - s);
    }
    return make_rational(sum, n * n * n * n);
}

double g_total_double(const GrowthTree& t) {
    auto size = subtree_size_array(t);
    const double n = static_cast<double>(t.size());
    const double inv_n4 = 1.0 / (n * n * n * n);
    double sum = 0.0, comp = 0.0;
    for (std::uint32_t v = 1; v < t.size(); ++v) {
        double s = static_cast<double>(size[v]);
        double g = s * s * (n - s) * (n - s) * inv_n4;
        double tmp = sum + g;
        comp += (sum - tmp) + g;
        sum = tmp;
    }
    return sum + comp;
}

Rational exact_mean_diff_p4_s4(std::uint64_t n) {
    if (n < 4) {
        throw std::invalid_argument("exact_mean_diff_p4_s4: n must be >= 4");
    }
    // Only the middle edge of P4 (a (2,2) split) differs from a star edge (a
    // (1,3) split); the post-seed edges and the two leaf edges cancel.
    const std::uint32_t draws = static_cast<std::uint32_t>(n - 4);
    Rational balanced = squared_split_moment({2, 2, draws}, n);
    Rational lopsided = squared_split_moment({1, 3, draws}, n);
    BigInt nz(static_cast<unsigned long>(n));
    Rational moment_route = (balanced - lopsided) / Rational(nz * nz * nz * nz);

    BigInt poly = 2 * nz * nz * nz + 5 * nz * nz + 8 * nz + 5;
    Rational closed_form = make_rational(poly, 140 * nz * nz * nz);
    if (moment_route != closed_form) {
        throw std::logic_error("exact_mean_diff_p4_s4: moment route disagrees with closed form");
    }
    return moment_route;
}

EdgeLawReport edge_split_law_check(const GrowthTree& seed, std::uint32_t child,
                                   std::uint32_t n, std::size_t samples,
                                   std::uint64_t master_seed, unsigned workers) {
    if (child == 0 || child >= seed.size()) {
        throw std::invalid_argument("edge_split_law_check: not a seed edge");
    }
    auto seed_sizes = subtree_size_array(seed);
    EdgeLawReport report;
    report.law = {seed_sizes[child], seed.size() - seed_sizes[child], n - seed.size()};

    auto values = parallel_samples(samples, workers, master_seed,
                                   [&](std::size_t, RngStream& rng) {
                                       GrowthTree grown = grow(seed, n, rng);
                                       return static_cast<double>(subtree_size_array(grown)[child]);
                                   });
    report.observed.assign(report.law.draws + 1, 0);
    for (double v : values) {
        std::uint32_t k = static_cast<std::uint32_t>(v) - report.law.alpha;
        report.observed.at(k) += 1;
    }
    std::vector<double> expected;
    if (static_cast<std::uint64_t>(report.law.draws) <= 512) {
        for (const Rational& q : pmf_table(report.law)) expected.push_back(to_double(q));
    } else {
        expected = pmf_table_double(report.law);
    }
    report.chi_square = chi_square_gof(report.observed, expected);
    return report;
}

StarSeparationReport star_threshold_test(std::uint32_t k, const GrowthTree& other,
                                         std::uint32_t n, std::size_t samples,
                                         std::uint64_t master_seed, unsigned workers) {
    if (k < 3 || n < std::max(k, other.size())) {
        throw std::invalid_argument("star_threshold_test: need k >= 3 and n >= max(k,|t|)");
    }
    GrowthTree star_seed = GrowthTree::star(k);
    auto run = [&](const GrowthTree& seed, std::uint64_t salt) {
        return parallel_samples(samples, workers, master_seed ^ salt,
                                [&](std::size_t, RngStream& rng) {
                                    return g_total_double(grow(seed, n, rng));
                                });
    };
    std::vector<double> g_star = run(star_seed, 0x5341u);
    std::vector<double> g_other = run(other, 0x4f54u);

    auto median = [](std::vector<double> v) {
        std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
        return v[v.size() / 2];
    };
    StarSeparationReport report;
    report.threshold = 0.5 * (median(g_star) + median(g_other));
    report.mean_star = summarize(g_star).mean;
    report.mean_other = summarize(g_other).mean;
    std::size_t star_high = 0, other_low = 0;
    for (double g : g_star) star_high += (g >= report.threshold);
    for (double g : g_other) other_low += (g < report.threshold);
    report.tail_star = static_cast<double>(star_high) / static_cast<double>(samples);
    report.tail_other = static_cast<double>(other_low) / static_cast<double>(samples);
    report.accuracy = 1.0 - 0.5 * (report.tail_star + report.tail_other);
    return report;
}

}  // namespace seedtrace
