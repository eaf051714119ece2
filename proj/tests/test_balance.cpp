#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "seedtrace/balance.hpp"

using namespace seedtrace;

TEST_CASE("g per edge") {
    GrowthTree p4 = GrowthTree::path(4);
    CHECK(g_edge(p4, 2) == make_rational(1, 16));   // middle edge, (2,2) split
    CHECK(g_edge(p4, 1) == make_rational(9, 256));  // (1,3) split
    CHECK(g_edge(GrowthTree::star(4), 3) == make_rational(9, 256));
    CHECK(g_edge(GrowthTree::path(2), 1) == make_rational(1, 16));
    CHECK_THROWS_AS(g_edge(p4, 0), std::invalid_argument);
    CHECK_THROWS_AS(g_edge(p4, 9), std::invalid_argument);
}

TEST_CASE("g totals") {
    CHECK(g_total(GrowthTree::path(4)) == make_rational(17, 128));
    CHECK(g_total(GrowthTree::star(4)) == make_rational(27, 256));
    CHECK(g_total(GrowthTree::path(2)) == make_rational(1, 16));
}

TEST_CASE("report consistency and bounds") {
    RngStream rng(4, 0);
    GrowthTree t = grow(GrowthTree::path(3), 40, rng);
    auto report = g_report(t);
    Rational total(0);
    Rational cap = make_rational(1, 16);
    for (const auto& [child, g] : report.g_per_edge) {
        CHECK(g >= 0);
        CHECK(g <= cap);
        total += g;
    }
    CHECK(total == report.g_total);
    CHECK(report.g_total == g_total(t));
    CHECK(g_total_double(t) == doctest::Approx(to_double(report.g_total)).epsilon(1e-12));
}

TEST_CASE("isomorphism invariance of G") {
    GrowthTree a = GrowthTree::from_edge_list({{0, 1}, {1, 2}, {2, 3}, {2, 4}});
    GrowthTree b = GrowthTree::from_edge_list({{4, 3}, {3, 0}, {0, 2}, {0, 1}});
    CHECK(canonical_form(a) == canonical_form(b));
    CHECK(g_total(a) == g_total(b));
}

TEST_CASE("exact mean difference, P4 vs S4") {
    CHECK(exact_mean_diff_p4_s4(4) == make_rational(7, 256));
    CHECK(exact_mean_diff_p4_s4(4) ==
          g_total(GrowthTree::path(4)) - g_total(GrowthTree::star(4)));
    CHECK(exact_mean_diff_p4_s4(10) == make_rational(2585, 140000));
    CHECK_THROWS_AS(exact_mean_diff_p4_s4(3), std::invalid_argument);
    // polynomial identity on a sample of sizes
    for (std::uint64_t n : {5ULL, 17ULL, 64ULL, 333ULL}) {
        BigInt nz(static_cast<unsigned long>(n));
        Rational lhs = exact_mean_diff_p4_s4(n) * Rational(140 * nz * nz * nz);
        CHECK(lhs == Rational(2 * nz * nz * nz + 5 * nz * nz + 8 * nz + 5));
    }
    // limit 1/70
    CHECK(std::abs(to_double(exact_mean_diff_p4_s4(100000)) - 1.0 / 70) < 1e-4);
}

TEST_CASE("edge split law") {
    auto report = edge_split_law_check(GrowthTree::path(2), 1, 3, 20000, 77, 2);
    CHECK(report.law.alpha == 1);
    CHECK(report.law.beta == 1);
    CHECK(report.law.draws == 1);
    CHECK(report.chi_square.p_value > 0.001);

    auto deep = edge_split_law_check(GrowthTree::star(4), 3, 100, 20000, 78, 4);
    CHECK(deep.law.alpha == 1);
    CHECK(deep.law.beta == 3);
    CHECK(deep.law.draws == 96);
    CHECK(deep.chi_square.p_value > 0.001);

    auto mid = edge_split_law_check(GrowthTree::path(4), 2, 100, 20000, 79, 4);
    CHECK(mid.law.alpha == 2);
    CHECK(mid.law.beta == 2);
    CHECK(mid.chi_square.p_value > 0.001);
}

TEST_CASE("worker count does not change results") {
    auto a = edge_split_law_check(GrowthTree::path(4), 2, 60, 5000, 5, 1);
    auto b = edge_split_law_check(GrowthTree::path(4), 2, 60, 5000, 5, 7);
    CHECK(a.observed == b.observed);
}

TEST_CASE("star threshold separation") {
    auto same = star_threshold_test(5, GrowthTree::star(5), 300, 2000, 11, 4);
    CHECK(std::abs(same.accuracy - 0.5) < 0.05);

    auto split = star_threshold_test(8, GrowthTree::path(4), 400, 4000, 12, 4);
    CHECK(split.accuracy > 0.55);
    CHECK(split.mean_star < split.mean_other);
}

TEST_CASE("variance of G stays bounded in n") {
    auto var_at = [](std::uint32_t n) {
        auto values = parallel_samples(3000, 4, 500 + n, [&](std::size_t, RngStream& rng) {
            return g_total_double(grow(GrowthTree::path(4), n, rng));
        });
        return summarize(values).variance;
    };
    double v100 = var_at(100);
    double v1000 = var_at(1000);
    CHECK(v1000 < 3.0 * v100 + 1e-12);
}
