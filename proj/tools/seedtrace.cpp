#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "seedtrace/balance.hpp"
#include "seedtrace/distinguish.hpp"
#include "seedtrace/martingale.hpp"
#include "seedtrace/mc.hpp"
#include "seedtrace/polya.hpp"
#include "seedtrace/tree.hpp"

using namespace seedtrace;
using Json = nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitBudget = 3;

void emit(const Json& report, const std::string& out_path, const std::string& format) {
    std::ostringstream body;
    if (format == "csv") {
        for (auto it = report.begin(); it != report.end(); ++it) {
            body << it.key() << ',';
            if (it->is_string()) {
                body << it->get<std::string>();
            } else {
                body << it->dump();
            }
            body << '\n';
        }
    } else {
        body << report.dump(2) << '\n';
    }
    if (out_path.empty()) {
        std::cout << body.str();
    } else {
        std::ofstream out(out_path);
        if (!out) throw std::invalid_argument("cannot open output file: " + out_path);
        out << body.str();
    }
}

GrowthTree random_tree(std::uint32_t size, std::uint32_t seed_size, RngStream& rng) {
    std::vector<std::uint32_t> parent{0};
    for (std::uint32_t v = 1; v < size; ++v) parent.push_back(rng.uniform_below(v));
    return GrowthTree(std::move(parent), seed_size);
}

int cmd_grow(const std::string& seed_path, std::uint32_t n, std::uint64_t master_seed,
             const std::string& out_path) {
    GrowthTree seed = load_tree_file(seed_path);
    RngStream rng(master_seed, 0);
    GrowthTree grown = grow(seed, n == 0 ? seed.size() : n, rng);
    if (out_path.empty()) {
        write_tree(std::cout, grown);
        std::cerr << "diameter " << diameter(grown) << "\nG " << rational_to_string(g_total(grown))
                  << "\n";
    } else {
        save_tree_file(out_path, grown);
        std::cout << "diameter " << diameter(grown) << "\nG " << rational_to_string(g_total(grown))
                  << "\n";
    }
    return kExitOk;
}

int cmd_stat(const std::string& tree_path, const std::string& tau_path,
             const std::string& out_path, const std::string& format) {
    GrowthTree t = load_tree_file(tree_path);
    Json report;
    report["n"] = t.size();
    Rational g = g_total(t);
    report["g"] = rational_to_string(g);
    report["g_double"] = to_double(g);
    report["diameter"] = diameter(t);
    if (!tau_path.empty()) {
        DecoratedTree tau = load_decorated_file(tau_path);
        BigInt f = f_tau(tau, t);
        report["tau"] = canonical_decorated_id(tau);
        report["f"] = f.get_str();
    }
    emit(report, out_path, format);
    return kExitOk;
}

int verify_recurrence(std::uint64_t master_seed, std::size_t cases) {
    RngStream rng(master_seed, 0xEC);
    std::size_t failures = 0;
    for (std::size_t i = 0; i < cases; ++i) {
        std::uint32_t tsize = 3 + rng.uniform_below(10);  // up to 12
        GrowthTree t = random_tree(tsize, 2 + rng.uniform_below(tsize - 1), rng);
        std::uint32_t tau_size = 2 + rng.uniform_below(3);  // the recurrence needs an edge
        std::vector<std::uint32_t> parent{0};
        for (std::uint32_t v = 1; v < tau_size; ++v) parent.push_back(rng.uniform_below(v));
        std::vector<std::uint32_t> labels;
        for (std::uint32_t v = 0; v < tau_size; ++v) labels.push_back(rng.uniform_below(4));
        DecoratedTree tau(std::move(parent), std::move(labels));
        if (!verify_recurrence_exact(tau, t)) ++failures;
    }
    std::cout << (cases - failures) << "/" << cases << " exact identities\n";
    return failures == 0 ? kExitOk : kExitVerifyFail;
}

int verify_martingale(std::uint64_t master_seed) {
    std::vector<DecoratedTree> taus = {
        DecoratedTree::single_vertex(1), DecoratedTree::single_vertex(2),
        DecoratedTree::edge(1, 1), DecoratedTree::edge(1, 2), DecoratedTree::path3(1, 1, 1)};
    std::vector<GrowthTree> seeds = {GrowthTree::path(2), GrowthTree::path(3),
                                     GrowthTree::star(4)};
    RngStream rng(master_seed, 0x3A);
    std::size_t checks = 0, failures = 0;
    for (const auto& tau : taus) {
        for (const auto& seed : seeds) {
            auto table = build_table(tau, seed.size(), 11);
            for (int rep = 0; rep < 5; ++rep) {
                GrowthTree t = grow(seed, seed.size() + rng.uniform_below(11 - seed.size()), rng);
                ++checks;
                if (!martingale_step_check(table, t)) ++failures;
            }
        }
    }
    std::cout << (checks - failures) << "/" << checks << " exact step checks\n";
    return failures == 0 ? kExitOk : kExitVerifyFail;
}

int verify_polya(std::uint64_t master_seed, std::size_t samples) {
    std::size_t failures = 0;
    for (std::uint32_t a = 1; a <= 4; ++a) {
        for (std::uint32_t b = 1; b <= 4; ++b) {
            BetaBinomialParams p{a, b, 40};
            Rational total(0);
            for (const Rational& q : pmf_table(p)) total += q;
            if (total != 1) ++failures;
        }
    }
    std::vector<BetaBinomialParams> laws = {{1, 1, 20}, {2, 3, 15}, {1, 3, 30}, {2, 2, 25},
                                            {4, 1, 10}};
    for (std::size_t i = 0; i < laws.size(); ++i) {
        RngStream rng(master_seed, 0x50 + i);
        std::vector<std::uint64_t> observed(laws[i].draws + 1, 0);
        for (std::size_t s = 0; s < samples; ++s) {
            observed[sample(laws[i], rng) - laws[i].alpha] += 1;
        }
        std::vector<double> expected;
        for (const Rational& q : pmf_table(laws[i])) expected.push_back(to_double(q));
        auto chi = chi_square_gof(observed, expected);
        if (chi.p_value <= 0.001) ++failures;
    }
    std::cout << (failures == 0 ? "polya checks pass\n" : "polya checks FAIL\n");
    return failures == 0 ? kExitOk : kExitVerifyFail;
}

int verify_edge_law(std::uint32_t n, std::size_t samples, std::uint64_t master_seed,
                    unsigned workers) {
    auto report = edge_split_law_check(GrowthTree::path(4), 2, n, samples, master_seed, workers);
    std::cout << "chi-square " << report.chi_square.statistic << " p "
              << report.chi_square.p_value << "\n";
    return report.chi_square.p_value > 0.001 ? kExitOk : kExitVerifyFail;
}

int verify_diameter(std::uint32_t n, std::size_t samples, std::uint64_t master_seed,
                    unsigned workers) {
    GrowthTree seed = GrowthTree::path(2);
    auto diameters = parallel_samples(samples, workers, master_seed,
                                      [&](std::size_t, RngStream& rng) {
                                          return static_cast<double>(diameter(grow(seed, n, rng)));
                                      });
    double bound = 20.0 * std::log(static_cast<double>(n));
    std::size_t violations = 0;
    double sum = 0.0;
    for (double d : diameters) {
        sum += d;
        if (d > bound) ++violations;
    }
    std::cout << "mean diameter " << sum / static_cast<double>(samples) << ", bound " << bound
              << ", violations " << violations << "\n";
    return violations == 0 ? kExitOk : kExitVerifyFail;
}

int verify_p4s4(std::uint32_t n) {
    // exact_mean_diff_p4_s4 already cross-checks the two routes internally.
    Rational diff = exact_mean_diff_p4_s4(n);
    std::cout << "E[G(P4)] - E[G(S4)] at n=" << n << ": " << rational_to_string(diff)
              << " (both routes agree)\n";
    return kExitOk;
}

int cmd_verify(const std::string& suite, std::uint32_t n, std::size_t samples,
               std::uint64_t master_seed, unsigned workers) {
    if (suite == "recurrence") return verify_recurrence(master_seed, 200);
    if (suite == "martingale") return verify_martingale(master_seed);
    if (suite == "polya") return verify_polya(master_seed, samples == 0 ? 100000 : samples);
    if (suite == "edge-law")
        return verify_edge_law(n == 0 ? 200 : n, samples == 0 ? 20000 : samples, master_seed,
                               workers);
    if (suite == "diameter")
        return verify_diameter(n == 0 ? 10000 : n, samples == 0 ? 20 : samples, master_seed,
                               workers);
    if (suite == "p4s4") return verify_p4s4(n == 0 ? 100 : n);
    throw CLI::ValidationError("--suite", "unknown suite: " + suite);
}

int cmd_distinguish(const std::string& seed_path, const std::string& seed_b_path,
                    const std::string& tau_path, std::uint32_t n, std::size_t samples,
                    std::uint64_t master_seed, unsigned workers, bool find_tau,
                    std::uint32_t label_cap, const std::string& classify_path,
                    const std::string& out_path, const std::string& format) {
    GrowthTree s = load_tree_file(seed_path);
    GrowthTree t = load_tree_file(seed_b_path);
    Json report;

    if (find_tau) {
        auto sep = find_separating_tau(s, t, label_cap);
        report["separating_tau_found"] = sep.found;
        report["candidates_checked"] = sep.checked;
        if (sep.found) {
            report["separating_tau"] = canonical_decorated_id(sep.tau);
            report["mean_s"] = rational_to_string(sep.mean_s);
            report["mean_t"] = rational_to_string(sep.mean_t);
            report["gap"] = rational_to_string(sep.mean_s - sep.mean_t);
            report["n0"] = sep.n0;
        } else if (sep.cap_bound) {
            report["note"] = "label cap prevented reaching the guaranteed witness";
        }
    }

    Statistic stat = g_statistic();
    if (!tau_path.empty()) {
        DecoratedTree tau = load_decorated_file(tau_path);
        auto table = std::make_shared<MartingaleTableD>(
            build_table_double(tau, std::min(s.size(), t.size()), n));
        stat = martingale_statistic(std::move(table));
    }

    if (samples > 0) {
        if (canonical_form(s) == canonical_form(t)) {
            std::cerr << "warning: seeds are isomorphic; the bound estimates 0\n";
        }
        TVReport tv = tv_lower_bound(s, t, stat, n, samples, master_seed, workers);
        report["statistic"] = tv.statistic;
        report["n"] = tv.n;
        report["samples"] = tv.samples;
        report["mean_s"] = tv.mean_s;
        report["mean_t"] = tv.mean_t;
        report["var_s"] = tv.var_s;
        report["var_t"] = tv.var_t;
        report["pz_lower_bound"] = tv.pz_lower_bound;
        report["pz_ci_low"] = tv.ci_low;
        report["pz_ci_high"] = tv.ci_high;
        report["classifier_accuracy"] = tv.classifier_accuracy;
    }

    if (!classify_path.empty()) {
        GrowthTree sample_tree = load_tree_file(classify_path);
        auto c = classify(sample_tree, s, t, stat,
                          samples == 0 ? 1000 : samples, master_seed, workers);
        report["classify_observed"] = c.observed;
        report["classify_tail_s"] = c.tail_s;
        report["classify_tail_t"] = c.tail_t;
        report["classify_chose"] = c.chose_s ? "seed" : "seed-b";
    }

    emit(report, out_path, format);
    return kExitOk;
}

int cmd_table(const std::string& tau_path, std::uint32_t n0, std::uint32_t n_max,
              const std::string& out_path) {
    DecoratedTree tau = load_decorated_file(tau_path);
    MartingaleTable table = build_table(tau, n0, n_max);
    if (out_path.empty()) {
        write_table_json(std::cout, table);
    } else {
        std::ofstream out(out_path);
        if (!out) throw std::invalid_argument("cannot open output file: " + out_path);
        write_table_json(out, table);
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"uniform-attachment tree growth and seed distinguishing"};
    app.require_subcommand(1);
    app.set_config("--config");

    std::string seed_path, seed_b_path, tau_path, out_path, classify_path;
    std::string format = "json", suite;
    std::uint32_t n = 0, n0 = 2, label_cap = 0;
    std::size_t samples = 0;
    std::uint64_t master_seed = 0;
    unsigned workers = 0;
    bool find_tau = false;

    auto* grow_cmd = app.add_subcommand("grow", "grow a tree from a seed");
    grow_cmd->add_option("--seed", seed_path, "seed tree file")->required();
    grow_cmd->add_option("--n", n, "target size");
    grow_cmd->add_option("--rng", master_seed, "master seed");
    grow_cmd->add_option("--out", out_path, "output tree file");

    auto* stat_cmd = app.add_subcommand("stat", "statistics of a stored tree");
    stat_cmd->add_option("--seed", seed_path, "tree file")->required();
    stat_cmd->add_option("--tau", tau_path, "decorated tree file");
    stat_cmd->add_option("--out", out_path, "output path");
    stat_cmd->add_option("--format", format, "json|csv");

    auto* verify_cmd = app.add_subcommand("verify", "run a verification suite");
    verify_cmd
        ->add_option("--suite", suite,
                     "recurrence | martingale | polya | edge-law | diameter | p4s4")
        ->required();
    verify_cmd->add_option("--n", n, "size parameter");
    verify_cmd->add_option("--samples", samples, "sample count");
    verify_cmd->add_option("--rng", master_seed, "master seed");
    verify_cmd->add_option("--workers", workers, "worker threads");

    auto* dist_cmd = app.add_subcommand("distinguish", "two-seed separation pipeline");
    dist_cmd->add_option("--seed", seed_path, "first seed tree file")->required();
    dist_cmd->add_option("--seed-b", seed_b_path, "second seed tree file")->required();
    dist_cmd->add_option("--tau", tau_path, "decorated tree file (use M statistic)");
    dist_cmd->add_option("--n", n, "grown size");
    dist_cmd->add_option("--samples", samples, "samples per arm");
    dist_cmd->add_option("--rng", master_seed, "master seed");
    dist_cmd->add_option("--workers", workers, "worker threads");
    dist_cmd->add_flag("--find-tau", find_tau, "search for an exactly separating tau");
    dist_cmd->add_option("--label-cap", label_cap, "cap labels in the tau search");
    dist_cmd->add_option("--classify", classify_path, "classify this tree file");
    dist_cmd->add_option("--out", out_path, "output path");
    dist_cmd->add_option("--format", format, "json|csv");

    auto* table_cmd = app.add_subcommand("table", "build a martingale coefficient table");
    table_cmd->add_option("--tau", tau_path, "decorated tree file")->required();
    table_cmd->add_option("--n0", n0, "starting size");
    table_cmd->add_option("--n", n, "largest size")->required();
    table_cmd->add_option("--out", out_path, "output path");

    try {
        app.parse(argc, argv);
        if (grow_cmd->parsed()) return cmd_grow(seed_path, n, master_seed, out_path);
        if (stat_cmd->parsed()) return cmd_stat(seed_path, tau_path, out_path, format);
        if (verify_cmd->parsed()) return cmd_verify(suite, n, samples, master_seed, workers);
        if (dist_cmd->parsed())
            return cmd_distinguish(seed_path, seed_b_path, tau_path, n, samples, master_seed,
                                   workers, find_tau, label_cap, classify_path, out_path, format);
        if (table_cmd->parsed()) return cmd_table(tau_path, n0, n, out_path);
        return kExitUsage;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    } catch (const EnumerationBudgetError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBudget;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}
