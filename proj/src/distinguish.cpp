#include "seedtrace/distinguish.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "seedtrace/balance.hpp"
#include "seedtrace/mc.hpp"

namespace seedtrace {

namespace {

std::string budget_message(const BigInt& required, std::uint64_t budget) {
    std::ostringstream os;
    os << "exact enumeration needs " << required.get_str() << " growth paths (budget "
       << budget << ")";
    return os.str();
}

}  // namespace

EnumerationBudgetError::EnumerationBudgetError(BigInt required, std::uint64_t budget)
    : std::runtime_error(budget_message(required, budget)),
      required_(std::move(required)),
      budget_(budget) {}

Rational exact_expected_f(const GrowthTree& seed, std::uint32_t n, const DecoratedTree& tau,
                          std::uint64_t max_paths) {
    if (n < seed.size()) {
        throw std::invalid_argument("exact_expected_f: n < |seed|");
    }
    BigInt paths(1);
    for (std::uint32_t m = seed.size(); m < n; ++m) paths *= m;
    if (paths > BigInt(static_cast<unsigned long>(max_paths))) {
        throw EnumerationBudgetError(paths, max_paths);
    }

    // Distribution over isomorphism classes, advanced one attachment at a time.
    struct ClassState {
        GrowthTree rep;
        Rational prob;
    };
    std::map<std::string, ClassState> classes;
    classes.emplace(canonical_form(seed), ClassState{seed, Rational(1)});
    for (std::uint32_t m = seed.size(); m < n; ++m) {
        std::map<std::string, ClassState> next;
        for (auto& [id, state] : classes) {
            Rational step = state.prob / Rational(static_cast<long>(m));
            for (std::uint32_t target = 0; target < m; ++target) {
                std::vector<std::uint32_t> parent = state.rep.parents();
                parent.push_back(target);
                GrowthTree child(std::move(parent), seed.seed_size());
                std::string cid = canonical_form(child);
                auto it = next.find(cid);
                if (it == next.end()) {
                    next.emplace(std::move(cid), ClassState{std::move(child), step});
                } else {
                    it->second.prob += step;
                }
            }
        }
        classes = std::move(next);
    }

    Rational mean(0);
    for (auto& [id, state] : classes) {
        mean += state.prob * Rational(f_tau(tau, state.rep));
    }
    return mean;
}

SeparationResult find_separating_tau(const GrowthTree& s, const GrowthTree& t,
                                     std::uint32_t label_cap, std::uint64_t max_paths) {
    if (s.size() < 3 || t.size() < 3) {
        throw std::invalid_argument("find_separating_tau: seeds must have >= 3 vertices");
    }
    if (canonical_form(s) == canonical_form(t)) {
        throw std::invalid_argument("find_separating_tau: seeds are isomorphic");
    }
    const GrowthTree& larger = t.size() >= s.size() ? t : s;
    const std::uint32_t n0 = std::max(s.size(), t.size());
    // Fail before enumerating candidates if growing the smaller seed to n0
    // already blows the budget.
    BigInt paths(1);
    for (std::uint32_t m = std::min(s.size(), t.size()); m < n0; ++m) paths *= m;
    if (paths > BigInt(static_cast<unsigned long>(max_paths))) {
        throw EnumerationBudgetError(paths, max_paths);
    }
    DecoratedTree witness = DecoratedTree::uniform_labels(larger, 1);

    SeparationResult result;
    result.n0 = n0;
    for (const DecoratedTree& tau : enumerate_dplus_below(witness, label_cap)) {
        ++result.checked;
        Rational mean_s = exact_expected_f(s, n0, tau, max_paths);
        Rational mean_t = exact_expected_f(t, n0, tau, max_paths);
        if (mean_s != mean_t) {
            result.found = true;
            result.tau = tau;
            result.mean_s = mean_s;
            result.mean_t = mean_t;
            return result;
        }
    }
    result.cap_bound = label_cap > 0;
    return result;
}

Statistic g_statistic() {
    return Statistic{"G", [](const GrowthTree& t) { return g_total_double(t); }};
}

Statistic martingale_statistic(std::shared_ptr<const MartingaleTableD> table) {
    std::string name = "M:" + canonical_decorated_id(table->basis[table->tau_index()]);
    return Statistic{std::move(name), [table = std::move(table)](const GrowthTree& t) {
                         return evaluate_double(*table, t);
                     }};
}

double pz_bound(double mean_s, double mean_t, double var_s, double var_t) {
    double gap = mean_s - mean_t;
    double denom = 2.0 * var_s + 2.0 * var_t + gap * gap;
    if (denom <= 0.0) return 0.0;
    return gap * gap / denom;
}

namespace {

std::vector<double> simulate_statistic(const GrowthTree& seed, const Statistic& stat,
                                       std::uint32_t n, std::size_t samples,
                                       std::uint64_t master_seed, unsigned workers) {
    return parallel_samples(samples, workers, master_seed, [&](std::size_t, RngStream& rng) {
        return stat.eval(grow(seed, n, rng));
    });
}

double midpoint_threshold_accuracy(const std::vector<double>& high,
                                   const std::vector<double>& low) {
    auto median = [](std::vector<double> v) {
        std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
        return v[v.size() / 2];
    };
    double threshold = 0.5 * (median(high) + median(low));
    std::size_t correct = 0;
    for (double v : high) correct += (v >= threshold);
    for (double v : low) correct += (v < threshold);
    return static_cast<double>(correct) / static_cast<double>(high.size() + low.size());
}

// Two-sided empirical tail of x under a sorted sample.
double two_sided_tail(const std::vector<double>& sorted, double x) {
    auto lo = std::lower_bound(sorted.begin(), sorted.end(), x);
    auto hi = std::upper_bound(sorted.begin(), sorted.end(), x);
    double n = static_cast<double>(sorted.size());
    double at_most = static_cast<double>(hi - sorted.begin()) / n;
    double at_least = static_cast<double>(sorted.end() - lo) / n;
    return std::min(1.0, 2.0 * std::min(at_most, at_least));
}

std::filesystem::path cache_path(const GrowthTree& seed, const Statistic& stat,
                                 std::uint32_t n, std::size_t count,
                                 std::uint64_t master_seed) {
    const char* dir = std::getenv("SEEDTRACE_CACHE_DIR");
    if (dir == nullptr || *dir == '\0') return {};
    std::ostringstream key;
    key << canonical_form(seed) << '|' << stat.name << '|' << n << '|' << count << '|'
        << master_seed;
    std::ostringstream name;
    name << "calib-" << std::hex << std::hash<std::string>{}(key.str()) << ".txt";
    return std::filesystem::path(dir) / name.str();
}

std::vector<double> calibrate(const GrowthTree& seed, const Statistic& stat, std::uint32_t n,
                              std::size_t count, std::uint64_t master_seed, unsigned workers) {
    auto path = cache_path(seed, stat, n, count, master_seed);
    if (!path.empty()) {
        std::ifstream in(path);
        if (in) {
            std::vector<double> values;
            double v;
            while (in >> v) values.push_back(v);
            if (values.size() == count) {
                std::sort(values.begin(), values.end());
                return values;
            }
        }
    }
    auto values = simulate_statistic(seed, stat, n, count, master_seed, workers);
    if (!path.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
        std::ofstream out(path);
        out << std::hexfloat;
        for (double v : values) out << v << '\n';
    }
    std::sort(values.begin(), values.end());
    return values;
}

}  // namespace

TVReport tv_lower_bound(const GrowthTree& s, const GrowthTree& t, const Statistic& stat,
                        std::uint32_t n, std::size_t samples, std::uint64_t master_seed,
                        unsigned workers) {
    if (n < std::max(s.size(), t.size())) {
        throw std::invalid_argument("tv_lower_bound: n < max seed size");
    }
    if (samples < 100) {
        throw std::invalid_argument("tv_lower_bound: need at least 100 samples");
    }
    if (workers == 0) workers = default_workers();
    auto vs = simulate_statistic(s, stat, n, samples, master_seed ^ 0x5331u, workers);
    auto vt = simulate_statistic(t, stat, n, samples, master_seed ^ 0x5432u, workers);
    SampleSummary ss = summarize(vs), st = summarize(vt);

    TVReport report;
    report.statistic = stat.name;
    report.seed_s = canonical_form(s);
    report.seed_t = canonical_form(t);
    report.n = n;
    report.samples = samples;
    report.mean_s = ss.mean;
    report.mean_t = st.mean;
    report.var_s = ss.variance;
    report.var_t = st.variance;
    report.pz_lower_bound = pz_bound(ss.mean, st.mean, ss.variance, st.variance);

    constexpr std::size_t kBootstrap = 200;
    std::vector<double> boot(kBootstrap);
    for (std::size_t b = 0; b < kBootstrap; ++b) {
        RngStream rng(master_seed ^ 0x424f4f54u, b);
        std::vector<double> rs(samples), rt(samples);
        for (std::size_t i = 0; i < samples; ++i) {
            rs[i] = vs[rng.uniform_below(samples)];
            rt[i] = vt[rng.uniform_below(samples)];
        }
        SampleSummary bs = summarize(rs), bt = summarize(rt);
        boot[b] = pz_bound(bs.mean, bt.mean, bs.variance, bt.variance);
    }
    std::sort(boot.begin(), boot.end());
    report.ci_low = boot[static_cast<std::size_t>(0.025 * kBootstrap)];
    report.ci_high = boot[static_cast<std::size_t>(0.975 * kBootstrap) - 1];

    report.classifier_accuracy = ss.mean >= st.mean ? midpoint_threshold_accuracy(vs, vt)
                                                    : midpoint_threshold_accuracy(vt, vs);
    return report;
}

ClassifyReport classify(const GrowthTree& sample_tree, const GrowthTree& s,
                        const GrowthTree& t, const Statistic& stat, std::size_t calibration,
                        std::uint64_t master_seed, unsigned workers) {
    if (workers == 0) workers = default_workers();
    const std::uint32_t n = sample_tree.size();
    auto cal_s = calibrate(s, stat, n, calibration, master_seed ^ 0x43414c53u, workers);
    auto cal_t = calibrate(t, stat, n, calibration, master_seed ^ 0x43414c54u, workers);

    ClassifyReport report;
    report.statistic = stat.name;
    report.observed = stat.eval(sample_tree);
    report.tail_s = two_sided_tail(cal_s, report.observed);
    report.tail_t = two_sided_tail(cal_t, report.observed);
    report.chose_s = report.tail_s >= report.tail_t;
    return report;
}

double classification_accuracy(const GrowthTree& truth, const GrowthTree& s,
                               const GrowthTree& t, const Statistic& stat, std::uint32_t n,
                               std::size_t trials, std::size_t calibration,
                               std::uint64_t master_seed, unsigned workers) {
    if (workers == 0) workers = default_workers();
    auto cal_s = calibrate(s, stat, n, calibration, master_seed ^ 0x43414c53u, workers);
    auto cal_t = calibrate(t, stat, n, calibration, master_seed ^ 0x43414c54u, workers);
    bool truth_is_s = canonical_form(truth) == canonical_form(s);

    auto observed = simulate_statistic(truth, stat, n, trials, master_seed ^ 0x54524941u,
                                       workers);
    std::size_t correct = 0;
    for (double x : observed) {
        bool chose_s = two_sided_tail(cal_s, x) >= two_sided_tail(cal_t, x);
        correct += (chose_s == truth_is_s);
    }
    return static_cast<double>(correct) / static_cast<double>(trials);
}

}  // namespace seedtrace
