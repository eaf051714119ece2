#include "seedtrace/mc.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>

namespace seedtrace {

std::vector<double> parallel_samples(std::size_t samples, unsigned workers,
                                     std::uint64_t master_seed,
                                     const std::function<double(std::size_t, RngStream&)>& fn) {
    if (workers == 0) workers = 1;
    std::vector<double> out(samples);
    if (workers == 1 || samples < 2 * workers) {
        for (std::size_t i = 0; i < samples; ++i) {
            RngStream rng(master_seed, i);
            out[i] = fn(i, rng);
        }
        return out;
    }
    std::atomic<std::size_t> next{0};
    constexpr std::size_t kChunk = 64;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                std::size_t begin = next.fetch_add(kChunk);
                if (begin >= samples) break;
                std::size_t end = std::min(begin + kChunk, samples);
                for (std::size_t i = begin; i < end; ++i) {
                    RngStream rng(master_seed, i);
                    out[i] = fn(i, rng);
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    return out;
}

double compensated_sum(const std::vector<double>& values) {
    double sum = 0.0, comp = 0.0;
    for (double v : values) {
        double t = sum + v;
        if (std::abs(sum) >= std::abs(v)) {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    return sum + comp;
}

SampleSummary summarize(const std::vector<double>& values) {
    SampleSummary s;
    s.count = values.size();
    if (s.count == 0) return s;
    s.mean = compensated_sum(values) / static_cast<double>(s.count);
    if (s.count > 1) {
        std::vector<double> sq(values.size());
        for (std::size_t i = 0; i < values.size(); ++i) {
            double d = values[i] - s.mean;
            sq[i] = d * d;
        }
        s.variance = compensated_sum(sq) / static_cast<double>(s.count - 1);
        s.std_error = std::sqrt(s.variance / static_cast<double>(s.count));
    }
    return s;
}

double regularized_gamma_p(double a, double x) {
    if (x < 0.0 || a <= 0.0) throw std::invalid_argument("regularized_gamma_p: bad args");
    if (x == 0.0) return 0.0;
    const double log_prefactor = a * std::log(x) - x - std::lgamma(a);
    if (x < a + 1.0) {
        // series expansion
        double term = 1.0 / a;
        double sum = term;
        double ap = a;
        for (int i = 0; i < 500; ++i) {
            ap += 1.0;
            term *= x / ap;
            sum += term;
            if (std::abs(term) < std::abs(sum) * 1e-16) break;
        }
        return sum * std::exp(log_prefactor);
    }
    // Lentz continued fraction for Q(a, x)
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-16) break;
    }
    return 1.0 - std::exp(log_prefactor) * h;
}

double chi_square_upper_tail(double statistic, double dof) {
    if (statistic <= 0.0) return 1.0;
    return 1.0 - regularized_gamma_p(dof / 2.0, statistic / 2.0);
}

ChiSquareReport chi_square_gof(const std::vector<std::uint64_t>& observed,
                               const std::vector<double>& expected_prob,
                               double min_expected) {
    if (observed.size() != expected_prob.size()) {
        throw std::invalid_argument("chi_square_gof: size mismatch");
    }
    std::uint64_t n = 0;
    for (auto c : observed) n += c;
    std::vector<double> exp_pooled;
    std::vector<double> obs_pooled;
    double e_acc = 0.0, o_acc = 0.0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        e_acc += expected_prob[i] * static_cast<double>(n);
        o_acc += static_cast<double>(observed[i]);
        if (e_acc >= min_expected) {
            exp_pooled.push_back(e_acc);
            obs_pooled.push_back(o_acc);
            e_acc = o_acc = 0.0;
        }
    }
    if (e_acc > 0.0 || o_acc > 0.0) {
        if (exp_pooled.empty()) {
            exp_pooled.push_back(e_acc);
            obs_pooled.push_back(o_acc);
        } else {
            exp_pooled.back() += e_acc;
            obs_pooled.back() += o_acc;
        }
    }
    ChiSquareReport r;
    r.pooled_bins = exp_pooled.size();
    for (std::size_t i = 0; i < exp_pooled.size(); ++i) {
        double d = obs_pooled[i] - exp_pooled[i];
        if (exp_pooled[i] > 0.0) r.statistic += d * d / exp_pooled[i];
    }
    r.dof = r.pooled_bins > 1 ? r.pooled_bins - 1 : 1;
    r.p_value = chi_square_upper_tail(r.statistic, static_cast<double>(r.dof));
    return r;
}

unsigned default_workers() {
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

}  // namespace seedtrace
