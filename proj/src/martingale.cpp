#include "seedtrace/martingale.hpp"

#include <json.hpp>

#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "seedtrace/mc.hpp"

namespace seedtrace {

namespace {

using Json = nlohmann::json;

std::vector<std::vector<Rational>> zeros(std::size_t k) {
    return std::vector<std::vector<Rational>>(k, std::vector<Rational>(k, Rational(0)));
}

// Shared scaffolding: basis, ids, recurrence coefficients.
struct TableSkeleton {
    std::vector<DecoratedTree> basis;
    std::vector<std::string> ids;
    std::vector<std::vector<Rational>> c;
};

TableSkeleton make_skeleton(const DecoratedTree& tau) {
    if (!tau.all_labels_positive()) {
        throw std::invalid_argument("build_table: every label must be positive");
    }
    TableSkeleton s;
    s.basis = enumerate_dplus_below(tau);
    s.ids.reserve(s.basis.size());
    for (const auto& sigma : s.basis) s.ids.push_back(canonical_decorated_id(sigma));
    const std::size_t k = s.basis.size();
    s.c = zeros(k);
    for (std::size_t i = 0; i < k; ++i) {
        if (s.basis[i].size() < 2) continue;
        for (const auto& term : recurrence_terms(s.basis[i])) {
            std::string id = canonical_decorated_id(term.reduced);
            std::size_t j = 0;
            while (j < k && s.ids[j] != id) ++j;
            if (j == k) {
                throw std::logic_error("build_table: recurrence target missing from basis");
            }
            s.c[i][j] = Rational(static_cast<unsigned long>(term.coefficient));
        }
    }
    return s;
}

Rational beta_at(const DecoratedTree& sigma, std::uint32_t n) {
    const std::uint32_t w = sigma.weight();
    if (sigma.size() == 1) {
        // Undefined when n < w ([n]_w = 0): store 0 as a sentinel. Every use
        // multiplies it against a factor that vanishes there (F_sigma = 0).
        if (n < w) return Rational(0);
        BigInt den = BigInt(n) * descending_factorial(BigInt(n), w);
        return make_rational(BigInt(1), den);
    }
    BigInt num(1), den(1);
    for (std::uint32_t j = 2; j < n; ++j) {
        num *= j;
        den *= j + w;
    }
    return make_rational(num, den);
}

}  // namespace

MartingaleTable build_table(const DecoratedTree& tau, std::uint32_t n0, std::uint32_t n_max) {
    if (n0 < 2 || n_max < n0) {
        throw std::invalid_argument("build_table: need 2 <= n0 <= n_max");
    }
    auto skeleton = make_skeleton(tau);
    MartingaleTable table;
    table.basis = std::move(skeleton.basis);
    table.ids = std::move(skeleton.ids);
    table.c = std::move(skeleton.c);
    table.n0 = n0;
    table.n_max = n_max;

    const std::size_t k = table.basis.size();
    const std::size_t steps = static_cast<std::size_t>(n_max - n0) + 1;
    table.beta.resize(steps);
    table.a.assign(steps, zeros(k));
    table.abar.assign(steps, zeros(k));
    table.b.assign(steps, zeros(k));

    std::vector<std::uint32_t> weight(k);
    for (std::size_t i = 0; i < k; ++i) weight[i] = table.basis[i].weight();

    for (std::size_t r = 0; r < steps; ++r) {
        const std::uint32_t n = n0 + static_cast<std::uint32_t>(r);
        table.beta[r].resize(k);
        for (std::size_t i = 0; i < k; ++i) {
            if (r == 0 || table.basis[i].size() == 1) {
                table.beta[r][i] = beta_at(table.basis[i], n);
            } else {
                // beta_{n} = beta_{n-1} (n-1)/(n-1+w)
                table.beta[r][i] = table.beta[r - 1][i] *
                                   make_rational(static_cast<long>(n - 1),
                                                 static_cast<long>(n - 1 + weight[i]));
            }
        }
        if (r == 0) continue;  // abar, a, b all start at zero for n = n0

        const std::uint32_t m = n - 1;  // the new summand index in the abar partial sum
        const auto& beta_prev = table.beta[r - 1];
        const auto& b_prev = table.b[r - 1];
        for (std::size_t i = 0; i < k; ++i) {
            if (table.basis[i].size() < 2) continue;
            for (std::size_t j = 0; j < i; ++j) {
                Rational inner = table.c[i][j];
                for (std::size_t l = j + 1; l < i; ++l) {
                    if (table.c[i][l] != 0 && b_prev[l][j] != 0) {
                        inner += table.c[i][l] * b_prev[l][j];
                    }
                }
                table.abar[r][i][j] = table.abar[r - 1][i][j];
                // beta_prev[j] == 0 marks a degenerate single-vertex entry;
                // the true summand carries a factor [m]_w = 0 there.
                if (inner != 0 && beta_prev[j] != 0) {
                    table.abar[r][i][j] += inner / Rational(static_cast<long>(m + weight[i])) *
                                           beta_prev[i] / beta_prev[j];
                }
            }
        }
        const auto& beta_now = table.beta[r];
        for (std::size_t i = 0; i < k; ++i) {
            if (table.basis[i].size() < 2) continue;
            for (std::size_t j = 0; j < i; ++j) {
                Rational v(0);
                if (table.abar[r][i][j] != 0) v = table.abar[r][i][j] * beta_now[j];
                for (std::size_t l = j + 1; l < i; ++l) {
                    if (table.abar[r][i][l] != 0 && table.a[r][l][j] != 0) {
                        v -= table.abar[r][i][l] * table.a[r][l][j] * beta_now[l];
                    }
                }
                table.a[r][i][j] = v / beta_now[i];
            }
        }
        for (std::size_t i = 0; i < k; ++i) {
            for (std::size_t j = 0; j < i; ++j) {
                Rational v = table.a[r][i][j];
                for (std::size_t l = j + 1; l < i; ++l) {
                    if (table.a[r][i][l] != 0 && table.b[r][l][j] != 0) {
                        v += table.a[r][i][l] * table.b[r][l][j];
                    }
                }
                table.b[r][i][j] = v;
            }
        }
    }
    return table;
}

MartingaleValue evaluate(const MartingaleTable& table, const GrowthTree& t) {
    const std::uint32_t n = t.size();
    if (n < table.n0 || n > table.n_max) {
        throw std::out_of_range("evaluate: tree size outside table range");
    }
    const std::size_t r = table.rows(n);
    const std::size_t i = table.tau_index();
    if (table.basis[i].size() == 1 && table.beta[r][i] == 0) {
        throw std::out_of_range("evaluate: M undefined for n < label of single-vertex tau");
    }
    Rational acc = Rational(f_tau(table.basis[i], t));
    for (std::size_t j = 0; j < i; ++j) {
        if (table.a[r][i][j] != 0) {
            acc -= table.a[r][i][j] * Rational(f_tau(table.basis[j], t));
        }
    }
    return MartingaleValue{n, table.beta[r][i] * acc};
}

bool martingale_step_check(const MartingaleTable& table, const GrowthTree& t) {
    const std::uint32_t n = t.size();
    if (n < table.n0 || n + 1 > table.n_max) {
        throw std::out_of_range("martingale_step_check: need n and n+1 inside table range");
    }
    Rational avg(0);
    for (std::uint32_t target = 0; target < n; ++target) {
        std::vector<std::uint32_t> parent = t.parents();
        parent.push_back(target);
        GrowthTree child(std::move(parent), t.seed_size());
        avg += evaluate(table, child).value;
    }
    avg /= n;
    return avg == evaluate(table, t).value;
}

MartingaleTableD build_table_double(const DecoratedTree& tau, std::uint32_t n0,
                                    std::uint32_t n_max) {
    if (n0 < 2 || n_max < n0) {
        throw std::invalid_argument("build_table_double: need 2 <= n0 <= n_max");
    }
    auto skeleton = make_skeleton(tau);
    MartingaleTableD table;
    table.basis = std::move(skeleton.basis);
    table.n0 = n0;
    table.n_max = n_max;
    const std::size_t k = table.basis.size();
    table.c.assign(k, std::vector<double>(k, 0.0));
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) table.c[i][j] = to_double(skeleton.c[i][j]);
    }

    const std::size_t steps = static_cast<std::size_t>(n_max - n0) + 1;
    auto dzeros = [&] { return std::vector<std::vector<double>>(k, std::vector<double>(k, 0.0)); };
    table.beta.resize(steps);
    table.a.assign(steps, dzeros());
    table.b.assign(steps, dzeros());
    std::vector<std::vector<double>> abar_prev = dzeros(), abar_now = dzeros();

    std::vector<std::uint32_t> weight(k);
    for (std::size_t i = 0; i < k; ++i) weight[i] = table.basis[i].weight();

    for (std::size_t r = 0; r < steps; ++r) {
        const std::uint32_t n = n0 + static_cast<std::uint32_t>(r);
        table.beta[r].resize(k);
        for (std::size_t i = 0; i < k; ++i) {
            if (r == 0 || table.basis[i].size() == 1) {
                table.beta[r][i] = to_double(beta_at(table.basis[i], n));
            } else {
                double m = static_cast<double>(n - 1);
                table.beta[r][i] = table.beta[r - 1][i] * m / (m + weight[i]);
            }
        }
        if (r == 0) continue;
        const double m = static_cast<double>(n - 1);
        for (std::size_t i = 0; i < k; ++i) {
            if (table.basis[i].size() < 2) continue;
            for (std::size_t j = 0; j < i; ++j) {
                double inner = table.c[i][j];
                for (std::size_t l = j + 1; l < i; ++l) {
                    inner += table.c[i][l] * table.b[r - 1][l][j];
                }
                abar_now[i][j] = abar_prev[i][j];
                if (inner != 0.0 && table.beta[r - 1][j] != 0.0) {
                    abar_now[i][j] += inner / (m + weight[i]) * table.beta[r - 1][i] /
                                      table.beta[r - 1][j];
                }
            }
        }
        for (std::size_t i = 0; i < k; ++i) {
            if (table.basis[i].size() < 2) continue;
            for (std::size_t j = 0; j < i; ++j) {
                double v = abar_now[i][j] == 0.0 ? 0.0 : abar_now[i][j] * table.beta[r][j];
                for (std::size_t l = j + 1; l < i; ++l) {
                    v -= abar_now[i][l] * table.a[r][l][j] * table.beta[r][l];
                }
                table.a[r][i][j] = v / table.beta[r][i];
            }
        }
        for (std::size_t i = 0; i < k; ++i) {
            for (std::size_t j = 0; j < i; ++j) {
                double v = table.a[r][i][j];
                for (std::size_t l = j + 1; l < i; ++l) {
                    v += table.a[r][i][l] * table.b[r][l][j];
                }
                table.b[r][i][j] = v;
            }
        }
        std::swap(abar_prev, abar_now);
    }
    return table;
}

double evaluate_double(const MartingaleTableD& table, const GrowthTree& t) {
    const std::uint32_t n = t.size();
    if (n < table.n0 || n > table.n_max) {
        throw std::out_of_range("evaluate_double: tree size outside table range");
    }
    const std::size_t r = static_cast<std::size_t>(n - table.n0);
    const std::size_t i = table.tau_index();
    double acc = f_tau_double(table.basis[i], t);
    for (std::size_t j = 0; j < i; ++j) {
        if (table.a[r][i][j] != 0.0) {
            acc -= table.a[r][i][j] * f_tau_double(table.basis[j], t);
        }
    }
    return table.beta[r][i] * acc;
}

L2Diagnostic l2_diagnostic(const MartingaleTableD& table, const GrowthTree& seed,
                           const std::vector<std::uint32_t>& grid, std::size_t samples,
                           std::uint64_t master_seed, unsigned workers) {
    if (workers == 0) workers = default_workers();
    L2Diagnostic diag;
    for (std::uint32_t n : grid) {
        auto values = parallel_samples(samples, workers, master_seed,
                                       [&](std::size_t, RngStream& rng) {
                                           return evaluate_double(table, grow(seed, n, rng));
                                       });
        SampleSummary s = summarize(values);
        diag.points.push_back(L2Point{n, s.mean, s.variance, s.std_error});
    }
    if (diag.points.size() >= 3) {
        double mid = diag.points[diag.points.size() / 2].variance;
        double last = diag.points.back().variance;
        diag.variance_plateau = last <= 2.0 * mid + 1e-12;
    } else if (!diag.points.empty()) {
        diag.variance_plateau = true;
    }
    return diag;
}

namespace {

Json rational_matrix_json(const std::vector<std::vector<Rational>>& m) {
    Json out = Json::array();
    for (const auto& row : m) {
        Json jrow = Json::array();
        for (const auto& q : row) jrow.push_back(rational_to_string(q));
        out.push_back(std::move(jrow));
    }
    return out;
}

std::vector<std::vector<Rational>> rational_matrix_from(const Json& j) {
    std::vector<std::vector<Rational>> m;
    for (const auto& jrow : j) {
        std::vector<Rational> row;
        for (const auto& s : jrow) row.push_back(rational_from_string(s.get<std::string>()));
        m.push_back(std::move(row));
    }
    return m;
}

}  // namespace

void write_table_json(std::ostream& os, const MartingaleTable& table) {
    Json j;
    j["format"] = 1;
    j["n0"] = table.n0;
    j["n_max"] = table.n_max;
    Json basis = Json::array();
    for (const auto& sigma : table.basis) {
        Json entry;
        entry["parents"] = Json::array();
        for (std::uint32_t v = 1; v < sigma.size(); ++v) entry["parents"].push_back(sigma.parent(v));
        entry["labels"] = sigma.labels();
        basis.push_back(std::move(entry));
    }
    j["basis"] = std::move(basis);
    j["c"] = rational_matrix_json(table.c);
    Json beta = Json::array(), a = Json::array(), abar = Json::array(), b = Json::array();
    for (std::size_t r = 0; r < table.beta.size(); ++r) {
        Json brow = Json::array();
        for (const auto& q : table.beta[r]) brow.push_back(rational_to_string(q));
        beta.push_back(std::move(brow));
        a.push_back(rational_matrix_json(table.a[r]));
        abar.push_back(rational_matrix_json(table.abar[r]));
        b.push_back(rational_matrix_json(table.b[r]));
    }
    j["beta"] = std::move(beta);
    j["a"] = std::move(a);
    j["abar"] = std::move(abar);
    j["b"] = std::move(b);
    os << j.dump(2) << '\n';
}

MartingaleTable read_table_json(std::istream& is) {
    Json j = Json::parse(is);
    if (!j.contains("format") || j["format"].get<int>() != 1) {
        throw std::invalid_argument("read_table_json: unsupported format");
    }
    MartingaleTable table;
    table.n0 = j["n0"].get<std::uint32_t>();
    table.n_max = j["n_max"].get<std::uint32_t>();
    for (const auto& entry : j["basis"]) {
        std::vector<std::uint32_t> parents{0};
        for (const auto& p : entry["parents"]) parents.push_back(p.get<std::uint32_t>());
        auto labels = entry["labels"].get<std::vector<std::uint32_t>>();
        if (parents.size() == 1 && labels.size() == 1) {
            table.basis.push_back(DecoratedTree::single_vertex(labels[0]));
        } else {
            table.basis.emplace_back(std::move(parents), std::move(labels));
        }
        table.ids.push_back(canonical_decorated_id(table.basis.back()));
    }
    table.c = rational_matrix_from(j["c"]);
    for (std::size_t r = 0; r < j["beta"].size(); ++r) {
        std::vector<Rational> brow;
        for (const auto& s : j["beta"][r]) brow.push_back(rational_from_string(s.get<std::string>()));
        table.beta.push_back(std::move(brow));
        table.a.push_back(rational_matrix_from(j["a"][r]));
        table.abar.push_back(rational_matrix_from(j["abar"][r]));
        table.b.push_back(rational_matrix_from(j["b"][r]));
    }
    return table;
}

}  // namespace seedtrace
