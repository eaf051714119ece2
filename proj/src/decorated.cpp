#include "seedtrace/decorated.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace seedtrace {

DecoratedTree::DecoratedTree(std::vector<std::uint32_t> parent, std::vector<std::uint32_t> labels)
    : parent_(std::move(parent)), labels_(std::move(labels)) {
    if (parent_.empty() || parent_.size() != labels_.size()) {
        throw std::invalid_argument("DecoratedTree: shape/label size mismatch");
    }
    for (std::uint32_t v = 1; v < parent_.size(); ++v) {
        if (parent_[v] >= v) {
            throw std::invalid_argument("DecoratedTree: parent[v] must be < v");
        }
    }
}

DecoratedTree DecoratedTree::single_vertex(std::uint32_t label) {
    return DecoratedTree({0}, {label});
}

DecoratedTree DecoratedTree::edge(std::uint32_t l0, std::uint32_t l1) {
    return DecoratedTree({0, 0}, {l0, l1});
}

DecoratedTree DecoratedTree::path3(std::uint32_t l0, std::uint32_t l1, std::uint32_t l2) {
    return DecoratedTree({0, 0, 1}, {l0, l1, l2});
}

DecoratedTree DecoratedTree::uniform_labels(const GrowthTree& shape, std::uint32_t label) {
    return DecoratedTree(shape.parents(), std::vector<std::uint32_t>(shape.size(), label));
}

std::uint32_t DecoratedTree::weight() const {
    return std::accumulate(labels_.begin(), labels_.end(), 0u);
}

std::vector<std::vector<std::uint32_t>> DecoratedTree::adjacency() const {
    std::vector<std::vector<std::uint32_t>> adj(size());
    for (std::uint32_t v = 1; v < size(); ++v) {
        adj[v].push_back(parent_[v]);
        adj[parent_[v]].push_back(v);
    }
    return adj;
}

bool DecoratedTree::is_leaf(std::uint32_t v) const {
    if (size() == 1) return true;
    std::uint32_t degree = (v != 0) ? 1 : 0;
    for (std::uint32_t u = 1; u < size(); ++u) {
        if (parent_[u] == v) ++degree;
    }
    return degree == 1;
}

std::vector<std::uint32_t> DecoratedTree::leaves() const {
    std::vector<std::uint32_t> out;
    for (std::uint32_t v = 0; v < size(); ++v) {
        if (is_leaf(v)) out.push_back(v);
    }
    return out;
}

bool DecoratedTree::all_labels_positive() const {
    return std::all_of(labels_.begin(), labels_.end(), [](std::uint32_t l) { return l >= 1; });
}

bool DecoratedTree::has_zero_label_leaf() const {
    for (std::uint32_t v : leaves()) {
        if (labels_[v] == 0) return true;
    }
    return false;
}

std::vector<std::uint32_t> DecoratedTree::low_label_leaves() const {
    std::vector<std::uint32_t> out;
    for (std::uint32_t v : leaves()) {
        if (labels_[v] <= 1) out.push_back(v);
    }
    return out;
}

bool partial_order_lt(const DecoratedTree& a, const DecoratedTree& b) {
    const std::uint32_t sa = a.size(), sb = b.size();
    const std::uint32_t wa = a.weight(), wb = b.weight();
    return (sa < sb && wa <= wb) || (sa <= sb && wa < wb);
}

bool partial_order_le(const DecoratedTree& a, const DecoratedTree& b) {
    return partial_order_lt(a, b) ||
           (a.size() == b.size() && a.weight() == b.weight() &&
            canonical_decorated_id(a) == canonical_decorated_id(b));
}

namespace {

std::vector<std::uint32_t> adj_centers(const std::vector<std::vector<std::uint32_t>>& adj) {
    std::uint32_t n = static_cast<std::uint32_t>(adj.size());
    if (n == 1) return {0};
    std::vector<std::uint32_t> degree(n), layer;
    for (std::uint32_t v = 0; v < n; ++v) {
        degree[v] = static_cast<std::uint32_t>(adj[v].size());
        if (degree[v] <= 1) layer.push_back(v);
    }
    std::uint32_t remaining = n;
    while (remaining > 2) {
        remaining -= static_cast<std::uint32_t>(layer.size());
        std::vector<std::uint32_t> next;
        for (std::uint32_t leaf : layer) {
            for (std::uint32_t u : adj[leaf]) {
                if (--degree[u] == 1) next.push_back(u);
            }
        }
        layer = std::move(next);
    }
    return layer;
}

std::string labeled_ahu(const std::vector<std::vector<std::uint32_t>>& adj,
                        const std::vector<std::uint32_t>& labels, std::uint32_t v,
                        std::uint32_t from) {
    std::vector<std::string> children;
    for (std::uint32_t u : adj[v]) {
        if (u != from) children.push_back(labeled_ahu(adj, labels, u, v));
    }
    std::sort(children.begin(), children.end());
    std::string s = "(" + std::to_string(labels[v]) + "|";
    for (auto& c : children) s += c;
    s += ")";
    return s;
}

}  // namespace

std::string canonical_decorated_id(const DecoratedTree& t) {
    auto adj = t.adjacency();
    std::string best;
    for (std::uint32_t c : adj_centers(adj)) {
        std::string enc = labeled_ahu(adj, t.labels(), c, c);
        if (best.empty() || enc < best) best = std::move(enc);
    }
    return best;
}

DecoratedTree reduce_leaf(const DecoratedTree& t, std::uint32_t v) {
    if (t.size() < 2) {
        throw std::invalid_argument("reduce_leaf: tree too small");
    }
    if (v >= t.size() || !t.is_leaf(v)) {
        throw std::invalid_argument("reduce_leaf: vertex is not a leaf");
    }
    if (t.size() == 2) {
        return DecoratedTree::single_vertex(t.label(1 - v));
    }
    // Relabel surviving vertices to 0..m-2 preserving relative order.
    std::vector<std::uint32_t> relabel(t.size(), 0);
    std::uint32_t next = 0;
    std::vector<std::uint32_t> new_labels;
    for (std::uint32_t u = 0; u < t.size(); ++u) {
        if (u == v) continue;
        relabel[u] = next++;
        new_labels.push_back(t.label(u));
    }
    // Surviving edges, relabeled. The single edge incident to v disappears.
    const std::uint32_t m = t.size() - 1;
    std::vector<std::vector<std::uint32_t>> nadj(m);
    for (std::uint32_t u = 1; u < t.size(); ++u) {
        if (u == v || t.parent(u) == v) continue;
        std::uint32_t x = relabel[u], y = relabel[t.parent(u)];
        nadj[x].push_back(y);
        nadj[y].push_back(x);
    }
    // BFS from relabeled vertex 0 to restore the parent-precedes-child form.
    std::vector<std::uint32_t> order{0}, pos(m, UINT32_MAX);
    pos[0] = 0;
    std::vector<std::uint32_t> bfs_parent(m, 0);
    for (std::size_t i = 0; i < order.size(); ++i) {
        std::uint32_t u = order[i];
        for (std::uint32_t w : nadj[u]) {
            if (pos[w] == UINT32_MAX) {
                pos[w] = static_cast<std::uint32_t>(order.size());
                bfs_parent[pos[w]] = pos[u];
                order.push_back(w);
            }
        }
    }
    std::vector<std::uint32_t> labels_bfs(m);
    for (std::uint32_t u = 0; u < m; ++u) {
        labels_bfs[pos[u]] = new_labels[u];
    }
    return DecoratedTree(std::move(bfs_parent), std::move(labels_bfs));
}

DecoratedTree reduce_label(const DecoratedTree& t, std::uint32_t v) {
    if (v >= t.size() || t.label(v) < 2) {
        throw std::invalid_argument("reduce_label: label must be >= 2");
    }
    std::vector<std::uint32_t> labels(t.labels());
    labels[v] -= 1;
    std::vector<std::uint32_t> parent(t.size());
    for (std::uint32_t u = 0; u < t.size(); ++u) parent[u] = u == 0 ? 0 : t.parent(u);
    return DecoratedTree(std::move(parent), std::move(labels));
}

namespace {

struct EmbeddingContext {
    const DecoratedTree* tau;
    std::vector<std::vector<std::uint32_t>> tau_adj;
    std::vector<std::uint32_t> tau_deg;
    const GrowthTree* t;
    std::vector<std::vector<std::uint32_t>> t_adj;
    std::vector<std::uint32_t> t_sub;  // subtree sizes in arrival orientation
    std::vector<std::uint32_t> image;
    std::vector<char> used;
};

// Vertices on the y side of the T-edge {x, y} (x, y adjacent).
inline std::uint32_t towards(const EmbeddingContext& ctx, std::uint32_t x, std::uint32_t y) {
    if (ctx.t->parent(y) == x && y != 0) return ctx.t_sub[y];
    return ctx.t->size() - ctx.t_sub[x];
}

template <typename OnEmbedding>
void enumerate_embeddings(EmbeddingContext& ctx, std::uint32_t v, OnEmbedding&& on_embedding) {
    const std::uint32_t m = ctx.tau->size();
    if (v == m) {
        on_embedding();
        return;
    }
    if (v == 0) {
        for (std::uint32_t cand = 0; cand < ctx.t->size(); ++cand) {
            if (ctx.t_adj[cand].size() < ctx.tau_deg[0]) continue;
            ctx.image[0] = cand;
            ctx.used[cand] = 1;
            enumerate_embeddings(ctx, 1, on_embedding);
            ctx.used[cand] = 0;
        }
        return;
    }
    std::uint32_t anchor = ctx.image[ctx.tau->parent(v)];
    for (std::uint32_t cand : ctx.t_adj[anchor]) {
        if (ctx.used[cand] || ctx.t_adj[cand].size() < ctx.tau_deg[v]) continue;
        ctx.image[v] = cand;
        ctx.used[cand] = 1;
        enumerate_embeddings(ctx, v + 1, on_embedding);
        ctx.used[cand] = 0;
    }
}

EmbeddingContext make_context(const DecoratedTree& tau, const GrowthTree& t) {
    EmbeddingContext ctx;
    ctx.tau = &tau;
    ctx.tau_adj = tau.adjacency();
    ctx.tau_deg.resize(tau.size());
    for (std::uint32_t v = 0; v < tau.size(); ++v) {
        ctx.tau_deg[v] = static_cast<std::uint32_t>(ctx.tau_adj[v].size());
    }
    ctx.t = &t;
    ctx.t_adj = t.adjacency();
    ctx.t_sub = subtree_size_array(t);
    ctx.image.resize(tau.size());
    ctx.used.assign(t.size(), 0);
    return ctx;
}

inline std::uint32_t component_size(const EmbeddingContext& ctx, std::uint32_t v) {
    std::uint32_t f = ctx.t->size();
    for (std::uint32_t u : ctx.tau_adj[v]) {
        f -= towards(ctx, ctx.image[v], ctx.image[u]);
    }
    return f;
}

}  // namespace

BigInt f_tau(const DecoratedTree& tau, const GrowthTree& t) {
    auto ctx = make_context(tau, t);
    BigInt total(0);
    enumerate_embeddings(ctx, 0, [&] {
        BigInt term(1);
        for (std::uint32_t v = 0; v < tau.size() && term != 0; ++v) {
            term *= descending_factorial(BigInt(component_size(ctx, v)), tau.label(v));
        }
        total += term;
    });
    return total;
}

double f_tau_double(const DecoratedTree& tau, const GrowthTree& t) {
    auto ctx = make_context(tau, t);
    double total = 0.0;
    enumerate_embeddings(ctx, 0, [&] {
        double term = 1.0;
        for (std::uint32_t v = 0; v < tau.size(); ++v) {
            double f = static_cast<double>(component_size(ctx, v));
            for (std::uint32_t j = 0; j < tau.label(v); ++j) term *= (f - j);
        }
        total += term;
    });
    return total;
}

namespace {

// Number of injective assignments of `arrows` ordered arrows to the vertices
// of `component`, counted by explicit enumeration (no factorial shortcut).
std::uint64_t count_arrow_assignments(const std::vector<std::uint32_t>& component,
                                      std::uint32_t arrows, std::vector<char>& taken) {
    if (arrows == 0) return 1;
    std::uint64_t count = 0;
    for (std::uint32_t v : component) {
        if (taken[v]) continue;
        taken[v] = 1;
        count += count_arrow_assignments(component, arrows - 1, taken);
        taken[v] = 0;
    }
    return count;
}

}  // namespace

BigInt f_tau_oracle(const DecoratedTree& tau, const GrowthTree& t) {
    const std::uint32_t m = tau.size();
    const std::uint32_t n = t.size();
    auto t_adj = t.adjacency();
    std::vector<std::vector<char>> t_edge(n, std::vector<char>(n, 0));
    for (std::uint32_t v = 1; v < n; ++v) {
        t_edge[v][t.parent(v)] = t_edge[t.parent(v)][v] = 1;
    }

    BigInt total(0);
    std::vector<std::uint32_t> image(m);
    std::vector<char> used(n, 0);

    auto evaluate = [&]() {
        // Components of T minus the embedded edges, found by BFS.
        std::vector<char> cut(n * n, 0);
        for (std::uint32_t v = 1; v < m; ++v) {
            std::uint32_t a = image[v], b = image[tau.parent(v)];
            cut[a * n + b] = cut[b * n + a] = 1;
        }
        std::vector<std::uint32_t> comp_of(n, UINT32_MAX);
        std::vector<std::vector<std::uint32_t>> comps;
        for (std::uint32_t s = 0; s < n; ++s) {
            if (comp_of[s] != UINT32_MAX) continue;
            std::vector<std::uint32_t> comp{s};
            comp_of[s] = static_cast<std::uint32_t>(comps.size());
            for (std::size_t i = 0; i < comp.size(); ++i) {
                for (std::uint32_t u : t_adj[comp[i]]) {
                    if (comp_of[u] == UINT32_MAX && !cut[comp[i] * n + u]) {
                        comp_of[u] = comp_of[s];
                        comp.push_back(u);
                    }
                }
            }
            comps.push_back(std::move(comp));
        }
        BigInt term(1);
        std::vector<char> taken(n, 0);
        for (std::uint32_t v = 0; v < m && term != 0; ++v) {
            const auto& comp = comps[comp_of[image[v]]];
            term *= BigInt(count_arrow_assignments(comp, tau.label(v), taken));
        }
        total += term;
    };

    // Plain injective-map enumeration with adjacency checks at assignment time.
    auto recurse = [&](auto&& self, std::uint32_t v) -> void {
        if (v == m) {
            evaluate();
            return;
        }
        for (std::uint32_t cand = 0; cand < n; ++cand) {
            if (used[cand]) continue;
            if (v > 0 && !t_edge[cand][image[tau.parent(v)]]) continue;
            image[v] = cand;
            used[cand] = 1;
            self(self, v + 1);
            used[cand] = 0;
        }
    };
    recurse(recurse, 0);
    return total;
}

std::vector<RecurrenceTerm> recurrence_terms(const DecoratedTree& tau) {
    if (tau.size() < 2) {
        throw std::invalid_argument("recurrence_terms: need |tau| >= 2");
    }
    std::map<std::string, RecurrenceTerm> terms;
    auto add = [&](DecoratedTree reduced, std::uint64_t coeff) {
        std::string id = canonical_decorated_id(reduced);
        auto it = terms.find(id);
        if (it == terms.end()) {
            terms.emplace(std::move(id), RecurrenceTerm{std::move(reduced), coeff});
        } else {
            it->second.coefficient += coeff;
        }
    };
    for (std::uint32_t v = 0; v < tau.size(); ++v) {
        if (tau.label(v) >= 2) {
            add(reduce_label(tau, v),
                static_cast<std::uint64_t>(tau.label(v)) * (tau.label(v) - 1));
        }
    }
    for (std::uint32_t v : tau.low_label_leaves()) {
        add(reduce_leaf(tau, v), 1);
    }
    std::vector<RecurrenceTerm> out;
    out.reserve(terms.size());
    for (auto& [id, term] : terms) out.push_back(std::move(term));
    return out;
}

bool verify_recurrence_exact(const DecoratedTree& tau, const GrowthTree& t) {
    const std::uint32_t n = t.size();
    Rational lhs(0);
    for (std::uint32_t target = 0; target < n; ++target) {
        std::vector<std::uint32_t> parent = t.parents();
        parent.push_back(target);
        GrowthTree child(std::move(parent), t.seed_size());
        lhs += Rational(f_tau(tau, child));
    }
    lhs /= n;

    Rational rhs = Rational(f_tau(tau, t)) * (Rational(1) + make_rational(tau.weight(), n));
    for (const auto& term : recurrence_terms(tau)) {
        rhs += make_rational(BigInt(static_cast<unsigned long>(term.coefficient)), BigInt(n)) *
               Rational(f_tau(term.reduced, t));
    }
    return lhs == rhs;
}

std::vector<DecoratedTree> enumerate_dplus_below(const DecoratedTree& tau,
                                                 std::uint32_t max_label) {
    const std::uint32_t max_size = tau.size();
    const std::uint32_t max_weight = tau.weight();
    const std::string tau_id = canonical_decorated_id(tau);

    // Free tree shapes up to max_size vertices, by leaf addition with
    // isomorphism rejection.
    std::vector<std::vector<std::vector<std::uint32_t>>> shapes_by_size(max_size + 1);
    shapes_by_size[1] = {{0u}};
    for (std::uint32_t m = 1; m + 1 <= max_size; ++m) {
        std::map<std::string, std::vector<std::uint32_t>> next;
        for (const auto& shape : shapes_by_size[m]) {
            for (std::uint32_t attach = 0; attach < m; ++attach) {
                std::vector<std::uint32_t> grown = shape;
                grown.push_back(attach);
                std::vector<std::vector<std::uint32_t>> adj(m + 1);
                for (std::uint32_t v = 1; v <= m; ++v) {
                    adj[v].push_back(grown[v]);
                    adj[grown[v]].push_back(v);
                }
                next.emplace(canonical_form_adj(adj), grown);
            }
        }
        for (auto& [id, shape] : next) shapes_by_size[m + 1].push_back(std::move(shape));
    }

    std::map<std::string, DecoratedTree> found;
    for (std::uint32_t m = 1; m <= max_size; ++m) {
        for (const auto& shape : shapes_by_size[m]) {
            // All positive labelings with total weight <= max_weight.
            std::vector<std::uint32_t> labels(m, 1);
            auto emit = [&](auto&& self, std::uint32_t idx, std::uint32_t remaining) -> void {
                if (idx == m) {
                    DecoratedTree candidate(shape, labels);
                    const std::uint32_t w = candidate.weight();
                    bool below = (m < max_size && w <= max_weight) ||
                                 (m <= max_size && w < max_weight);
                    std::string id = canonical_decorated_id(candidate);
                    if (below || id == tau_id) {
                        found.emplace(std::move(id), std::move(candidate));
                    }
                    return;
                }
                std::uint32_t budget = remaining - (m - idx);  // reserve 1 per later vertex
                std::uint32_t cap = max_label == 0 ? budget + 1 : std::min(budget + 1, max_label);
                for (std::uint32_t l = 1; l <= cap; ++l) {
                    labels[idx] = l;
                    self(self, idx + 1, remaining - l);
                }
            };
            if (m <= max_weight) emit(emit, 0, max_weight);
        }
    }
    std::vector<DecoratedTree> out;
    out.reserve(found.size());
    for (auto& [id, t] : found) out.push_back(std::move(t));
    std::sort(out.begin(), out.end(), [](const DecoratedTree& a, const DecoratedTree& b) {
        auto ka = std::make_tuple(a.size(), a.weight(), canonical_decorated_id(a));
        auto kb = std::make_tuple(b.size(), b.weight(), canonical_decorated_id(b));
        return ka < kb;
    });
    return out;
}

DecoratedTree read_decorated(std::istream& is) {
    std::uint32_t m = 0;
    if (!(is >> m) || m == 0) {
        throw std::invalid_argument("decorated tree file: bad vertex count");
    }
    std::vector<std::uint32_t> parent(m, 0);
    for (std::uint32_t v = 1; v < m; ++v) {
        if (!(is >> parent[v])) {
            throw std::invalid_argument("decorated tree file: missing parent entries");
        }
    }
    std::vector<std::uint32_t> labels(m);
    for (std::uint32_t v = 0; v < m; ++v) {
        if (!(is >> labels[v])) {
            throw std::invalid_argument("decorated tree file: missing labels");
        }
    }
    return DecoratedTree(std::move(parent), std::move(labels));
}

void write_decorated(std::ostream& os, const DecoratedTree& t) {
    os << t.size() << '\n';
    for (std::uint32_t v = 1; v < t.size(); ++v) {
        os << t.parent(v) << (v + 1 < t.size() ? ' ' : '\n');
    }
    if (t.size() == 1) os << '\n';
    for (std::uint32_t v = 0; v < t.size(); ++v) {
        os << t.label(v) << (v + 1 < t.size() ? ' ' : '\n');
    }
}

DecoratedTree load_decorated_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open decorated tree file: " + path);
    return read_decorated(in);
}

}  // namespace seedtrace
