#include "seedtrace/tree.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace seedtrace {

GrowthTree::GrowthTree(std::vector<std::uint32_t> parent, std::uint32_t seed_size)
    : parent_(std::move(parent)), seed_size_(seed_size) {
    if (parent_.size() < 2 || seed_size_ < 2 || seed_size_ > parent_.size()) {
        throw std::invalid_argument("GrowthTree: need size >= seed_size >= 2");
    }
    for (std::uint32_t v = 1; v < parent_.size(); ++v) {
        if (parent_[v] >= v) {
            throw std::invalid_argument("GrowthTree: parent[v] must be < v");
        }
    }
}

std::vector<std::vector<std::uint32_t>> GrowthTree::adjacency() const {
    std::vector<std::vector<std::uint32_t>> adj(size());
    for (std::uint32_t v = 1; v < size(); ++v) {
        adj[v].push_back(parent_[v]);
        adj[parent_[v]].push_back(v);
    }
    return adj;
}

GrowthTree GrowthTree::path(std::uint32_t k) {
    std::vector<std::uint32_t> parent(k);
    for (std::uint32_t v = 1; v < k; ++v) parent[v] = v - 1;
    return GrowthTree(std::move(parent), k);
}

GrowthTree GrowthTree::star(std::uint32_t k) {
    std::vector<std::uint32_t> parent(k, 0);
    return GrowthTree(std::move(parent), k);
}

GrowthTree GrowthTree::from_edge_list(
    const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges) {
    std::uint32_t n = 0;
    for (auto [u, v] : edges) n = std::max({n, u + 1, v + 1});
    if (edges.size() + 1 != n) {
        throw std::invalid_argument("edge list does not describe a tree");
    }
    std::vector<std::vector<std::uint32_t>> adj(n);
    for (auto [u, v] : edges) {
        adj[u].push_back(v);
        adj[v].push_back(u);
    }
    // BFS from vertex 0, relabel in visit order so parents precede children.
    std::vector<std::uint32_t> order, label(n, n), parent_new(n, 0);
    order.reserve(n);
    std::deque<std::uint32_t> queue{0};
    label[0] = 0;
    order.push_back(0);
    while (!queue.empty()) {
        std::uint32_t u = queue.front();
        queue.pop_front();
        for (std::uint32_t v : adj[u]) {
            if (label[v] == n) {
                label[v] = static_cast<std::uint32_t>(order.size());
                parent_new[label[v]] = label[u];
                order.push_back(v);
                queue.push_back(v);
            }
        }
    }
    if (order.size() != n) {
        throw std::invalid_argument("edge list is not connected");
    }
    return GrowthTree(std::move(parent_new), n);
}

GrowthTree grow(const GrowthTree& seed, std::uint32_t n, RngStream& rng) {
    if (n < seed.size()) {
        throw std::invalid_argument("grow: n below seed size");
    }
    std::vector<std::uint32_t> parent = seed.parents();
    parent.reserve(n);
    for (std::uint32_t v = seed.size(); v < n; ++v) {
        parent.push_back(static_cast<std::uint32_t>(rng.uniform_below(v)));
    }
    return GrowthTree(std::move(parent), seed.seed_size());
}

std::vector<std::uint32_t> subtree_size_array(const GrowthTree& t) {
    std::vector<std::uint32_t> size(t.size(), 1);
    for (std::uint32_t v = t.size() - 1; v >= 1; --v) {
        size[t.parent(v)] += size[v];
    }
    return size;
}

std::vector<EdgeSplit> subtree_sizes(const GrowthTree& t) {
    auto size = subtree_size_array(t);
    std::vector<EdgeSplit> splits;
    splits.reserve(t.size() - 1);
    for (std::uint32_t v = 1; v < t.size(); ++v) {
        splits.push_back({v, size[v], t.size() - size[v]});
    }
    return splits;
}

namespace {

// BFS distances; returns the farthest vertex and its distance.
std::pair<std::uint32_t, std::uint32_t> farthest(
    const std::vector<std::vector<std::uint32_t>>& adj, std::uint32_t start) {
    std::vector<std::uint32_t> dist(adj.size(), UINT32_MAX);
    std::deque<std::uint32_t> queue{start};
    dist[start] = 0;
    std::uint32_t best = start;
    while (!queue.empty()) {
        std::uint32_t u = queue.front();
        queue.pop_front();
        if (dist[u] > dist[best]) best = u;
        for (std::uint32_t v : adj[u]) {
            if (dist[v] == UINT32_MAX) {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
    }
    return {best, dist[best]};
}

std::vector<std::uint32_t> tree_centers(const std::vector<std::vector<std::uint32_t>>& adj) {
    std::uint32_t n = static_cast<std::uint32_t>(adj.size());
    if (n == 1) return {0};
    std::vector<std::uint32_t> degree(n);
    std::vector<std::uint32_t> layer;
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
    std::sort(layer.begin(), layer.end());
    return layer;
}

std::string ahu_encode(const std::vector<std::vector<std::uint32_t>>& adj, std::uint32_t root) {
    // Iterative post-order to avoid deep recursion on path-like trees.
    std::uint32_t n = static_cast<std::uint32_t>(adj.size());
    std::vector<std::uint32_t> parent(n, UINT32_MAX), order;
    order.reserve(n);
    std::vector<std::uint32_t> stack{root};
    parent[root] = root;
    while (!stack.empty()) {
        std::uint32_t u = stack.back();
        stack.pop_back();
        order.push_back(u);
        for (std::uint32_t v : adj[u]) {
            if (parent[v] == UINT32_MAX) {
                parent[v] = u;
                stack.push_back(v);
            }
        }
    }
    std::vector<std::string> enc(n);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        std::uint32_t u = *it;
        std::vector<std::string> children;
        for (std::uint32_t v : adj[u]) {
            if (v != u && parent[v] == u) children.push_back(std::move(enc[v]));
        }
        std::sort(children.begin(), children.end());
        std::string s = "(";
        for (auto& c : children) s += c;
        s += ")";
        enc[u] = std::move(s);
    }
    return enc[root];
}

}  // namespace

std::string canonical_form_adj(const std::vector<std::vector<std::uint32_t>>& adj) {
    std::string best;
    for (std::uint32_t c : tree_centers(adj)) {
        std::string enc = ahu_encode(adj, c);
        if (best.empty() || enc < best) best = std::move(enc);
    }
    return best;
}

std::string canonical_form(const GrowthTree& t) { return canonical_form_adj(t.adjacency()); }

std::uint32_t diameter(const GrowthTree& t) {
    auto adj = t.adjacency();
    auto [far_vertex, d1] = farthest(adj, 0);
    (void)d1;
    return farthest(adj, far_vertex).second;
}

std::uint64_t automorphism_count(const GrowthTree& t) {
    std::uint32_t n = t.size();
    auto adj = t.adjacency();
    std::vector<std::vector<bool>> is_edge(n, std::vector<bool>(n, false));
    for (std::uint32_t v = 1; v < n; ++v) {
        is_edge[v][t.parent(v)] = is_edge[t.parent(v)][v] = true;
    }
    std::vector<std::uint32_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::uint64_t count = 0;
    do {
        bool ok = true;
        for (std::uint32_t v = 1; v < n && ok; ++v) {
            ok = is_edge[perm[v]][perm[t.parent(v)]];
        }
        if (ok) ++count;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return count;
}

void write_tree(std::ostream& os, const GrowthTree& t) {
    os << t.size() << ' ' << t.seed_size() << '\n';
    for (std::uint32_t v = 1; v < t.size(); ++v) {
        os << t.parent(v) << (v + 1 < t.size() ? ' ' : '\n');
    }
}

GrowthTree read_tree(std::istream& is) {
    std::uint32_t n = 0, seed_size = 0;
    if (!(is >> n >> seed_size)) {
        throw std::invalid_argument("tree file: bad header line");
    }
    std::vector<std::uint32_t> parent(n);
    for (std::uint32_t v = 1; v < n; ++v) {
        if (!(is >> parent[v])) {
            std::ostringstream msg;
            msg << "tree file: expected " << n - 1 << " parent entries, got " << v - 1;
            throw std::invalid_argument(msg.str());
        }
    }
    return GrowthTree(std::move(parent), seed_size);
}

GrowthTree load_tree_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open tree file: " + path);
    // Accept either the native format ("n seed_size" header + parents) or a
    // bare edge list with lines "u v".
    std::vector<long long> tokens;
    long long x;
    while (in >> x) tokens.push_back(x);
    if (tokens.size() >= 3 && tokens[0] >= 2 && tokens[1] >= 2 && tokens[1] <= tokens[0] &&
        tokens.size() == static_cast<std::size_t>(tokens[0]) + 1) {
        std::vector<std::uint32_t> parent(tokens[0]);
        for (std::size_t v = 1; v < parent.size(); ++v) {
            parent[v] = static_cast<std::uint32_t>(tokens[v + 1]);
        }
        return GrowthTree(std::move(parent), static_cast<std::uint32_t>(tokens[1]));
    }
    if (tokens.size() % 2 != 0 || tokens.empty()) {
        throw std::invalid_argument("cannot parse tree file (token count): " + path);
    }
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    for (std::size_t i = 0; i < tokens.size(); i += 2) {
        edges.emplace_back(static_cast<std::uint32_t>(tokens[i]),
                           static_cast<std::uint32_t>(tokens[i + 1]));
    }
    return GrowthTree::from_edge_list(edges);
}

void save_tree_file(const std::string& path, const GrowthTree& t) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write tree file: " + path);
    write_tree(out, t);
}

}  // namespace seedtrace
