#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "seedtrace/rng.hpp"

namespace seedtrace {

// Uniform-attachment tree in arrival order. parent[0] is unused; parent[i] < i
// for every i >= 1. The first seed_size vertices (and the edges among them)
// are the seed.
class GrowthTree {
  public:
    GrowthTree(std::vector<std::uint32_t> parent, std::uint32_t seed_size);

    std::uint32_t size() const { return static_cast<std::uint32_t>(parent_.size()); }
    std::uint32_t seed_size() const { return seed_size_; }
    std::uint32_t parent(std::uint32_t v) const { return parent_[v]; }
    const std::vector<std::uint32_t>& parents() const { return parent_; }

    std::vector<std::vector<std::uint32_t>> adjacency() const;

    bool operator==(const GrowthTree& other) const = default;

    // Named small seeds. path(k) is P_k, star(k) is S_k (center first).
    static GrowthTree path(std::uint32_t k);
    static GrowthTree star(std::uint32_t k);

    // Builds a seed from an arbitrary connected edge list on vertices
    // 0..m-1 by rooting at vertex 0 and relabeling in BFS order.
    static GrowthTree from_edge_list(
        const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges);

  private:
    std::vector<std::uint32_t> parent_;
    std::uint32_t seed_size_;
};

struct EdgeSplit {
    std::uint32_t child;            // identifies the edge (child, parent(child))
    std::uint32_t size_child_side;  // vertices in the component containing child
    std::uint32_t size_parent_side;
};

// Grows the seed to n vertices, each new vertex attaching to a uniformly
// random existing vertex. Throws std::invalid_argument if n < |seed|.
GrowthTree grow(const GrowthTree& seed, std::uint32_t n, RngStream& rng);

// Size of the child-side component for every edge, one reverse pass.
// Entry v (for v in 1..n-1) describes the edge (v, parent(v)).
std::vector<EdgeSplit> subtree_sizes(const GrowthTree& t);

// Same data as a bare size array indexed by child vertex; entry 0 is n.
std::vector<std::uint32_t> subtree_size_array(const GrowthTree& t);

std::uint32_t diameter(const GrowthTree& t);

// Canonical form of the underlying unlabeled tree: AHU encoding rooted at the
// center, lexicographic minimum over both centers when the tree is bicentral.
// Equal strings iff isomorphic.
std::string canonical_form(const GrowthTree& t);
std::string canonical_form_adj(const std::vector<std::vector<std::uint32_t>>& adj);

// Number of automorphisms, by brute-force permutation enumeration. Intended
// for small trees (|t| <= 8 or so).
std::uint64_t automorphism_count(const GrowthTree& t);

// Tree file format: "n seed_size\n" then the n-1 parent indices.
void write_tree(std::ostream& os, const GrowthTree& t);
GrowthTree read_tree(std::istream& is);
GrowthTree load_tree_file(const std::string& path);
void save_tree_file(const std::string& path, const GrowthTree& t);

}  // namespace seedtrace
