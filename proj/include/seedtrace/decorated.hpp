#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "seedtrace/rational.hpp"
#include "seedtrace/tree.hpp"

namespace seedtrace {

// A finite tree with a nonnegative integer label on each vertex. Vertices are
// 0..size-1 with parent[0] unused and parent[v] < v (any rooting works; the
// canonical id is rooting-independent).
class DecoratedTree {
  public:
    DecoratedTree(std::vector<std::uint32_t> parent, std::vector<std::uint32_t> labels);

    static DecoratedTree single_vertex(std::uint32_t label);
    static DecoratedTree edge(std::uint32_t l0, std::uint32_t l1);
    static DecoratedTree path3(std::uint32_t l0, std::uint32_t l1, std::uint32_t l2);
    // Every label set to the same value over an arbitrary tree shape.
    static DecoratedTree uniform_labels(const GrowthTree& shape, std::uint32_t label);

    std::uint32_t size() const { return static_cast<std::uint32_t>(parent_.size()); }
    std::uint32_t label(std::uint32_t v) const { return labels_[v]; }
    const std::vector<std::uint32_t>& labels() const { return labels_; }
    std::uint32_t parent(std::uint32_t v) const { return parent_[v]; }
    std::uint32_t weight() const;  // w(tau) = sum of labels

    std::vector<std::vector<std::uint32_t>> adjacency() const;
    std::vector<std::uint32_t> leaves() const;
    bool is_leaf(std::uint32_t v) const;

    bool all_labels_positive() const;       // membership in D+
    bool has_zero_label_leaf() const;       // membership in D0*

    // Leaves with label 0 or 1 (the set L_{0,1}).
    std::vector<std::uint32_t> low_label_leaves() const;

  private:
    std::vector<std::uint32_t> parent_;
    std::vector<std::uint32_t> labels_;
};

// Strict partial order: a < b iff (|a|<|b| and w(a)<=w(b)) or
// (|a|<=|b| and w(a)<w(b)).
bool partial_order_lt(const DecoratedTree& a, const DecoratedTree& b);
bool partial_order_le(const DecoratedTree& a, const DecoratedTree& b);  // lt or identical class

// Canonical id of (shape, labels) under label-preserving isomorphism.
std::string canonical_decorated_id(const DecoratedTree& t);

// Removes the leaf v (and its label). Throws if v is not a leaf or size < 2.
DecoratedTree reduce_leaf(const DecoratedTree& t, std::uint32_t v);

// Decrements the label of v. Throws if label(v) < 2.
DecoratedTree reduce_label(const DecoratedTree& t, std::uint32_t v);

// F_tau(T): sum over embeddings phi of prod_v [f_{phi(v)}]_{l(v)}. Component
// sizes come from directed subtree-size tables, O(|tau|) per embedding.
BigInt f_tau(const DecoratedTree& tau, const GrowthTree& t);
double f_tau_double(const DecoratedTree& tau, const GrowthTree& t);

// Independent oracle: enumerates injective adjacency-preserving vertex maps
// directly, then counts injective arrow assignments per component by explicit
// enumeration. Small instances only.
BigInt f_tau_oracle(const DecoratedTree& tau, const GrowthTree& t);

struct RecurrenceTerm {
    DecoratedTree reduced;
    std::uint64_t coefficient;
};

// Aggregated coefficients c(tau, tau') of the one-step conditional-expectation
// recurrence: l(v)(l(v)-1) onto each label decrement, +1 onto each removal of
// a leaf with label 0 or 1. Keys aggregated by canonical id.
std::vector<RecurrenceTerm> recurrence_terms(const DecoratedTree& tau);

// Exact check of the recurrence on a concrete tree: average of F_tau over all
// |t| one-step extensions vs (1 + w/n) F_tau(t) + (1/n) sum c F_tau'(t).
bool verify_recurrence_exact(const DecoratedTree& tau, const GrowthTree& t);

// All decorated trees with all labels positive and tau' <= tau, up to
// label-preserving isomorphism, sorted by (size, weight, canonical id).
// max_label additionally caps individual labels (0 = no cap).
std::vector<DecoratedTree> enumerate_dplus_below(const DecoratedTree& tau,
                                                 std::uint32_t max_label = 0);

// Decorated-tree file format: "m", parents of 1..m-1, then the m labels.
DecoratedTree read_decorated(std::istream& is);
void write_decorated(std::ostream& os, const DecoratedTree& t);
DecoratedTree load_decorated_file(const std::string& path);

}  // namespace seedtrace
