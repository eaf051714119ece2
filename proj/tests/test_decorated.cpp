#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <sstream>

#include "seedtrace/decorated.hpp"

using namespace seedtrace;

namespace {

// All isomorphism classes of trees with the given vertex count, as
// representative parent arrays.
std::vector<GrowthTree> tree_classes(std::uint32_t size) {
    std::map<std::string, GrowthTree> classes;
    std::vector<std::vector<std::uint32_t>> frontier{{0}};
    for (std::uint32_t m = 1; m < size; ++m) {
        std::vector<std::vector<std::uint32_t>> next;
        for (const auto& parent : frontier) {
            for (std::uint32_t target = 0; target < m; ++target) {
                auto grown = parent;
                grown.push_back(target);
                next.push_back(std::move(grown));
            }
        }
        frontier = std::move(next);
    }
    std::vector<GrowthTree> out;
    for (const auto& parent : frontier) {
        GrowthTree t(parent, 2);
        if (classes.emplace(canonical_form(t), t).second) out.push_back(t);
    }
    return out;
}

std::vector<DecoratedTree> decorated_corpus(std::uint32_t max_size, std::uint32_t max_label) {
    std::vector<std::vector<std::uint32_t>> shapes = {{0}, {0, 0}, {0, 0, 1}, {0, 0, 1, 2},
                                                      {0, 0, 0, 0}};
    std::vector<DecoratedTree> corpus;
    for (const auto& shape : shapes) {
        if (shape.size() > max_size) continue;
        std::vector<std::uint32_t> labels(shape.size(), 0);
        auto emit = [&](auto&& self, std::size_t idx) -> void {
            if (idx == labels.size()) {
                corpus.emplace_back(shape, labels);
                return;
            }
            for (std::uint32_t l = 0; l <= max_label; ++l) {
                labels[idx] = l;
                self(self, idx + 1);
            }
        };
        emit(emit, 0);
    }
    return corpus;
}

}  // namespace

TEST_CASE("partial order") {
    auto v1 = DecoratedTree::single_vertex(1);
    auto e11 = DecoratedTree::edge(1, 1);
    CHECK(partial_order_lt(v1, e11));
    CHECK_FALSE(partial_order_lt(e11, e11));
    CHECK(partial_order_le(e11, e11));

    DecoratedTree a({0, 0, 1}, {2, 2, 1});  // |a|=3, w=5
    DecoratedTree b({0, 0}, {4, 5});        // |b|=2, w=9
    CHECK_FALSE(partial_order_lt(a, b));
    CHECK_FALSE(partial_order_lt(b, a));

    CHECK(partial_order_lt(DecoratedTree::single_vertex(2), e11));  // 1<2, 2<=2
}

TEST_CASE("class predicates") {
    CHECK(DecoratedTree::edge(1, 2).all_labels_positive());
    CHECK_FALSE(DecoratedTree::edge(0, 2).all_labels_positive());
    CHECK(DecoratedTree::edge(0, 2).has_zero_label_leaf());
    DecoratedTree zero_center({0, 0, 0}, {0, 1, 1});
    CHECK_FALSE(zero_center.has_zero_label_leaf());  // the 0 label is not on a leaf
    CHECK(DecoratedTree::path3(1, 2, 0).low_label_leaves() ==
          std::vector<std::uint32_t>{0, 2});
}

TEST_CASE("reductions") {
    auto e11 = DecoratedTree::edge(1, 1);
    CHECK(canonical_decorated_id(reduce_leaf(e11, 0)) ==
          canonical_decorated_id(DecoratedTree::single_vertex(1)));
    CHECK(canonical_decorated_id(reduce_leaf(DecoratedTree::path3(1, 2, 1), 0)) ==
          canonical_decorated_id(DecoratedTree::edge(2, 1)));
    DecoratedTree star({0, 0, 0, 0}, {1, 1, 1, 1});
    CHECK_THROWS_AS(reduce_leaf(star, 0), std::invalid_argument);  // center is not a leaf
    CHECK_THROWS_AS(reduce_leaf(DecoratedTree::single_vertex(1), 0), std::invalid_argument);

    CHECK(canonical_decorated_id(reduce_label(DecoratedTree::single_vertex(2), 0)) ==
          canonical_decorated_id(DecoratedTree::single_vertex(1)));
    CHECK(canonical_decorated_id(reduce_label(DecoratedTree::edge(2, 1), 0)) ==
          canonical_decorated_id(e11));
    CHECK_THROWS_AS(reduce_label(e11, 0), std::invalid_argument);

    // reductions always move strictly down
    DecoratedTree tau({0, 0, 1, 1}, {2, 1, 1, 3});
    for (std::uint32_t v : tau.leaves()) {
        CHECK(partial_order_lt(reduce_leaf(tau, v), tau));
    }
    CHECK(partial_order_lt(reduce_label(tau, 0), tau));
}

TEST_CASE("canonical decorated id") {
    DecoratedTree a({0, 0}, {1, 2});
    DecoratedTree b({0, 0}, {2, 1});
    CHECK(canonical_decorated_id(a) == canonical_decorated_id(b));
    CHECK(canonical_decorated_id(a) != canonical_decorated_id(DecoratedTree::edge(1, 1)));
    DecoratedTree p1({0, 0, 1}, {3, 1, 2});
    DecoratedTree p2({0, 0, 1}, {2, 1, 3});
    CHECK(canonical_decorated_id(p1) == canonical_decorated_id(p2));
}

TEST_CASE("f_tau closed cases") {
    CHECK(f_tau(DecoratedTree::single_vertex(2), GrowthTree::path(4)) == 48);
    CHECK(f_tau(DecoratedTree::edge(1, 1), GrowthTree::path(3)) == 8);
    CHECK(f_tau(DecoratedTree::edge(1, 1), GrowthTree::path(4)) == 20);
    CHECK(f_tau(DecoratedTree::edge(1, 1), GrowthTree::star(4)) == 18);
    DecoratedTree s4_ones({0, 0, 0, 0}, {1, 1, 1, 1});
    CHECK(f_tau(s4_ones, GrowthTree::path(4)) == 0);
    // oversized label exhausts the component
    CHECK(f_tau(DecoratedTree::single_vertex(5), GrowthTree::path(4)) == 0);
}

TEST_CASE("f_tau equals the embedding-count oracle") {
    auto corpus = decorated_corpus(4, 3);
    for (std::uint32_t size = 2; size <= 6; ++size) {
        for (const GrowthTree& t : tree_classes(size)) {
            for (const DecoratedTree& tau : corpus) {
                CHECK(f_tau(tau, t) == f_tau_oracle(tau, t));
            }
        }
    }
}

TEST_CASE("all-ones self statistic counts automorphisms") {
    for (std::uint32_t size = 2; size <= 6; ++size) {
        auto classes = tree_classes(size);
        for (const GrowthTree& pattern : classes) {
            DecoratedTree tau = DecoratedTree::uniform_labels(pattern, 1);
            for (const GrowthTree& host : classes) {
                BigInt expect = canonical_form(pattern) == canonical_form(host)
                                    ? BigInt(automorphism_count(pattern))
                                    : BigInt(0);
                CHECK(f_tau(tau, host) == expect);
            }
        }
    }
}

TEST_CASE("recurrence coefficients") {
    auto terms = recurrence_terms(DecoratedTree::edge(1, 1));
    REQUIRE(terms.size() == 1);
    CHECK(terms[0].coefficient == 2);
    CHECK(canonical_decorated_id(terms[0].reduced) ==
          canonical_decorated_id(DecoratedTree::single_vertex(1)));

    terms = recurrence_terms(DecoratedTree::edge(2, 2));
    REQUIRE(terms.size() == 1);
    CHECK(terms[0].coefficient == 4);
    CHECK(canonical_decorated_id(terms[0].reduced) ==
          canonical_decorated_id(DecoratedTree::edge(2, 1)));

    terms = recurrence_terms(DecoratedTree::path3(1, 1, 1));
    REQUIRE(terms.size() == 1);
    CHECK(terms[0].coefficient == 2);
    CHECK(canonical_decorated_id(terms[0].reduced) ==
          canonical_decorated_id(DecoratedTree::edge(1, 1)));

    CHECK_THROWS_AS(recurrence_terms(DecoratedTree::single_vertex(1)), std::invalid_argument);
}

TEST_CASE("recurrence holds exactly") {
    CHECK(verify_recurrence_exact(DecoratedTree::edge(1, 1), GrowthTree::path(3)));
    CHECK(verify_recurrence_exact(DecoratedTree::edge(1, 1), GrowthTree::path(2)));
    RngStream rng(606, 0);
    for (int rep = 0; rep < 30; ++rep) {
        std::uint32_t n = 3 + static_cast<std::uint32_t>(rng.uniform_below(8));
        std::vector<std::uint32_t> parent{0};
        for (std::uint32_t v = 1; v < n; ++v) {
            parent.push_back(static_cast<std::uint32_t>(rng.uniform_below(v)));
        }
        GrowthTree t(parent, 2);
        std::uint32_t m = 2 + static_cast<std::uint32_t>(rng.uniform_below(3));
        std::vector<std::uint32_t> tp{0};
        for (std::uint32_t v = 1; v < m; ++v) {
            tp.push_back(static_cast<std::uint32_t>(rng.uniform_below(v)));
        }
        std::vector<std::uint32_t> labels;
        for (std::uint32_t v = 0; v < m; ++v) {
            labels.push_back(static_cast<std::uint32_t>(rng.uniform_below(4)));
        }
        CHECK(verify_recurrence_exact(DecoratedTree(tp, labels), t));
    }
}

TEST_CASE("basis enumeration") {
    auto single = enumerate_dplus_below(DecoratedTree::single_vertex(1));
    REQUIRE(single.size() == 1);
    CHECK(single[0].size() == 1);

    auto chain = enumerate_dplus_below(DecoratedTree::single_vertex(3));
    REQUIRE(chain.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(chain[i].size() == 1);
        CHECK(chain[i].weight() == i + 1);
    }

    auto e11 = enumerate_dplus_below(DecoratedTree::edge(1, 1));
    REQUIRE(e11.size() == 3);
    CHECK(e11[0].weight() == 1);
    CHECK(e11[1].weight() == 2);
    CHECK(e11[2].size() == 2);

    // order is a linear extension of the partial order; everything is in D+
    auto big = enumerate_dplus_below(DecoratedTree::path3(2, 1, 2));
    for (std::size_t i = 0; i < big.size(); ++i) {
        CHECK(big[i].all_labels_positive());
        CHECK(partial_order_le(big[i], DecoratedTree::path3(2, 1, 2)));
        for (std::size_t j = i + 1; j < big.size(); ++j) {
            CHECK_FALSE(partial_order_lt(big[j], big[i]));
        }
    }

    // label cap shrinks the set
    auto capped = enumerate_dplus_below(DecoratedTree::path3(2, 1, 2), 1);
    CHECK(capped.size() < big.size());
    for (const auto& tau : capped) {
        for (std::uint32_t v = 0; v < tau.size(); ++v) CHECK(tau.label(v) <= 1);
    }
}

TEST_CASE("decorated file io") {
    DecoratedTree tau({0, 0, 1, 1}, {2, 1, 0, 3});
    std::stringstream ss;
    write_decorated(ss, tau);
    DecoratedTree back = read_decorated(ss);
    CHECK(back.size() == tau.size());
    CHECK(back.labels() == tau.labels());
    CHECK(canonical_decorated_id(back) == canonical_decorated_id(tau));

    std::stringstream single("1\n\n4\n");
    CHECK(read_decorated(single).label(0) == 4);
}
