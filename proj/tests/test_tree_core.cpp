#include <doctest.h>

#include <random>

#include "strahler/tree_core.hpp"
#include "support/enumerate.hpp"

using namespace strahler;
using namespace strahler::testing;

TEST_CASE("strahler of a single leaf is 1") {
    CHECK(strahler_number(bin_tree::leaf("x")) == 1);
}

TEST_CASE("strahler of the complete four-leaf tree is 3") {
    CHECK(strahler_number(complete_tree(4)) == 3);
}

TEST_CASE("strahler takes the maximum over unequal subtrees") {
    // root over subtrees scoring 3 and 2
    const bin_tree left = bin_tree::inner(complete_tree(2), complete_tree(2));
    CHECK(strahler_number(left) == 3);
    const bin_tree right = complete_tree(2);
    CHECK(strahler_number(right) == 2);
    CHECK(strahler_number(bin_tree::inner(left, right)) == 3);
}

TEST_CASE("caterpillars score 2 regardless of length or spine side") {
    for (int n = 2; n <= 64; ++n) {
        CHECK(strahler_number(caterpillar(n, true)) == 2);
        CHECK(strahler_number(caterpillar(n, false)) == 2);
    }
}

TEST_CASE("deep caterpillar does not overflow any stack") {
    const int n = 200000;
    const bin_tree t = caterpillar(n, true);
    CHECK(strahler_number(t) == 2);
    CHECK(tree_depth(t) == n);
}

TEST_CASE("depth examples") {
    CHECK(tree_depth(bin_tree::leaf("x")) == 1);
    CHECK(tree_depth(caterpillar(5)) == 5);
    CHECK(tree_depth(complete_tree(4)) == 3);
}

TEST_CASE("strahler_join matches the definition") {
    CHECK(strahler_join(2, 2) == 3);
    CHECK(strahler_join(0, 1) == 1);
    CHECK(strahler_join(3, 1) == 3);
    for (int x = 0; x <= 6; ++x)
        for (int y = 1; y <= 6; ++y) CHECK(strahler_join(x, y) == strahler_join(y, x));
}

TEST_CASE("strahler is bounded by depth and invariant under mirroring") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 200; ++i) {
        std::uniform_int_distribution<int> leaves(1, 40);
        const bin_tree t = random_binary_tree(rng, leaves(rng));
        const int s = strahler_number(t);
        CHECK(s >= 1);
        CHECK(s <= tree_depth(t));
        CHECK(strahler_number(mirror(t)) == s);
    }
}

TEST_CASE("exhaustive small trees: log bound, and strahler==depth exactly for complete trees") {
    for (int leaves = 1; leaves <= 6; ++leaves) {
        int bound = 1;
        while ((1 << bound) <= leaves) ++bound;   // floor(log2)+1
        bool bound_attained = false;
        for (const bin_tree& t : binary_shapes(leaves)) {
            const int s = strahler_number(t);
            CHECK(s <= bound);
            bound_attained |= s == bound;
            CHECK((s == tree_depth(t)) == is_complete(t));
        }
        CHECK(bound_attained);
    }
}

TEST_CASE("trees whose inner nodes all keep a leaf child score exactly 2") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> coin(0, 3);
    for (int i = 0; i < 100; ++i) {
        bin_tree t;
        int acc = t.add_leaf("a");
        std::uniform_int_distribution<int> grow(1, 50);
        const int steps = grow(rng);
        for (int k = 0; k < steps; ++k) {
            const int leaf = t.add_leaf("b");
            acc = coin(rng) % 2 ? t.add_inner(acc, leaf) : t.add_inner(leaf, acc);
        }
        if (steps > 0) CHECK(strahler_number(t) == 2);
    }
}

TEST_CASE("validate accepts a single root node") {
    const dep_tree t = tree_from_heads({0});
    CHECK(t.size() == 1);
    CHECK(t.root() == 0);
    CHECK(t.children(0).empty());
}

TEST_CASE("validate rejects a two-node cycle") {
    std::vector<dep_node> nodes{{1, 2, "dep", "a"}, {2, 1, "dep", "b"}};
    CHECK_THROWS_AS(dep_tree::validate(nodes), dep_tree_error);
    try {
        dep_tree::validate(nodes);
    } catch (const dep_tree_error& e) {
        CHECK(e.code() == dep_error_code::cycle);
        CHECK(e.ids() == std::vector<int>{1, 2});
    }
}

TEST_CASE("validate rejects multiple roots and names them") {
    std::vector<dep_node> nodes{{1, 0, "root", "a"}, {2, 0, "root", "b"}};
    try {
        dep_tree::validate(nodes);
        FAIL("expected dep_tree_error");
    } catch (const dep_tree_error& e) {
        CHECK(e.code() == dep_error_code::multiple_roots);
        CHECK(e.ids() == std::vector<int>{1, 2});
    }
}

TEST_CASE("validate rejects empty input") {
    try {
        dep_tree::validate({});
        FAIL("expected dep_tree_error");
    } catch (const dep_tree_error& e) {
        CHECK(e.code() == dep_error_code::empty_tree);
    }
}

TEST_CASE("validate rejects dangling heads") {
    std::vector<dep_node> nodes{{1, 0, "root", "a"}, {2, 9, "dep", "b"}};
    try {
        dep_tree::validate(nodes);
        FAIL("expected dep_tree_error");
    } catch (const dep_tree_error& e) {
        CHECK(e.code() == dep_error_code::orphan_node);
        CHECK(e.ids() == std::vector<int>{2});
    }
}

TEST_CASE("validate rejects self-heads and disconnected cycles") {
    std::vector<dep_node> self{{1, 0, "root", "a"}, {2, 2, "dep", "b"}};
    CHECK_THROWS_AS(dep_tree::validate(self), dep_tree_error);

    // 1 is a valid root; 2 and 3 point at each other
    std::vector<dep_node> island{{1, 0, "root", "a"}, {2, 3, "dep", "b"}, {3, 2, "dep", "c"}};
    try {
        dep_tree::validate(island);
        FAIL("expected dep_tree_error");
    } catch (const dep_tree_error& e) {
        CHECK(e.code() == dep_error_code::cycle);
        CHECK(e.ids() == std::vector<int>{2, 3});
    }
}

TEST_CASE("validate rejects duplicate ids as a contract violation") {
    std::vector<dep_node> nodes{{1, 0, "root", "a"}, {1, 1, "dep", "b"}};
    CHECK_THROWS_AS(dep_tree::validate(nodes), std::invalid_argument);
}

TEST_CASE("children come back in surface order") {
    const dep_tree t = tree_from_heads({2, 0, 2, 2});
    const auto ch = t.children(t.root());
    REQUIRE(ch.size() == 3);
    CHECK(t.node(ch[0]).id == 1);
    CHECK(t.node(ch[1]).id == 3);
    CHECK(t.node(ch[2]).id == 4);
}

TEST_CASE("post_order places children before parents") {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 50; ++i) {
        std::uniform_int_distribution<int> size(1, 30);
        const dep_tree t = random_dep_tree(rng, size(rng));
        const auto order = t.post_order();
        REQUIRE(static_cast<int>(order.size()) == t.size());
        std::vector<int> position(order.size());
        for (size_t i2 = 0; i2 < order.size(); ++i2)
            position[static_cast<size_t>(order[i2])] = static_cast<int>(i2);
        for (int v = 0; v < t.size(); ++v)
            for (int c : t.children(v))
                CHECK(position[static_cast<size_t>(c)] < position[static_cast<size_t>(v)]);
    }
}
