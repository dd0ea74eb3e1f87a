#include <doctest.h>

#include <random>

#include "strahler/errors.hpp"
#include "strahler/shift_reduce.hpp"
#include "support/enumerate.hpp"

using namespace strahler;
using namespace strahler::testing;

namespace {

// 1 + 2 * 3 ^ 4 as a tree: +(1, *(2, ^(3,4)))
bin_tree expression_tree() {
    return bin_tree::inner(
        bin_tree::leaf("1"),
        bin_tree::inner(bin_tree::leaf("2"),
                        bin_tree::inner(bin_tree::leaf("3"), bin_tree::leaf("4"))));
}

traversal_order all_right_first(const bin_tree& t) {
    traversal_order order(t.size());
    for (int v = 0; v < t.size(); ++v)
        if (!t.is_leaf(v)) order.set_right_first(v, true);
    return order;
}

void check_trace_invariants(const bin_tree& t, const eval_trace& trace) {
    int shifts = 0, reduces = 0, depth = 0, maxd = 0;
    for (const auto& step : trace.steps) {
        if (step.op == eval_step::op_t::shift) {
            ++shifts;
            ++depth;
        } else {
            ++reduces;
            --depth;
        }
        CHECK(step.stack_depth_after == depth);
        CHECK(depth >= 0);
        maxd = std::max(maxd, depth);
    }
    CHECK(shifts == t.leaf_count());
    CHECK(reduces == t.leaf_count() - 1);
    CHECK(depth == 1);
    CHECK(trace.max_depth == maxd);
}

} // namespace

TEST_CASE("single leaf needs one stack cell") {
    const bin_tree t = bin_tree::leaf("x");
    const eval_trace trace = evaluate(t, traversal_order(t.size()));
    CHECK(trace.max_depth == 1);
    REQUIRE(trace.steps.size() == 1);
    CHECK(trace.steps[0].op == eval_step::op_t::shift);
    CHECK(min_stack_depth(t, 10) == 1);
}

TEST_CASE("expression tree: four cells from the front, two from the back") {
    const bin_tree t = expression_tree();
    CHECK(evaluate(t, traversal_order(t.size())).max_depth == 4);
    CHECK(evaluate(t, all_right_first(t)).max_depth == 2);
    CHECK(min_stack_depth(t, 10) == 2);
    CHECK(evaluate(t, sethi_ullman_order(t)).max_depth == 2);
    CHECK(strahler_number(t) == 2);
}

TEST_CASE("complete four-leaf tree needs three cells under every order") {
    const bin_tree t = complete_tree(4);
    for (int mask = 0; mask < 8; ++mask) {
        traversal_order order(t.size());
        int j = 0;
        for (int v = 0; v < t.size(); ++v)
            if (!t.is_leaf(v)) order.set_right_first(v, (mask >> j++) & 1);
        CHECK(evaluate(t, order).max_depth == 3);
    }
    CHECK(evaluate(t, sethi_ullman_order(t)).max_depth == 3);
}

TEST_CASE("exhaustive: minimum stack depth equals the Strahler number") {
    for (int leaves = 1; leaves <= 6; ++leaves) {
        for (const bin_tree& t : binary_shapes(leaves)) {
            const int s = strahler_number(t);
            CHECK(min_stack_depth(t, 16) == s);
            CHECK(evaluate(t, sethi_ullman_order(t)).max_depth == s);
        }
    }
}

TEST_CASE("larger-label-first ordering attains the Strahler number on random trees") {
    std::mt19937_64 rng(53);
    for (int i = 0; i < 120; ++i) {
        const bin_tree t = random_binary_tree(rng, 12);
        const eval_trace trace = evaluate(t, sethi_ullman_order(t));
        CHECK(trace.max_depth == strahler_number(t));
        check_trace_invariants(t, trace);
    }
}

TEST_CASE("trace invariants hold under arbitrary orders") {
    std::mt19937_64 rng(59);
    std::uniform_int_distribution<int> coin(0, 1);
    for (int i = 0; i < 100; ++i) {
        std::uniform_int_distribution<int> leaves(1, 30);
        const bin_tree t = random_binary_tree(rng, leaves(rng));
        traversal_order order(t.size());
        for (int v = 0; v < t.size(); ++v)
            if (!t.is_leaf(v)) order.set_right_first(v, coin(rng));
        check_trace_invariants(t, evaluate(t, order));
    }
}

TEST_CASE("exhaustive search is capped") {
    const bin_tree t = caterpillar(12);
    CHECK_THROWS_AS(min_stack_depth(t, 10), cap_exceeded);
    CHECK(min_stack_depth(t, 11) == 2);
}

TEST_CASE("tree literals parse and misparse") {
    const bin_tree t = parse_tree_literal("((1,2),(3,4))");
    CHECK(t.leaf_count() == 4);
    CHECK(strahler_number(t) == 3);
    CHECK(t.payload(t.left(t.left(t.root()))) == "1");
    CHECK(t.payload(t.right(t.right(t.root()))) == "4");

    const bin_tree atom = parse_tree_literal("  word ");
    CHECK(atom.size() == 1);
    CHECK(atom.payload(0) == "word");

    const bin_tree spaced = parse_tree_literal("( a , ( b , c ) )");
    CHECK(spaced.leaf_count() == 3);

    CHECK_THROWS_AS(parse_tree_literal(""), std::invalid_argument);
    CHECK_THROWS_AS(parse_tree_literal("(1,2"), std::invalid_argument);
    CHECK_THROWS_AS(parse_tree_literal("(1,)"), std::invalid_argument);
    CHECK_THROWS_AS(parse_tree_literal("(1 2)"), std::invalid_argument);
    CHECK_THROWS_AS(parse_tree_literal("(1,2))"), std::invalid_argument);
    CHECK_THROWS_AS(parse_tree_literal("(1,2,3)"), std::invalid_argument);
}
