#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "strahler/tree_core.hpp"

namespace strahler {

struct eval_step {
    enum class op_t { shift, reduce };
    op_t op;
    int stack_depth_after;
};

// Stack transitions of one shift-reduce evaluation. Shifts push a leaf,
// reduces replace the top two entries by one; the trace ends at depth 1.
struct eval_trace {
    std::vector<eval_step> steps;
    int max_depth = 0;
};

// Per inner node: which subtree to evaluate first. Defaults to left-first.
class traversal_order {
public:
    traversal_order() = default;
    explicit traversal_order(int tree_size) : right_first_(static_cast<size_t>(tree_size), 0) {}

    void set_right_first(int node, bool value) { right_first_[static_cast<size_t>(node)] = value; }
    bool right_first(int node) const { return right_first_[static_cast<size_t>(node)] != 0; }

private:
    std::vector<char> right_first_;
};

// Runs the shift-reduce evaluation of t under the given order, evaluating
// each inner node's chosen subtree fully before the other one.
eval_trace evaluate(const bin_tree& t, const traversal_order& order);

// Order that evaluates the child with the larger Strahler label first
// (ties left-first); it attains the minimum stack depth.
traversal_order sethi_ullman_order(const bin_tree& t);

// Minimum max stack depth over all 2^inner traversal orders, found by
// exhaustive search. Throws cap_exceeded if the tree has more than
// `exhaustive_cap` inner nodes.
int min_stack_depth(const bin_tree& t, std::uint64_t exhaustive_cap);

// Parses a tree literal such as "((1,2),(3,4))"; atoms become leaf payloads.
bin_tree parse_tree_literal(std::string_view text);

} // namespace strahler
