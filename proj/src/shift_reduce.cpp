#include "strahler/shift_reduce.hpp"

#include <cassert>
#include <stdexcept>
#include <string>

#include "strahler/errors.hpp"

namespace strahler {

eval_trace evaluate(const bin_tree& t, const traversal_order& order) {
    if (t.empty()) throw std::invalid_argument("evaluate of an empty tree");
    eval_trace trace;
    trace.steps.reserve(static_cast<size_t>(2 * t.leaf_count() - 1));

    struct frame {
        int node;
        int stage;   // 0: descend first child, 1: descend second, 2: reduce
    };
    std::vector<frame> stack{{t.root(), 0}};
    int depth = 0;
    while (!stack.empty()) {
        frame& f = stack.back();
        if (t.is_leaf(f.node)) {
            ++depth;
            trace.max_depth = std::max(trace.max_depth, depth);
            trace.steps.push_back({eval_step::op_t::shift, depth});
            stack.pop_back();
            continue;
        }
        const bool rf = order.right_first(f.node);
        switch (f.stage++) {
            case 0:
                stack.push_back({rf ? t.right(f.node) : t.left(f.node), 0});
                break;
            case 1:
                stack.push_back({rf ? t.left(f.node) : t.right(f.node), 0});
                break;
            default:
                --depth;   // two results replaced by one
                trace.steps.push_back({eval_step::op_t::reduce, depth});
                stack.pop_back();
                break;
        }
    }
    assert(depth == 1);
    return trace;
}

traversal_order sethi_ullman_order(const bin_tree& t) {
    traversal_order order(t.size());
    std::vector<int> label(static_cast<size_t>(t.size()));
    for (int v = 0; v < t.size(); ++v) {
        if (t.is_leaf(v)) {
            label[static_cast<size_t>(v)] = 1;
            continue;
        }
        const int l = label[static_cast<size_t>(t.left(v))];
        const int r = label[static_cast<size_t>(t.right(v))];
        label[static_cast<size_t>(v)] = strahler_join(l, r);
        order.set_right_first(v, r > l);
    }
    return order;
}

int min_stack_depth(const bin_tree& t, std::uint64_t exhaustive_cap) {
    std::vector<int> inner;
    for (int v = 0; v < t.size(); ++v)
        if (!t.is_leaf(v)) inner.push_back(v);
    if (inner.size() > exhaustive_cap || inner.size() >= 63)
        throw cap_exceeded("tree has " + std::to_string(inner.size()) +
                           " inner nodes, exhaustive cap is " + std::to_string(exhaustive_cap));

    int best = t.size() + 1;
    const std::uint64_t orders = std::uint64_t{1} << inner.size();
    for (std::uint64_t mask = 0; mask < orders; ++mask) {
        traversal_order order(t.size());
        for (size_t j = 0; j < inner.size(); ++j)
            order.set_right_first(inner[j], (mask >> j) & 1);
        best = std::min(best, evaluate(t, order).max_depth);
    }
    return best;
}

bin_tree parse_tree_literal(std::string_view text) {
    bin_tree out;
    struct frame {
        int left = -1;   // -1 until the first subtree is parsed
    };
    std::vector<frame> open;
    int done = -1;   // id of the fully parsed subtree at the current level
    size_t i = 0;
    auto fail = [&](const std::string& what) {
        throw std::invalid_argument("tree literal, position " + std::to_string(i) + ": " + what);
    };
    auto skip_ws = [&] {
        while (i < text.size() && (text[i] == ' ' || text[i] == '\t')) ++i;
    };
    while (true) {
        skip_ws();
        if (i >= text.size()) break;
        const char c = text[i];
        if (c == '(') {
            if (done >= 0) fail("expected ',' or ')'");
            open.push_back({});
            ++i;
        } else if (c == ',') {
            if (open.empty() || done < 0 || open.back().left >= 0) fail("unexpected ','");
            open.back().left = done;
            done = -1;
            ++i;
        } else if (c == ')') {
            if (open.empty() || done < 0 || open.back().left < 0) fail("unexpected ')'");
            done = out.add_inner(open.back().left, done);
            open.pop_back();
            ++i;
        } else {
            if (done >= 0) fail("expected ',' or ')'");
            size_t start = i;
            while (i < text.size() && text[i] != '(' && text[i] != ')' && text[i] != ',' &&
                   text[i] != ' ' && text[i] != '\t')
                ++i;
            if (i == start) fail("empty atom");
            done = out.add_leaf(std::string(text.substr(start, i - start)));
        }
    }
    if (!open.empty()) fail("unbalanced '('");
    if (done < 0) fail("empty literal");
    assert(done == out.root());
    return out;
}

} // namespace strahler
