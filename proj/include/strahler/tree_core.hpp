#pragma once

#include <algorithm>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace strahler {

// Combines the Strahler values of two sibling branches: equal values merge
// into the next order, unequal values keep the larger one.
constexpr int strahler_join(int x, int y) noexcept {
    return x == y ? x + 1 : (x > y ? x : y);
}

enum class dep_error_code {
    multiple_roots,
    cycle,
    orphan_node,
    empty_tree,
};

// Structural validation failure of a dependency tree. `ids()` lists the
// offending node ids (roots, cycle members, or nodes with dangling heads).
class dep_tree_error : public std::runtime_error {
public:
    dep_tree_error(dep_error_code code, std::vector<int> ids);

    dep_error_code code() const noexcept { return code_; }
    const std::vector<int>& ids() const noexcept { return ids_; }

private:
    dep_error_code code_;
    std::vector<int> ids_;
};

const char* to_string(dep_error_code code) noexcept;

// One word of a sentence. `id` is the 1-based surface position, `head` the
// id of the governing word (0 for the root).
struct dep_node {
    int id = 0;
    int head = 0;
    std::string relation;
    std::string form;
};

// Rooted dependency tree over the words of a sentence. Immutable after
// construction; nodes are addressed by index in surface (id) order.
class dep_tree {
public:
    // Checks that the head links form a single rooted tree and builds the
    // child index. Throws dep_tree_error naming the failed invariant.
    // Precondition: ids are unique (std::invalid_argument otherwise).
    static dep_tree validate(std::vector<dep_node> nodes);

    int size() const noexcept { return static_cast<int>(nodes_.size()); }
    int root() const noexcept { return root_; }
    const dep_node& node(int v) const { return nodes_[static_cast<size_t>(v)]; }
    int parent(int v) const { return parent_[static_cast<size_t>(v)]; }

    // Children of v in surface order (ascending id).
    std::span<const int> children(int v) const {
        auto lo = static_cast<size_t>(child_offset_[static_cast<size_t>(v)]);
        auto hi = static_cast<size_t>(child_offset_[static_cast<size_t>(v) + 1]);
        return {children_.data() + lo, hi - lo};
    }

    // Every node after all of its children, iteratively computed.
    std::vector<int> post_order() const;

private:
    dep_tree() = default;

    std::vector<dep_node> nodes_;     // ascending id
    std::vector<int> parent_;         // -1 for root
    std::vector<int> child_offset_;   // CSR offsets into children_
    std::vector<int> children_;
    int root_ = -1;
};

// Binary tree stored as an index arena. Nodes are append-only and children
// always precede their parent, so bottom-up passes are plain forward scans.
// The most recently added node is the root.
class bin_tree {
public:
    bin_tree() = default;

    static bin_tree leaf(std::string payload);
    static bin_tree inner(const bin_tree& left, const bin_tree& right);

    int add_leaf(std::string payload);
    int add_inner(int left, int right);

    bool empty() const noexcept { return nodes_.empty(); }
    int size() const noexcept { return static_cast<int>(nodes_.size()); }
    int root() const noexcept { return static_cast<int>(nodes_.size()) - 1; }

    bool is_leaf(int v) const { return nodes_[static_cast<size_t>(v)].payload >= 0; }
    int left(int v) const { return nodes_[static_cast<size_t>(v)].left; }
    int right(int v) const { return nodes_[static_cast<size_t>(v)].right; }
    const std::string& payload(int v) const;

    int leaf_count() const noexcept;

private:
    struct node {
        int left = -1;
        int right = -1;
        int payload = -1;   // index into payloads_, -1 for inner nodes
    };
    std::vector<node> nodes_;
    std::vector<std::string> payloads_;
};

// Strahler number of the whole tree: leaves count 1, equal siblings
// increment, unequal take the maximum.
int strahler_number(const bin_tree& t);

// Number of nodes on the longest root-to-leaf path.
int tree_depth(const bin_tree& t);

} // namespace strahler
