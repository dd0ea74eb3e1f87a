#include "strahler/tree_core.hpp"

#include <cassert>
#include <numeric>
#include <sstream>
#include <unordered_map>

namespace strahler {

const char* to_string(dep_error_code code) noexcept {
    switch (code) {
        case dep_error_code::multiple_roots: return "multiple-roots";
        case dep_error_code::cycle: return "cycle";
        case dep_error_code::orphan_node: return "orphan-node";
        case dep_error_code::empty_tree: return "empty-tree";
    }
    return "unknown";
}

namespace {

std::string describe(dep_error_code code, const std::vector<int>& ids) {
    std::ostringstream os;
    os << to_string(code);
    if (!ids.empty()) {
        os << " (ids:";
        for (int id : ids) os << ' ' << id;
        os << ')';
    }
    return os.str();
}

} // namespace

dep_tree_error::dep_tree_error(dep_error_code code, std::vector<int> ids)
    : std::runtime_error(describe(code, ids)), code_(code), ids_(std::move(ids)) {}

dep_tree dep_tree::validate(std::vector<dep_node> nodes) {
    if (nodes.empty()) throw dep_tree_error(dep_error_code::empty_tree, {});

    std::sort(nodes.begin(), nodes.end(),
              [](const dep_node& a, const dep_node& b) { return a.id < b.id; });

    const int n = static_cast<int>(nodes.size());
    std::unordered_map<int, int> index;
    index.reserve(static_cast<size_t>(n));
    for (int v = 0; v < n; ++v) {
        if (!index.emplace(nodes[static_cast<size_t>(v)].id, v).second)
            throw std::invalid_argument("duplicate node id " +
                                        std::to_string(nodes[static_cast<size_t>(v)].id));
    }

    std::vector<int> roots;
    std::vector<int> orphans;
    std::vector<int> parent(static_cast<size_t>(n), -1);
    for (int v = 0; v < n; ++v) {
        const dep_node& nd = nodes[static_cast<size_t>(v)];
        if (nd.head == 0) {
            roots.push_back(nd.id);
            continue;
        }
        if (nd.head == nd.id) throw dep_tree_error(dep_error_code::cycle, {nd.id});
        auto it = index.find(nd.head);
        if (it == index.end()) {
            orphans.push_back(nd.id);
            continue;
        }
        parent[static_cast<size_t>(v)] = it->second;
    }
    if (roots.size() > 1) throw dep_tree_error(dep_error_code::multiple_roots, roots);
    if (!orphans.empty()) throw dep_tree_error(dep_error_code::orphan_node, orphans);

    // Walks head links to exhibit a concrete cycle; with no root or with
    // unreachable nodes one must exist.
    auto find_cycle = [&](int start) {
        std::vector<int> stamp(static_cast<size_t>(n), -1);
        int v = start;
        while (stamp[static_cast<size_t>(v)] != start) {
            stamp[static_cast<size_t>(v)] = start;
            v = parent[static_cast<size_t>(v)];
            assert(v >= 0);
        }
        std::vector<int> ids;
        int w = v;
        do {
            ids.push_back(nodes[static_cast<size_t>(w)].id);
            w = parent[static_cast<size_t>(w)];
        } while (w != v);
        std::sort(ids.begin(), ids.end());
        return ids;
    };
    if (roots.empty()) throw dep_tree_error(dep_error_code::cycle, find_cycle(0));

    dep_tree t;
    t.root_ = index.at(roots.front());
    t.child_offset_.assign(static_cast<size_t>(n) + 1, 0);
    for (int v = 0; v < n; ++v)
        if (parent[static_cast<size_t>(v)] >= 0)
            ++t.child_offset_[static_cast<size_t>(parent[static_cast<size_t>(v)]) + 1];
    std::partial_sum(t.child_offset_.begin(), t.child_offset_.end(), t.child_offset_.begin());
    t.children_.resize(static_cast<size_t>(n) - 1);
    {
        std::vector<int> cursor(t.child_offset_.begin(), t.child_offset_.end() - 1);
        for (int v = 0; v < n; ++v) {   // ascending v keeps children in id order
            int p = parent[static_cast<size_t>(v)];
            if (p >= 0) t.children_[static_cast<size_t>(cursor[static_cast<size_t>(p)]++)] = v;
        }
    }
    t.parent_ = std::move(parent);
    t.nodes_ = std::move(nodes);

    // Reachability from the root; leftovers sit on a cycle.
    std::vector<char> seen(static_cast<size_t>(n), 0);
    std::vector<int> stack{t.root_};
    seen[static_cast<size_t>(t.root_)] = 1;
    int reached = 0;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        ++reached;
        for (int c : t.children(v)) {
            if (!seen[static_cast<size_t>(c)]) {
                seen[static_cast<size_t>(c)] = 1;
                stack.push_back(c);
            }
        }
    }
    if (reached < n) {
        int start = 0;
        while (seen[static_cast<size_t>(start)]) ++start;
        // rebuild the cycle walk against the final parent array
        std::vector<int> stamp(static_cast<size_t>(n), 0);
        int v = start;
        while (!stamp[static_cast<size_t>(v)]) {
            stamp[static_cast<size_t>(v)] = 1;
            v = t.parent_[static_cast<size_t>(v)];
        }
        std::vector<int> ids;
        int w = v;
        do {
            ids.push_back(t.nodes_[static_cast<size_t>(w)].id);
            w = t.parent_[static_cast<size_t>(w)];
        } while (w != v);
        std::sort(ids.begin(), ids.end());
        throw dep_tree_error(dep_error_code::cycle, ids);
    }
    return t;
}

std::vector<int> dep_tree::post_order() const {
    std::vector<int> out;
    out.reserve(nodes_.size());
    std::vector<int> stack{root_};
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        out.push_back(v);
        for (int c : children(v)) stack.push_back(c);
    }
    std::reverse(out.begin(), out.end());
    return out;
}

bin_tree bin_tree::leaf(std::string payload) {
    bin_tree t;
    t.add_leaf(std::move(payload));
    return t;
}

bin_tree bin_tree::inner(const bin_tree& left, const bin_tree& right) {
    bin_tree t;
    t.nodes_.reserve(left.nodes_.size() + right.nodes_.size() + 1);
    t.payloads_.reserve(left.payloads_.size() + right.payloads_.size());
    t.nodes_ = left.nodes_;
    t.payloads_ = left.payloads_;
    const int off = static_cast<int>(left.nodes_.size());
    const int poff = static_cast<int>(left.payloads_.size());
    for (const node& nd : right.nodes_) {
        node shifted = nd;
        if (shifted.left >= 0) shifted.left += off;
        if (shifted.right >= 0) shifted.right += off;
        if (shifted.payload >= 0) shifted.payload += poff;
        t.nodes_.push_back(shifted);
    }
    t.payloads_.insert(t.payloads_.end(), right.payloads_.begin(), right.payloads_.end());
    t.add_inner(left.root(), off + right.root());
    return t;
}

int bin_tree::add_leaf(std::string payload) {
    payloads_.push_back(std::move(payload));
    nodes_.push_back({-1, -1, static_cast<int>(payloads_.size()) - 1});
    return static_cast<int>(nodes_.size()) - 1;
}

int bin_tree::add_inner(int left, int right) {
    const int id = static_cast<int>(nodes_.size());
    if (left < 0 || right < 0 || left >= id || right >= id)
        throw std::invalid_argument("inner node children must already exist");
    nodes_.push_back({left, right, -1});
    return id;
}

const std::string& bin_tree::payload(int v) const {
    const node& nd = nodes_[static_cast<size_t>(v)];
    if (nd.payload < 0) throw std::invalid_argument("payload of an inner node");
    return payloads_[static_cast<size_t>(nd.payload)];
}

int bin_tree::leaf_count() const noexcept {
    return static_cast<int>(payloads_.size());
}

int strahler_number(const bin_tree& t) {
    if (t.empty()) throw std::invalid_argument("strahler of an empty tree");
    std::vector<int> s(static_cast<size_t>(t.size()));
    for (int v = 0; v < t.size(); ++v) {
        s[static_cast<size_t>(v)] =
            t.is_leaf(v) ? 1
                         : strahler_join(s[static_cast<size_t>(t.left(v))],
                                         s[static_cast<size_t>(t.right(v))]);
    }
    return s[static_cast<size_t>(t.root())];
}

int tree_depth(const bin_tree& t) {
    if (t.empty()) throw std::invalid_argument("depth of an empty tree");
    std::vector<int> d(static_cast<size_t>(t.size()));
    for (int v = 0; v < t.size(); ++v) {
        d[static_cast<size_t>(v)] =
            t.is_leaf(v) ? 1
                         : 1 + std::max(d[static_cast<size_t>(t.left(v))],
                                        d[static_cast<size_t>(t.right(v))]);
    }
    return d[static_cast<size_t>(t.root())];
}

} // namespace strahler
