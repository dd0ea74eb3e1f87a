#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "strahler/tree_core.hpp"

namespace strahler {

// Rank of each dependency relation; lower ranks attach closer to the head.
// Unknown labels (after stripping an optional ":subtype") get max rank + 1.
class priority_table {
public:
    priority_table() = default;

    // Built-in ordering of the UD relation inventory, function words first.
    static const priority_table& default_table();

    // One "label<TAB>rank" per line, '#' starts a comment.
    static priority_table load(const std::filesystem::path& file);

    void set(std::string label, int rank);
    int rank(std::string_view label) const;
    int default_rank() const noexcept { return max_rank_ + 1; }

private:
    std::map<std::string, int, std::less<>> ranks_;
    int max_rank_ = -1;
};

// Resolution of the attachment order within one side of the head:
// near_first attaches adjacent dependents first, so the farthest ones sit
// nearest the root; far_first is the mirrored reading.
enum class binary2_order { near_first, far_first };

struct binarize_method {
    enum class kind_t { grammar, heuristic };

    kind_t kind = kind_t::heuristic;
    const priority_table* table = nullptr;   // grammar only
    binary2_order order = binary2_order::near_first;

    static binarize_method grammar(const priority_table& table,
                                   binary2_order order = binary2_order::near_first) {
        return {kind_t::grammar, &table, order};
    }
    static binarize_method heuristic(binary2_order order = binary2_order::near_first) {
        return {kind_t::heuristic, nullptr, order};
    }
};

// Converts a dependency tree into a binary tree with one leaf per word.
// Each node's dependents wrap the head constituent one at a time; the
// attachment order is the method's, and each dependent lands on the side
// of the head it occupies in the sentence.
bin_tree binarize(const dep_tree& t, const binarize_method& m);

// Every binary tree reachable by choosing an attachment order independently
// at each node (word order and projectivity ignored). Throws cap_exceeded
// if the total count would exceed `cap`.
std::vector<bin_tree> all_binarizations(const dep_tree& t, std::uint64_t cap);

// Number of trees all_binarizations would produce, saturated at cap + 1.
std::uint64_t binarization_count(const dep_tree& t, std::uint64_t cap);

} // namespace strahler
