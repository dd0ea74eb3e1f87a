#include "strahler/limits.hpp"

#include <algorithm>

namespace strahler {

namespace {

enum class fold_dir { ascending, descending };

// Shared bottom-up fold; the two limits differ only in the sort direction
// and whether the head's own leaf enters the fold first or last.
int fold_limits(const dep_tree& t, fold_dir dir) {
    std::vector<int> value(static_cast<size_t>(t.size()), 0);
    std::vector<int> child_values;
    for (int v : t.post_order()) {
        child_values.clear();
        for (int c : t.children(v)) child_values.push_back(value[static_cast<size_t>(c)]);
        std::sort(child_values.begin(), child_values.end());
        int acc = 0;
        if (dir == fold_dir::ascending) {
            acc = strahler_join(acc, 1);
            for (int x : child_values) acc = strahler_join(acc, x);
        } else {
            for (auto it = child_values.rbegin(); it != child_values.rend(); ++it)
                acc = strahler_join(acc, *it);
            acc = strahler_join(acc, 1);
        }
        value[static_cast<size_t>(v)] = acc;
    }
    return value[static_cast<size_t>(t.root())];
}

} // namespace

int upper_limit(const dep_tree& t) { return fold_limits(t, fold_dir::ascending); }

int lower_limit(const dep_tree& t) { return fold_limits(t, fold_dir::descending); }

limit_pair limits(const dep_tree& t) { return {lower_limit(t), upper_limit(t)}; }

} // namespace strahler
