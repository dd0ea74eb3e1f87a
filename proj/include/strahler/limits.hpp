#pragma once

#include "strahler/tree_core.hpp"

namespace strahler {

// Extremes of the Strahler number of one dependency tree across all of its
// binarizations.
struct limit_pair {
    int lower = 1;
    int upper = 1;

    friend bool operator==(const limit_pair&, const limit_pair&) = default;
};

// Largest Strahler number any binarization of t can reach: per node, fold
// the children's values in ascending order through strahler_join, seeding
// the fold with the head's own leaf.
int upper_limit(const dep_tree& t);

// Smallest reachable Strahler number: fold children descending, folding in
// the head's leaf last.
int lower_limit(const dep_tree& t);

limit_pair limits(const dep_tree& t);

} // namespace strahler
