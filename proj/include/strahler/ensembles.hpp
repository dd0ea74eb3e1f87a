#pragma once

#include <map>
#include <memory>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "strahler/limits.hpp"

namespace strahler {

using big_count = boost::multiprecision::cpp_int;
using big_ratio = boost::multiprecision::cpp_rational;

// Number of binary trees with n leaves: (1/n) * C(2n-2, n-1).
big_count binary_tree_count(int n);

// Number of plane rooted trees with n nodes; the same Catalan value.
big_count plane_tree_count(int n);

// Closed-form Strahler extremes over all binary trees with n leaves:
// lower is 1 only for the single leaf, upper is floor(log2 n) + 1.
limit_pair binary_ensemble_limits(int n);

// Exact distribution of the Strahler number over all binary trees with
// 1..n_max leaves. Counts are exact big integers; means exact rationals.
class binary_strahler_table {
public:
    explicit binary_strahler_table(int n_max);

    int n_max() const noexcept { return n_max_; }
    // Nonzero counts per Strahler value. Throws n_max_exceeded outside 1..n_max.
    std::map<int, big_count> distribution(int n) const;
    big_count total(int n) const;
    big_ratio mean(int n) const;

private:
    void check(int n) const;

    int n_max_ = 0;
    int s_cap_ = 0;
    std::vector<std::vector<big_count>> counts_;   // [n][s]
};

enum class limit_mode { upper, lower };

// Reduced multiset of child limit values: sorted, each value kept at most
// twice. Extra copies never change the fold outcome, which is what makes
// Catalan-scale counting by state feasible.
class limit_state {
public:
    limit_state() = default;

    // Sorts and reduces a list of child limit values.
    static limit_state of(std::span<const int> child_limits);

    std::span<const int> values() const noexcept { return values_; }
    bool empty() const noexcept { return values_.empty(); }

    friend bool operator==(const limit_state&, const limit_state&) = default;
    friend auto operator<=>(const limit_state&, const limit_state&) = default;

private:
    std::vector<int> values_;
};

// Limit of a tree whose root's children carry the state's values; the empty
// state is a leaf and yields 1.
int state_strahler(const limit_state& q, limit_mode mode);

// State of a tree grown by attaching a subtree with state q2 as one more
// child: append st(q2), re-sort, re-reduce.
limit_state combine_states(const limit_state& q1, const limit_state& q2, limit_mode mode);

// Exact counts of plane trees with n nodes per upper (or lower) limit value,
// for all n up to n_max, via dynamic programming over reduced states.
class plane_limit_table {
public:
    plane_limit_table(int n_max, limit_mode mode);

    int n_max() const noexcept { return n_max_; }
    limit_mode mode() const noexcept { return mode_; }
    // Nonzero counts per limit value p. Throws n_max_exceeded outside 1..n_max.
    const std::map<int, big_count>& counts(int n) const;
    big_count total(int n) const;
    big_ratio average(int n) const;

private:
    void check(int n) const;

    int n_max_ = 0;
    limit_mode mode_ = limit_mode::upper;
    std::vector<std::map<int, big_count>> counts_;   // [n] -> p -> count
};

} // namespace strahler
