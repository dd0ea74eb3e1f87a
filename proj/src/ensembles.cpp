#include "strahler/ensembles.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <map>
#include <string>

#include "strahler/errors.hpp"

namespace strahler {

namespace {

int floor_log2(int n) {
    return std::bit_width(static_cast<unsigned>(n)) - 1;
}

void require_positive(int n) {
    if (n < 1) throw std::invalid_argument("tree size must be >= 1, got " + std::to_string(n));
}

} // namespace

big_count binary_tree_count(int n) {
    require_positive(n);
    // C(2n-2, n-1) / n computed as a running product that stays integral
    big_count c = 1;
    for (int i = 1; i <= n - 1; ++i) {
        c *= n - 1 + i;
        c /= i;
    }
    return c / n;
}

big_count plane_tree_count(int n) { return binary_tree_count(n); }

limit_pair binary_ensemble_limits(int n) {
    require_positive(n);
    return {n == 1 ? 1 : 2, floor_log2(n) + 1};
}

binary_strahler_table::binary_strahler_table(int n_max) {
    require_positive(n_max);
    n_max_ = n_max;
    s_cap_ = floor_log2(n_max) + 1;
    const size_t width = static_cast<size_t>(s_cap_) + 1;   // index by s, 0 unused

    counts_.assign(static_cast<size_t>(n_max_) + 1, {});
    std::vector<std::vector<big_count>> below(static_cast<size_t>(n_max_) + 1);   // sum over s' <= s

    counts_[1].assign(width, big_count(0));
    counts_[1][1] = 1;
    for (int n = 1; n <= n_max_; ++n) {
        if (n > 1) {
            auto& row = counts_[static_cast<size_t>(n)];
            row.assign(width, big_count(0));
            big_count tmp;
            // A root with subtree leaf counts (k, n-k) has Strahler s when its
            // children score (s, <s), (<s, s), or (s-1, s-1).
            for (int k = 1; k < n; ++k) {
                const auto& a = counts_[static_cast<size_t>(k)];
                const auto& b = counts_[static_cast<size_t>(n - k)];
                const auto& la = below[static_cast<size_t>(k)];
                const auto& lb = below[static_cast<size_t>(n - k)];
                const int hi = std::min(s_cap_, floor_log2(n) + 1);
                for (int s = 2; s <= hi; ++s) {
                    tmp = a[static_cast<size_t>(s)];
                    tmp *= lb[static_cast<size_t>(s - 1)];
                    row[static_cast<size_t>(s)] += tmp;
                    tmp = la[static_cast<size_t>(s - 1)];
                    tmp *= b[static_cast<size_t>(s)];
                    row[static_cast<size_t>(s)] += tmp;
                    tmp = a[static_cast<size_t>(s - 1)];
                    tmp *= b[static_cast<size_t>(s - 1)];
                    row[static_cast<size_t>(s)] += tmp;
                }
            }
        }
        auto& cum = below[static_cast<size_t>(n)];
        cum.assign(width, big_count(0));
        big_count run = 0;
        for (int s = 1; s <= s_cap_; ++s) {
            run += counts_[static_cast<size_t>(n)][static_cast<size_t>(s)];
            cum[static_cast<size_t>(s)] = run;
        }
    }
}

void binary_strahler_table::check(int n) const {
    if (n < 1 || n > n_max_)
        throw n_max_exceeded("n=" + std::to_string(n) + " outside built range 1.." +
                             std::to_string(n_max_));
}

std::map<int, big_count> binary_strahler_table::distribution(int n) const {
    check(n);
    std::map<int, big_count> out;
    for (int s = 1; s <= s_cap_; ++s) {
        const auto& c = counts_[static_cast<size_t>(n)][static_cast<size_t>(s)];
        if (c != 0) out.emplace(s, c);
    }
    return out;
}

big_count binary_strahler_table::total(int n) const {
    check(n);
    big_count sum = 0;
    for (const auto& c : counts_[static_cast<size_t>(n)]) sum += c;
    return sum;
}

big_ratio binary_strahler_table::mean(int n) const {
    check(n);
    big_count weighted = 0, sum = 0;
    for (int s = 1; s <= s_cap_; ++s) {
        const auto& c = counts_[static_cast<size_t>(n)][static_cast<size_t>(s)];
        weighted += s * c;
        sum += c;
    }
    return big_ratio(weighted, sum);
}

limit_state limit_state::of(std::span<const int> child_limits) {
    limit_state q;
    q.values_.assign(child_limits.begin(), child_limits.end());
    std::sort(q.values_.begin(), q.values_.end());
    size_t out = 0;
    for (size_t i = 0; i < q.values_.size(); ++i) {
        if (out >= 2 && q.values_[out - 1] == q.values_[i] && q.values_[out - 2] == q.values_[i])
            continue;   // a third copy never changes the fold
        q.values_[out++] = q.values_[i];
    }
    q.values_.resize(out);
    return q;
}

int state_strahler(const limit_state& q, limit_mode mode) {
    int acc = 0;
    if (mode == limit_mode::upper) {
        acc = strahler_join(acc, 1);
        for (int x : q.values()) acc = strahler_join(acc, x);
    } else {
        const auto vals = q.values();
        for (auto it = vals.rbegin(); it != vals.rend(); ++it) acc = strahler_join(acc, *it);
        acc = strahler_join(acc, 1);
    }
    return acc;
}

limit_state combine_states(const limit_state& q1, const limit_state& q2, limit_mode mode) {
    std::vector<int> vals(q1.values().begin(), q1.values().end());
    vals.push_back(state_strahler(q2, mode));
    return limit_state::of(vals);
}

namespace {

// Intern pool for reduced states. Values are bounded by the limit cap
// (about log2 of the largest tree), so append results are memoized densely.
class state_pool {
public:
    explicit state_pool(int value_cap)
        : value_cap_(value_cap) {
        empty_id_ = intern({});
    }

    int empty_id() const noexcept { return empty_id_; }
    size_t size() const noexcept { return states_.size(); }

    int append(int state_id, int value) {
        auto& row = append_memo_[static_cast<size_t>(state_id)];
        if (row.empty()) row.assign(static_cast<size_t>(value_cap_) + 2, -1);
        int& slot = row[static_cast<size_t>(value)];
        if (slot < 0) {
            std::vector<int> vals = states_[static_cast<size_t>(state_id)];
            vals.insert(std::upper_bound(vals.begin(), vals.end(), value), value);
            size_t out = 0;
            for (size_t i = 0; i < vals.size(); ++i) {
                if (out >= 2 && vals[out - 1] == vals[i] && vals[out - 2] == vals[i]) continue;
                vals[out++] = vals[i];
            }
            vals.resize(out);
            slot = intern(std::move(vals));
        }
        return slot;
    }

    int strahler_of(int state_id, limit_mode mode) {
        auto& memo = mode == limit_mode::upper ? st_upper_ : st_lower_;
        if (memo.size() < states_.size()) memo.resize(states_.size(), -1);
        int& slot = memo[static_cast<size_t>(state_id)];
        if (slot < 0) {
            limit_state q = limit_state::of(states_[static_cast<size_t>(state_id)]);
            slot = state_strahler(q, mode);
        }
        return slot;
    }

private:
    int intern(std::vector<int> vals) {
        auto [it, inserted] = index_.try_emplace(vals, static_cast<int>(states_.size()));
        if (inserted) {
            states_.push_back(std::move(vals));
            append_memo_.emplace_back();
        }
        return it->second;
    }

    int value_cap_;
    int empty_id_ = -1;
    std::vector<std::vector<int>> states_;
    std::map<std::vector<int>, int> index_;
    std::vector<std::vector<int>> append_memo_;   // [state][appended value] -> state
    std::vector<int> st_upper_, st_lower_;
};

} // namespace

plane_limit_table::plane_limit_table(int n_max, limit_mode mode) {
    require_positive(n_max);
    n_max_ = n_max;
    mode_ = mode;
    counts_.assign(static_cast<size_t>(n_max_) + 1, {});

    state_pool pool(floor_log2(n_max) + 2);
    using sparse_row = std::vector<std::pair<int, big_count>>;   // state id -> count
    std::vector<sparse_row> by_size(static_cast<size_t>(n_max_) + 1);

    by_size[1].emplace_back(pool.empty_id(), big_count(1));
    counts_[1].emplace(1, big_count(1));

    std::vector<big_count> scratch;
    std::vector<int> touched;
    big_count tmp;
    for (int n = 2; n <= n_max_; ++n) {
        touched.clear();
        // a tree of size n is a tree of size n-m whose root gains a final
        // child subtree of size m
        for (int m = 1; m < n; ++m) {
            const auto& base = by_size[static_cast<size_t>(n - m)];
            for (const auto& [p, child_count] : counts_[static_cast<size_t>(m)]) {
                for (const auto& [q1, base_count] : base) {
                    const int q = pool.append(q1, p);
                    if (scratch.size() < pool.size()) scratch.resize(pool.size());
                    big_count& cell = scratch[static_cast<size_t>(q)];
                    if (cell == 0) touched.push_back(q);
                    tmp = base_count;
                    tmp *= child_count;
                    cell += tmp;
                }
            }
        }
        std::sort(touched.begin(), touched.end());
        auto& row = by_size[static_cast<size_t>(n)];
        row.reserve(touched.size());
        auto& rn = counts_[static_cast<size_t>(n)];
        for (int q : touched) {
            big_count& cell = scratch[static_cast<size_t>(q)];
            rn[pool.strahler_of(q, mode_)] += cell;
            row.emplace_back(q, std::move(cell));
            cell = 0;
        }
    }
}

void plane_limit_table::check(int n) const {
    if (n < 1 || n > n_max_)
        throw n_max_exceeded("n=" + std::to_string(n) + " outside built range 1.." +
                             std::to_string(n_max_));
}

const std::map<int, big_count>& plane_limit_table::counts(int n) const {
    check(n);
    return counts_[static_cast<size_t>(n)];
}

big_count plane_limit_table::total(int n) const {
    check(n);
    big_count sum = 0;
    for (const auto& [p, c] : counts_[static_cast<size_t>(n)]) sum += c;
    return sum;
}

big_ratio plane_limit_table::average(int n) const {
    check(n);
    big_count weighted = 0, sum = 0;
    for (const auto& [p, c] : counts_[static_cast<size_t>(n)]) {
        weighted += p * c;
        sum += c;
    }
    return big_ratio(weighted, sum);
}

} // namespace strahler
