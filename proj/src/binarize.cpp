#include "strahler/binarize.hpp"

#include <algorithm>
#include <fstream>

#include "strahler/errors.hpp"

namespace strahler {

const priority_table& priority_table::default_table() {
    static const priority_table table = [] {
        // function words and clitics first, core arguments next, loose
        // attachments (conj, parataxis) last
        static constexpr const char* order[] = {
            "det",     "clf",        "case",      "aux",      "cop",
            "mark",    "cc",         "expl",      "fixed",    "goeswith",
            "flat",    "compound",   "nummod",    "amod",     "advmod",
            "discourse", "vocative", "dislocated", "nsubj",   "obj",
            "iobj",    "csubj",      "ccomp",     "xcomp",    "obl",
            "nmod",    "appos",      "acl",       "advcl",    "orphan",
            "dep",     "list",       "punct",     "reparandum",
            "conj",    "parataxis",
        };
        priority_table t;
        int rank = 0;
        for (const char* label : order) t.set(label, rank++);
        return t;
    }();
    return table;
}

priority_table priority_table::load(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw io_error("cannot open priority table: " + file.string());
    priority_table t;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t'))
            line.pop_back();
        if (line.empty()) continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos || tab == 0)
            throw io_error(file.string() + ":" + std::to_string(line_no) +
                           ": expected label<TAB>rank");
        int rank = 0;
        try {
            rank = std::stoi(line.substr(tab + 1));
        } catch (const std::exception&) {
            throw io_error(file.string() + ":" + std::to_string(line_no) + ": bad rank");
        }
        t.set(line.substr(0, tab), rank);
    }
    return t;
}

void priority_table::set(std::string label, int rank) {
    max_rank_ = std::max(max_rank_, rank);
    ranks_.insert_or_assign(std::move(label), rank);
}

int priority_table::rank(std::string_view label) const {
    if (auto it = ranks_.find(label); it != ranks_.end()) return it->second;
    if (auto colon = label.find(':'); colon != std::string_view::npos) {
        if (auto it = ranks_.find(label.substr(0, colon)); it != ranks_.end())
            return it->second;
    }
    return default_rank();
}

namespace {

// Dependents of v in attachment order under the distance heuristics:
// the side preceding the head attaches first, and within a side near_first
// walks outward from the head while far_first walks inward.
std::vector<int> heuristic_sequence(const dep_tree& t, int v, binary2_order order) {
    const int head_id = t.node(v).id;
    std::vector<int> before, after;
    for (int c : t.children(v))
        (t.node(c).id < head_id ? before : after).push_back(c);
    // children() is ascending by id
    if (order == binary2_order::near_first)
        std::reverse(before.begin(), before.end());
    else
        std::reverse(after.begin(), after.end());
    before.insert(before.end(), after.begin(), after.end());
    return before;
}

std::vector<int> attachment_sequence(const dep_tree& t, int v, const binarize_method& m) {
    std::vector<int> seq = heuristic_sequence(t, v, m.order);
    if (m.kind == binarize_method::kind_t::grammar) {
        const priority_table& table = *m.table;
        std::stable_sort(seq.begin(), seq.end(), [&](int a, int b) {
            return table.rank(t.node(a).relation) < table.rank(t.node(b).relation);
        });
    }
    return seq;
}

std::uint64_t mul_saturating(std::uint64_t a, std::uint64_t b, std::uint64_t limit) {
    if (b != 0 && a > limit / b) return limit + 1;
    return a * b;
}

} // namespace

bin_tree binarize(const dep_tree& t, const binarize_method& m) {
    if (m.kind == binarize_method::kind_t::grammar && m.table == nullptr)
        throw std::invalid_argument("grammar binarization requires a priority table");
    bin_tree out;
    std::vector<int> built(static_cast<size_t>(t.size()), -1);
    for (int v : t.post_order()) {
        int acc = out.add_leaf(t.node(v).form);
        for (int c : attachment_sequence(t, v, m)) {
            int sub = built[static_cast<size_t>(c)];
            acc = t.node(c).id < t.node(v).id ? out.add_inner(sub, acc)
                                              : out.add_inner(acc, sub);
        }
        built[static_cast<size_t>(v)] = acc;
    }
    return out;
}

std::uint64_t binarization_count(const dep_tree& t, std::uint64_t cap) {
    std::uint64_t total = 1;
    for (int v = 0; v < t.size(); ++v) {
        const auto k = t.children(v).size();
        for (size_t i = 2; i <= k; ++i) total = mul_saturating(total, i, cap);
        if (total > cap) return cap + 1;
    }
    return total;
}

std::vector<bin_tree> all_binarizations(const dep_tree& t, std::uint64_t cap) {
    if (binarization_count(t, cap) > cap)
        throw cap_exceeded("binarization count exceeds cap " + std::to_string(cap));

    std::vector<std::vector<bin_tree>> options(static_cast<size_t>(t.size()));
    for (int v : t.post_order()) {
        auto ch = t.children(v);
        std::vector<bin_tree>& out = options[static_cast<size_t>(v)];
        if (ch.empty()) {
            out.push_back(bin_tree::leaf(t.node(v).form));
            continue;
        }
        std::vector<size_t> perm(ch.size());
        for (size_t i = 0; i < perm.size(); ++i) perm[i] = i;
        do {
            std::vector<size_t> pick(ch.size(), 0);
            for (;;) {
                bin_tree acc = bin_tree::leaf(t.node(v).form);
                for (size_t j = 0; j < ch.size(); ++j)
                    acc = bin_tree::inner(acc, options[static_cast<size_t>(ch[perm[j]])][pick[j]]);
                out.push_back(std::move(acc));
                size_t j = 0;
                while (j < pick.size()) {
                    if (++pick[j] < options[static_cast<size_t>(ch[perm[j]])].size()) break;
                    pick[j++] = 0;
                }
                if (j == pick.size()) break;
            }
        } while (std::next_permutation(perm.begin(), perm.end()));
        for (int c : ch) {   // children's lists are no longer needed
            options[static_cast<size_t>(c)].clear();
            options[static_cast<size_t>(c)].shrink_to_fit();
        }
    }
    return std::move(options[static_cast<size_t>(t.root())]);
}

} // namespace strahler
