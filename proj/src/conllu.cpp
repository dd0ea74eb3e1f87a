#include "strahler/conllu.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>

#include "strahler/errors.hpp"

namespace strahler {

void ingest_report::merge(const ingest_report& other) {
    parsed += other.parsed;
    skipped += other.skipped;
    for (const auto& [reason, count] : other.skip_reasons) skip_reasons[reason] += count;
}

namespace {

bool parse_int(std::string_view text, int& out) {
    const char* end = text.data() + text.size();
    auto [p, ec] = std::from_chars(text.data(), end, out);
    return ec == std::errc() && p == end;
}

// Splits a token line into its 10 tab-separated columns.
bool split_columns(std::string_view line, std::array<std::string_view, 10>& cols) {
    size_t start = 0;
    for (size_t i = 0; i < 9; ++i) {
        const size_t tab = line.find('\t', start);
        if (tab == std::string_view::npos) return false;
        cols[i] = line.substr(start, tab - start);
        start = tab + 1;
    }
    if (line.find('\t', start) != std::string_view::npos) return false;
    cols[9] = line.substr(start);
    return true;
}

constexpr std::string_view sent_id_prefix = "# sent_id = ";

} // namespace

std::optional<conllu_reader::entry> conllu_reader::next() {
    if (eof_) return std::nullopt;
    std::string line;
    std::string sent_id;
    std::vector<dep_node> nodes;
    bool saw_token_line = false;
    std::string bad_reason;   // first structural problem of the sentence

    auto finish = [&]() -> std::optional<entry> {
        ++index_;
        if (!bad_reason.empty()) return entry(skip_record{index_, sent_id, bad_reason});
        if (nodes.empty()) return entry(skip_record{index_, sent_id, "empty-tree"});
        // after dropping ranges and empty nodes, syntactic words must be 1..n
        for (size_t i = 0; i < nodes.size(); ++i) {
            if (nodes[i].id != static_cast<int>(i) + 1)
                return entry(skip_record{index_, sent_id, "bad-id"});
        }
        try {
            return entry(dep_tree::validate(std::move(nodes)));
        } catch (const dep_tree_error& e) {
            return entry(skip_record{index_, sent_id, to_string(e.code())});
        }
    };

    while (std::getline(*in_, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) {
            if (!saw_token_line) continue;   // comment-only block or stray blank
            return finish();
        }
        if (line[0] == '#') {
            if (line.starts_with(sent_id_prefix))
                sent_id = line.substr(sent_id_prefix.size());
            continue;
        }
        saw_token_line = true;
        if (!bad_reason.empty()) continue;   // already doomed, just consume
        std::array<std::string_view, 10> cols;
        if (!split_columns(line, cols)) {
            bad_reason = "bad-columns";
            continue;
        }
        const std::string_view id_col = cols[0];
        if (id_col.find('-') != std::string_view::npos) continue;   // multiword token range
        if (id_col.find('.') != std::string_view::npos) continue;   // empty node
        dep_node node;
        if (!parse_int(id_col, node.id) || node.id < 1) {
            bad_reason = "bad-id";
            continue;
        }
        if (!parse_int(cols[6], node.head) || node.head < 0) {
            bad_reason = "bad-head";
            continue;
        }
        node.form = std::string(cols[1]);
        node.relation = std::string(cols[7]);
        nodes.push_back(std::move(node));
    }
    eof_ = true;
    if (saw_token_line) return finish();
    return std::nullopt;
}

parsed_stream parse_conllu(std::istream& in) {
    parsed_stream out;
    conllu_reader reader(in);
    while (auto e = reader.next()) {
        if (std::holds_alternative<dep_tree>(*e)) {
            out.trees.push_back(std::get<dep_tree>(std::move(*e)));
            ++out.report.parsed;
        } else {
            auto& skip = std::get<skip_record>(*e);
            out.report.add_skip(skip.reason);
            out.skips.push_back(std::move(skip));
        }
    }
    return out;
}

namespace {

std::int64_t count_sentences(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw io_error("cannot open " + file.string());
    std::string line;
    std::int64_t count = 0;
    bool in_block = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) {
            if (in_block) ++count;
            in_block = false;
        } else if (line[0] != '#') {
            in_block = true;
        }
    }
    if (in_block) ++count;
    return count;
}

} // namespace

std::vector<corpus_source> scan_corpus(const std::filesystem::path& root) {
    std::error_code ec;
    if (!std::filesystem::is_directory(root, ec))
        throw io_error("not a directory: " + root.string());

    std::vector<corpus_source> out;
    for (const auto& dir : std::filesystem::directory_iterator(root)) {
        if (!dir.is_directory()) continue;
        const std::string name = dir.path().filename().string();
        if (!name.starts_with("UD_")) continue;
        corpus_source source;
        source.name = name;
        for (const auto& f : std::filesystem::directory_iterator(dir.path())) {
            if (f.is_regular_file() && f.path().extension() == ".conllu")
                source.paths.push_back(f.path());
        }
        if (source.paths.empty()) continue;
        std::sort(source.paths.begin(), source.paths.end());
        for (const auto& p : source.paths) source.sentence_count += count_sentences(p);
        out.push_back(std::move(source));
    }
    std::sort(out.begin(), out.end(),
              [](const corpus_source& a, const corpus_source& b) { return a.name < b.name; });
    return out;
}

} // namespace strahler
