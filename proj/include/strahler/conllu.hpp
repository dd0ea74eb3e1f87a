#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "strahler/tree_core.hpp"

namespace strahler {

// Sentence that could not be turned into a dependency tree. `index` is the
// 1-based position of the sentence in its stream.
struct skip_record {
    std::int64_t index = 0;
    std::string sent_id;
    std::string reason;
};

struct ingest_report {
    std::int64_t parsed = 0;
    std::int64_t skipped = 0;
    std::map<std::string, std::int64_t> skip_reasons;

    void add_skip(const std::string& reason) {
        ++skipped;
        ++skip_reasons[reason];
    }
    void merge(const ingest_report& other);
};

// Streaming CoNLL-U parser. Multiword-token ranges (ids "4-5") and empty
// nodes (ids "8.1") are dropped; the remaining ID/HEAD/DEPREL/FORM columns
// build a dependency tree. Data problems never abort the stream: they come
// back as skip records with a reason.
class conllu_reader {
public:
    using entry = std::variant<dep_tree, skip_record>;

    explicit conllu_reader(std::istream& in) : in_(&in) {}

    // Next sentence, or nullopt at end of stream.
    std::optional<entry> next();

    std::int64_t sentences_seen() const noexcept { return index_; }

private:
    std::istream* in_;
    std::int64_t index_ = 0;
    bool eof_ = false;
};

// Reads a whole stream; trees in order, skips accounted in the report.
struct parsed_stream {
    std::vector<dep_tree> trees;
    std::vector<skip_record> skips;
    ingest_report report;
};
parsed_stream parse_conllu(std::istream& in);

// One treebank directory: its UD_* name, its .conllu files, and the number
// of sentence records they contain (parsed + skipped).
struct corpus_source {
    std::string name;
    std::vector<std::filesystem::path> paths;
    std::int64_t sentence_count = 0;
};

// Finds UD_* directories with at least one .conllu file under root, sorted
// by name; train/dev/test files of one corpus are merged into one source.
std::vector<corpus_source> scan_corpus(const std::filesystem::path& root);

} // namespace strahler
