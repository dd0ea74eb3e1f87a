#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "strahler/binarize.hpp"
#include "strahler/conllu.hpp"
#include "strahler/ensembles.hpp"

namespace strahler {

// The four per-sentence measures: exact limits plus the Strahler number
// under each binarization method.
struct sentence_record {
    int corpus = -1;   // index into analysis_result::corpus_names
    int n = 0;
    int lower = 0;
    int upper = 0;
    int s_binary1 = 0;
    int s_binary2 = 0;
};

struct analyze_config {
    const priority_table* table = nullptr;   // nullptr: built-in default
    binary2_order order = binary2_order::near_first;
    bool drop_punct = false;
    int threads = 0;                         // 0: hardware concurrency
};

struct analysis_result {
    std::vector<std::string> corpus_names;
    std::vector<sentence_record> records;
    ingest_report report;
};

// Removes `punct` dependents (children reattach to the grandparent); the
// root is always kept.
dep_tree drop_punct(const dep_tree& t);

// Measures one tree. Applies drop_punct per config but assumes an already
// validated tree.
sentence_record analyze_tree(const dep_tree& t, const analyze_config& config);

// Runs the per-sentence measurements over whole corpora, files in parallel.
// Record order is deterministic: corpus order, then file order, then
// sentence order. Throws std::logic_error if any record violates
// lower <= binary1, binary2 <= upper.
analysis_result analyze(const std::vector<corpus_source>& corpora,
                        const analyze_config& config);

enum class measure { upper, lower, binary1, binary2 };
enum class group_by { corpus, length };

struct aggregate_row {
    std::string key;   // corpus name, or the decimal length for group_by::length
    std::int64_t count = 0;
    double upper_mean = 0, upper_std = 0;
    double lower_mean = 0, lower_std = 0;
    double binary1_mean = 0, binary1_std = 0;
    double binary2_mean = 0, binary2_std = 0;
};

// Grouped means and population standard deviations, ordered by key.
// Throws empty_input on an empty record set.
std::vector<aggregate_row> aggregate(const analysis_result& result, group_by by);

std::map<int, std::int64_t> histogram(std::span<const sentence_record> records, measure m);
std::map<int, std::int64_t> length_histogram(std::span<const sentence_record> records);

int histogram_median(const std::map<int, std::int64_t>& hist);

struct resample_result {
    std::map<int, std::int64_t> histogram;
    std::int64_t total = 0;
    double mean = 0;
    double stddev = 0;        // population
    double exact_mean = 0;    // mean of the exact mixture the sample draws from
    double exact_stddev = 0;  // stddev of the sample mean under that mixture
};

// For every sentence length in the histogram, draws that many Strahler
// values from the exact binary-tree distribution at that length. Seeded
// and reproducible.
resample_result resample_binary_ensemble(const std::map<int, std::int64_t>& length_hist,
                                         const binary_strahler_table& table,
                                         std::uint64_t seed);

enum class output_format { csv, json };

void write_records(std::ostream& os, const analysis_result& result, output_format format);
void write_aggregates(std::ostream& os, std::span<const aggregate_row> rows,
                      output_format format);
// Rows labelled by measure; `hists` pairs a label with its histogram.
void write_histograms(std::ostream& os,
                      std::span<const std::pair<std::string, std::map<int, std::int64_t>>> hists,
                      output_format format);
void write_plane_ensemble(std::ostream& os, const plane_limit_table& upper,
                          const plane_limit_table& lower, output_format format);
void write_binary_ensemble(std::ostream& os, const binary_strahler_table& table,
                           output_format format);
void write_resample(std::ostream& os, const resample_result& result, output_format format);

// Corpora that ship structures without word forms; text export refuses them.
std::span<const std::string_view> wordless_corpora();

// One sentence per line, forms space-joined, LF endings. Throws
// wordless_corpus for corpora on the exclusion list.
void export_corpus_text(const corpus_source& corpus, std::ostream& os);

} // namespace strahler
