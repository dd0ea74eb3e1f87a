#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "strahler/errors.hpp"
#include "strahler/shift_reduce.hpp"
#include "strahler/stats.hpp"

namespace {

using namespace strahler;

struct global_options {
    std::string ud_root;
    std::string priority_table_file;
    bool drop_punct = false;
    std::string binary2 = "near-first";
    int n_max = 300;
    std::uint64_t seed = 42;
    std::string format = "csv";
    std::string out = "-";
    int threads = 0;
};

output_format parse_format(const std::string& f) {
    return f == "json" ? output_format::json : output_format::csv;
}

binary2_order parse_order(const std::string& o) {
    return o == "far-first" ? binary2_order::far_first : binary2_order::near_first;
}

// stdout unless --out names a file
class output_sink {
public:
    explicit output_sink(const std::string& path) {
        if (path != "-") {
            file_.open(path, std::ios::binary);
            if (!file_) throw io_error("cannot open output file: " + path);
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

analyze_config make_config(const global_options& g, priority_table& table_storage) {
    analyze_config cfg;
    if (!g.priority_table_file.empty()) {
        table_storage = priority_table::load(g.priority_table_file);
        cfg.table = &table_storage;
    }
    cfg.order = parse_order(g.binary2);
    cfg.drop_punct = g.drop_punct;
    cfg.threads = g.threads;
    return cfg;
}

std::vector<corpus_source> require_corpora(const global_options& g) {
    if (g.ud_root.empty()) throw io_error("--ud-root is required for this command");
    auto corpora = scan_corpus(g.ud_root);
    if (corpora.empty()) throw io_error("no UD_* corpora under " + g.ud_root);
    return corpora;
}

void print_report(const ingest_report& report) {
    std::cerr << "parsed " << report.parsed << " sentences, skipped " << report.skipped << '\n';
    for (const auto& [reason, count] : report.skip_reasons)
        std::cerr << "  skip " << reason << ": " << count << '\n';
}

int run_analyze(const global_options& g, const std::string& by, const std::string& emit) {
    priority_table table_storage;
    const analyze_config cfg = make_config(g, table_storage);
    auto corpora = require_corpora(g);
    std::cerr << "analyzing " << corpora.size() << " corpora\n";
    auto result = analyze(corpora, cfg);
    print_report(result.report);

    output_sink sink(g.out);
    const output_format format = parse_format(g.format);
    if (emit == "records") {
        write_records(sink.stream(), result, format);
    } else if (emit == "histograms") {
        std::vector<std::pair<std::string, std::map<int, std::int64_t>>> hists;
        for (measure m : {measure::upper, measure::lower, measure::binary1, measure::binary2}) {
            const char* names[] = {"upper", "lower", "binary1", "binary2"};
            hists.emplace_back(names[static_cast<int>(m)], histogram(result.records, m));
        }
        write_histograms(sink.stream(), hists, format);
    } else {
        auto rows = aggregate(result, by == "n" ? group_by::length : group_by::corpus);
        write_aggregates(sink.stream(), rows, format);
    }
    return 0;
}

int run_limits(const global_options& g, const std::vector<std::string>& files) {
    priority_table table_storage;
    const analyze_config cfg = make_config(g, table_storage);
    output_sink sink(g.out);
    std::ostream& os = sink.stream();
    const bool json = parse_format(g.format) == output_format::json;
    if (!json) os << "source,sentence,n,lower,upper,binary1,binary2\n";
    std::ostringstream json_rows;
    bool first = true;

    auto process = [&](std::istream& in, const std::string& source) {
        conllu_reader reader(in);
        while (auto e = reader.next()) {
            if (std::holds_alternative<skip_record>(*e)) {
                const auto& skip = std::get<skip_record>(*e);
                std::cerr << source << ": sentence " << skip.index << " skipped ("
                          << skip.reason << ")\n";
                continue;
            }
            const sentence_record rec = analyze_tree(std::get<dep_tree>(*e), cfg);
            if (json) {
                json_rows << (first ? "" : ",\n") << "  {\"source\": \"" << source
                          << "\", \"sentence\": " << reader.sentences_seen()
                          << ", \"n\": " << rec.n << ", \"lower\": " << rec.lower
                          << ", \"upper\": " << rec.upper << ", \"binary1\": " << rec.s_binary1
                          << ", \"binary2\": " << rec.s_binary2 << '}';
                first = false;
            } else {
                os << source << ',' << reader.sentences_seen() << ',' << rec.n << ','
                   << rec.lower << ',' << rec.upper << ',' << rec.s_binary1 << ','
                   << rec.s_binary2 << '\n';
            }
        }
    };

    if (files.empty()) {
        process(std::cin, "stdin");
    } else {
        for (const auto& f : files) {
            std::ifstream in(f);
            if (!in) throw io_error("cannot open " + f);
            process(in, f);
        }
    }
    if (json) os << "[\n" << json_rows.str() << "\n]\n";
    return 0;
}

int run_ensemble(const global_options& g, const std::string& kind) {
    output_sink sink(g.out);
    const output_format format = parse_format(g.format);
    if (kind == "r2") {
        binary_strahler_table table(g.n_max);
        write_binary_ensemble(sink.stream(), table, format);
    } else {
        std::cerr << "building limit tables to n=" << g.n_max << '\n';
        plane_limit_table upper(g.n_max, limit_mode::upper);
        plane_limit_table lower(g.n_max, limit_mode::lower);
        write_plane_ensemble(sink.stream(), upper, lower, format);
    }
    return 0;
}

int run_shiftreduce(const global_options& g, const std::string& literal,
                    const std::string& order_name, std::uint64_t max_inner) {
    const bin_tree tree = parse_tree_literal(literal);
    traversal_order order;
    if (order_name == "left") {
        order = traversal_order(tree.size());
    } else if (order_name == "right") {
        order = traversal_order(tree.size());
        for (int v = 0; v < tree.size(); ++v)
            if (!tree.is_leaf(v)) order.set_right_first(v, true);
    } else {
        order = sethi_ullman_order(tree);
    }
    const eval_trace trace = evaluate(tree, order);

    output_sink sink(g.out);
    std::ostream& os = sink.stream();
    if (parse_format(g.format) == output_format::json) {
        os << "{\n  \"order\": \"" << order_name << "\",\n  \"steps\": [";
        for (size_t i = 0; i < trace.steps.size(); ++i) {
            os << (i ? ", " : "") << "{\"op\": \""
               << (trace.steps[i].op == eval_step::op_t::shift ? "shift" : "reduce")
               << "\", \"depth\": " << trace.steps[i].stack_depth_after << '}';
        }
        os << "],\n  \"max_depth\": " << trace.max_depth
           << ",\n  \"strahler\": " << strahler_number(tree) << ",\n  \"min_depth\": "
           << min_stack_depth(tree, max_inner) << "\n}\n";
    } else {
        os << "op,depth\n";
        for (const auto& step : trace.steps)
            os << (step.op == eval_step::op_t::shift ? "shift" : "reduce") << ','
               << step.stack_depth_after << '\n';
        std::cerr << "order=" << order_name << " max_depth=" << trace.max_depth
                  << " strahler=" << strahler_number(tree)
                  << " min_depth=" << min_stack_depth(tree, max_inner) << '\n';
    }
    return 0;
}

std::map<int, std::int64_t> load_length_histogram(const std::string& file) {
    std::ifstream in(file);
    if (!in) throw io_error("cannot open lengths file: " + file);
    std::map<int, std::int64_t> hist;
    std::string line;
    while (std::getline(in, line)) {
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
        std::istringstream ls(line);
        int n = 0;
        char comma = 0;
        std::int64_t count = 0;
        if (!(ls >> n >> comma >> count) || comma != ',')
            throw io_error("lengths file: expected 'n,count' lines");
        hist[n] += count;
    }
    return hist;
}

int run_resample(const global_options& g, const std::string& lengths_file) {
    std::map<int, std::int64_t> lengths;
    if (!lengths_file.empty()) {
        lengths = load_length_histogram(lengths_file);
    } else {
        priority_table table_storage;
        const analyze_config cfg = make_config(g, table_storage);
        auto result = analyze(require_corpora(g), cfg);
        print_report(result.report);
        lengths = length_histogram(result.records);
    }
    if (lengths.empty()) throw empty_input("no sentence lengths to resample");
    const int longest = lengths.rbegin()->first;
    if (longest > g.n_max)
        throw n_max_exceeded("longest sentence has " + std::to_string(longest) +
                             " words; raise --n-max (currently " + std::to_string(g.n_max) +
                             ")");
    std::cerr << "building ensemble table to n=" << longest << '\n';
    binary_strahler_table table(longest);
    const resample_result result = resample_binary_ensemble(lengths, table, g.seed);
    std::cerr << "sampled mean " << result.mean << " +- " << result.stddev
              << " (exact mixture mean " << result.exact_mean << ")\n";
    output_sink sink(g.out);
    write_resample(sink.stream(), result, parse_format(g.format));
    return 0;
}

int run_export_text(const global_options& g, const std::string& corpus_name) {
    auto corpora = require_corpora(g);
    for (const auto& corpus : corpora) {
        if (corpus.name != corpus_name) continue;
        output_sink sink(g.out);
        export_corpus_text(corpus, sink.stream());
        return 0;
    }
    throw io_error("corpus not found under --ud-root: " + corpus_name);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Strahler numbers of dependency trees: binarization, exact "
                 "limits, random-tree baselines, and shift-reduce stack depths"};
    app.require_subcommand(1);
    app.set_config("--config", "", "key=value configuration file; flags take precedence");

    global_options g;
    app.add_option("--ud-root", g.ud_root, "directory containing UD_* treebank directories");
    app.add_option("--priority-table", g.priority_table_file,
                   "relation priority file (label<TAB>rank) for the grammar binarization");
    app.add_flag("--drop-punct", g.drop_punct, "remove punct dependents before analysis");
    app.add_option("--binary2-order", g.binary2,
                   "attachment order within one side of the head")
        ->check(CLI::IsMember({"near-first", "far-first"}));
    app.add_option("--n-max", g.n_max, "largest tree size for ensemble tables")
        ->check(CLI::PositiveNumber);
    app.add_option("--seed", g.seed, "random seed for resampling");
    app.add_option("--format", g.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--out", g.out, "output path, '-' for stdout");
    app.add_option("--threads", g.threads, "worker threads (0 = all cores)");

    std::string by = "corpus", emit = "aggregates";
    auto* analyze_cmd =
        app.add_subcommand("analyze", "per-sentence measures over corpora, aggregated");
    analyze_cmd->add_option("--by", by, "grouping key")->check(CLI::IsMember({"corpus", "n"}));
    analyze_cmd->add_option("--emit", emit, "what to write")
        ->check(CLI::IsMember({"aggregates", "records", "histograms"}));

    std::vector<std::string> limit_files;
    auto* limits_cmd =
        app.add_subcommand("limits", "per-sentence limits and Strahler numbers for CoNLL-U input");
    limits_cmd->add_option("files", limit_files, "CoNLL-U files (stdin if omitted)");

    std::string kind = "r2";
    auto* ensemble_cmd =
        app.add_subcommand("ensemble", "exact random-tree tables up to --n-max");
    ensemble_cmd->add_option("--kind", kind, "r2: binary trees by leaves; r: plane trees by nodes")
        ->check(CLI::IsMember({"r2", "r"}));

    std::string literal, order_name = "optimal";
    std::uint64_t max_inner = 20;
    auto* sr_cmd = app.add_subcommand("shiftreduce",
                                      "evaluate a tree literal like ((1,2),(3,4)) on a stack");
    sr_cmd->add_option("tree", literal, "parenthesized tree literal")->required();
    sr_cmd->add_option("--order", order_name, "traversal order")
        ->check(CLI::IsMember({"optimal", "left", "right"}));
    sr_cmd->add_option("--max-inner", max_inner, "cap on inner nodes for the exhaustive minimum");

    std::string lengths_file;
    auto* resample_cmd = app.add_subcommand(
        "resample", "sample Strahler values from the exact binary-tree ensemble, "
                    "lengths drawn from a corpus or a CSV histogram");
    resample_cmd->add_option("--lengths", lengths_file, "length histogram file (n,count lines)");

    std::string corpus_name;
    auto* export_cmd =
        app.add_subcommand("export-text", "write corpus sentences as plain text, one per line");
    export_cmd->add_option("corpus", corpus_name, "corpus name, e.g. UD_English-ParTUT")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (analyze_cmd->parsed()) return run_analyze(g, by, emit);
        if (limits_cmd->parsed()) return run_limits(g, limit_files);
        if (ensemble_cmd->parsed()) return run_ensemble(g, kind);
        if (sr_cmd->parsed()) return run_shiftreduce(g, literal, order_name, max_inner);
        if (resample_cmd->parsed()) return run_resample(g, lengths_file);
        if (export_cmd->parsed()) return run_export_text(g, corpus_name);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
