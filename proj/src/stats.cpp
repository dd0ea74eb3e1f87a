#include "strahler/stats.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <optional>
#include <ostream>
#include <random>
#include <thread>

#include <json.hpp>

#include "strahler/errors.hpp"
#include "strahler/limits.hpp"

namespace strahler {

using json = nlohmann::ordered_json;

dep_tree drop_punct(const dep_tree& t) {
    const int n = t.size();
    // map each dropped node to its nearest kept ancestor
    std::vector<int> target(static_cast<size_t>(n), -1);
    std::vector<dep_node> kept;
    kept.reserve(static_cast<size_t>(n));
    for (int v = 0; v < n; ++v) {
        bool drop = t.node(v).relation == "punct" && v != t.root();
        if (!drop) continue;
        target[static_cast<size_t>(v)] = t.parent(v);
    }
    auto resolve = [&](int v) {
        while (target[static_cast<size_t>(v)] >= 0) v = target[static_cast<size_t>(v)];
        return v;
    };
    for (int v = 0; v < n; ++v) {
        if (target[static_cast<size_t>(v)] >= 0) continue;
        dep_node node = t.node(v);
        if (v != t.root()) node.head = t.node(resolve(t.parent(v))).id;
        kept.push_back(std::move(node));
    }
    return dep_tree::validate(std::move(kept));
}

sentence_record analyze_tree(const dep_tree& t, const analyze_config& config) {
    const dep_tree* tree = &t;
    std::optional<dep_tree> stripped;
    if (config.drop_punct) {
        stripped.emplace(drop_punct(t));
        tree = &*stripped;
    }
    const priority_table& table =
        config.table ? *config.table : priority_table::default_table();

    sentence_record rec;
    rec.n = tree->size();
    const limit_pair lim = limits(*tree);
    rec.lower = lim.lower;
    rec.upper = lim.upper;
    rec.s_binary1 = strahler_number(binarize(*tree, binarize_method::grammar(table, config.order)));
    rec.s_binary2 = strahler_number(binarize(*tree, binarize_method::heuristic(config.order)));
    return rec;
}

namespace {

void check_bracket(const sentence_record& rec, const std::string& where) {
    if (rec.lower > rec.s_binary1 || rec.lower > rec.s_binary2 ||
        rec.s_binary1 > rec.upper || rec.s_binary2 > rec.upper)
        throw std::logic_error("limit bracket violated in " + where + ": n=" +
                               std::to_string(rec.n));
}

} // namespace

analysis_result analyze(const std::vector<corpus_source>& corpora,
                        const analyze_config& config) {
    struct task {
        int corpus;
        std::filesystem::path path;
    };
    std::vector<task> tasks;
    analysis_result result;
    for (const auto& corpus : corpora) {
        const int idx = static_cast<int>(result.corpus_names.size());
        result.corpus_names.push_back(corpus.name);
        for (const auto& path : corpus.paths) tasks.push_back({idx, path});
    }

    struct slot {
        std::vector<sentence_record> records;
        ingest_report report;
    };
    std::vector<slot> slots(tasks.size());

    unsigned threads = config.threads > 0 ? static_cast<unsigned>(config.threads)
                                          : std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, std::max<size_t>(tasks.size(), 1));

    std::atomic<size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;

    auto worker = [&] {
        for (;;) {
            const size_t i = next.fetch_add(1);
            if (i >= tasks.size() || failed.load()) return;
            try {
                std::ifstream in(tasks[i].path);
                if (!in) throw io_error("cannot open " + tasks[i].path.string());
                conllu_reader reader(in);
                while (auto e = reader.next()) {
                    if (std::holds_alternative<dep_tree>(*e)) {
                        sentence_record rec =
                            analyze_tree(std::get<dep_tree>(*e), config);
                        rec.corpus = tasks[i].corpus;
                        check_bracket(rec, tasks[i].path.string());
                        slots[i].records.push_back(rec);
                        ++slots[i].report.parsed;
                    } else {
                        slots[i].report.add_skip(std::get<skip_record>(*e).reason);
                    }
                }
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!failed.exchange(true)) error = std::current_exception();
                return;
            }
        }
    };

    std::vector<std::thread> pool;
    for (unsigned i = 1; i < threads; ++i) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    if (failed.load()) std::rethrow_exception(error);

    size_t total = 0;
    for (const auto& s : slots) total += s.records.size();
    result.records.reserve(total);
    for (auto& s : slots) {
        result.records.insert(result.records.end(), s.records.begin(), s.records.end());
        result.report.merge(s.report);
    }
    return result;
}

namespace {

struct accumulator {
    std::int64_t count = 0;
    std::int64_t sum[4] = {0, 0, 0, 0};
    std::int64_t sumsq[4] = {0, 0, 0, 0};

    void add(const sentence_record& rec) {
        const int vals[4] = {rec.upper, rec.lower, rec.s_binary1, rec.s_binary2};
        ++count;
        for (int i = 0; i < 4; ++i) {
            sum[i] += vals[i];
            sumsq[i] += static_cast<std::int64_t>(vals[i]) * vals[i];
        }
    }

    aggregate_row row(std::string key) const {
        aggregate_row r;
        r.key = std::move(key);
        r.count = count;
        double mean[4], std[4];
        for (int i = 0; i < 4; ++i) {
            mean[i] = static_cast<double>(sum[i]) / static_cast<double>(count);
            const double var =
                static_cast<double>(sumsq[i]) / static_cast<double>(count) - mean[i] * mean[i];
            std[i] = var > 0 ? std::sqrt(var) : 0.0;
        }
        r.upper_mean = mean[0];
        r.upper_std = std[0];
        r.lower_mean = mean[1];
        r.lower_std = std[1];
        r.binary1_mean = mean[2];
        r.binary1_std = std[2];
        r.binary2_mean = mean[3];
        r.binary2_std = std[3];
        return r;
    }
};

} // namespace

std::vector<aggregate_row> aggregate(const analysis_result& result, group_by by) {
    if (result.records.empty()) throw empty_input("no records to aggregate");
    std::vector<aggregate_row> rows;
    if (by == group_by::corpus) {
        std::vector<accumulator> acc(result.corpus_names.size());
        for (const auto& rec : result.records) acc[static_cast<size_t>(rec.corpus)].add(rec);
        std::vector<size_t> order(acc.size());
        for (size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
            return result.corpus_names[a] < result.corpus_names[b];
        });
        for (size_t i : order)
            if (acc[i].count > 0) rows.push_back(acc[i].row(result.corpus_names[i]));
    } else {
        std::map<int, accumulator> acc;
        for (const auto& rec : result.records) acc[rec.n].add(rec);
        for (const auto& [n, a] : acc) rows.push_back(a.row(std::to_string(n)));
    }
    return rows;
}

std::map<int, std::int64_t> histogram(std::span<const sentence_record> records, measure m) {
    std::map<int, std::int64_t> hist;
    for (const auto& rec : records) {
        int v = 0;
        switch (m) {
            case measure::upper: v = rec.upper; break;
            case measure::lower: v = rec.lower; break;
            case measure::binary1: v = rec.s_binary1; break;
            case measure::binary2: v = rec.s_binary2; break;
        }
        ++hist[v];
    }
    return hist;
}

std::map<int, std::int64_t> length_histogram(std::span<const sentence_record> records) {
    std::map<int, std::int64_t> hist;
    for (const auto& rec : records) ++hist[rec.n];
    return hist;
}

int histogram_median(const std::map<int, std::int64_t>& hist) {
    std::int64_t total = 0;
    for (const auto& [v, c] : hist) total += c;
    if (total == 0) throw empty_input("median of an empty histogram");
    std::int64_t seen = 0;
    for (const auto& [v, c] : hist) {
        seen += c;
        if (2 * seen > total) return v;
        if (2 * seen == total) {
            // even count: lower median is next value's predecessor; report
            // the lower of the two middles
            return v;
        }
    }
    return hist.rbegin()->first;
}

resample_result resample_binary_ensemble(const std::map<int, std::int64_t>& length_hist,
                                         const binary_strahler_table& table,
                                         std::uint64_t seed) {
    resample_result out;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    double mixture_mean = 0, mixture_second = 0;
    std::int64_t total = 0;
    for (const auto& [n, count] : length_hist) {
        if (count <= 0) continue;
        if (n < 1 || n > table.n_max())
            throw n_max_exceeded("sentence length " + std::to_string(n) +
                                 " beyond ensemble table n_max " + std::to_string(table.n_max()));
        const auto dist = table.distribution(n);
        const big_ratio tot(table.total(n));
        std::vector<std::pair<int, double>> cdf;
        double run = 0;
        double mean_n = 0, second_n = 0;
        for (const auto& [s, c] : dist) {
            const double p = static_cast<double>(big_ratio(c) / tot);
            run += p;
            cdf.emplace_back(s, run);
            mean_n += s * p;
            second_n += static_cast<double>(s) * s * p;
        }
        cdf.back().second = 1.0;
        for (std::int64_t k = 0; k < count; ++k) {
            const double u = unit(rng);
            int value = cdf.back().first;
            for (const auto& [s, upto] : cdf) {
                if (u <= upto) {
                    value = s;
                    break;
                }
            }
            ++out.histogram[value];
        }
        mixture_mean += mean_n * static_cast<double>(count);
        mixture_second += second_n * static_cast<double>(count);
        total += count;
    }
    if (total == 0) throw empty_input("empty length histogram");
    mixture_mean /= static_cast<double>(total);
    mixture_second /= static_cast<double>(total);

    out.total = total;
    std::int64_t sum = 0, sumsq = 0;
    for (const auto& [v, c] : out.histogram) {
        sum += static_cast<std::int64_t>(v) * c;
        sumsq += static_cast<std::int64_t>(v) * v * c;
    }
    out.mean = static_cast<double>(sum) / static_cast<double>(total);
    const double var = static_cast<double>(sumsq) / static_cast<double>(total) - out.mean * out.mean;
    out.stddev = var > 0 ? std::sqrt(var) : 0.0;
    out.exact_mean = mixture_mean;
    // variance of the stratified sample mean: per-stratum variances only
    double mean_var = 0;
    for (const auto& [n, count] : length_hist) {
        if (count <= 0) continue;
        const auto dist = table.distribution(n);
        const big_ratio tot(table.total(n));
        double mean_n = 0, second_n = 0;
        for (const auto& [s, c] : dist) {
            const double p = static_cast<double>(big_ratio(c) / tot);
            mean_n += s * p;
            second_n += static_cast<double>(s) * s * p;
        }
        const double var_n = second_n - mean_n * mean_n;
        mean_var += static_cast<double>(count) * var_n;
    }
    mean_var /= static_cast<double>(total) * static_cast<double>(total);
    out.exact_stddev = mean_var > 0 ? std::sqrt(mean_var) : 0.0;
    return out;
}

namespace {

std::string fixed(double x, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, x);
    return buf;
}

double round2(double x) { return std::round(x * 100.0) / 100.0; }

} // namespace

void write_records(std::ostream& os, const analysis_result& result, output_format format) {
    if (format == output_format::csv) {
        os << "corpus,n,lower,upper,binary1,binary2\n";
        for (const auto& rec : result.records) {
            os << result.corpus_names[static_cast<size_t>(rec.corpus)] << ',' << rec.n << ','
               << rec.lower << ',' << rec.upper << ',' << rec.s_binary1 << ',' << rec.s_binary2
               << '\n';
        }
        return;
    }
    json arr = json::array();
    for (const auto& rec : result.records) {
        arr.push_back({{"corpus", result.corpus_names[static_cast<size_t>(rec.corpus)]},
                       {"n", rec.n},
                       {"lower", rec.lower},
                       {"upper", rec.upper},
                       {"binary1", rec.s_binary1},
                       {"binary2", rec.s_binary2}});
    }
    os << arr.dump(2) << '\n';
}

void write_aggregates(std::ostream& os, std::span<const aggregate_row> rows,
                      output_format format) {
    if (format == output_format::csv) {
        os << "key,count,upper_mean,upper_std,lower_mean,lower_std,"
              "binary1_mean,binary1_std,binary2_mean,binary2_std\n";
        for (const auto& r : rows) {
            os << r.key << ',' << r.count << ',' << fixed(r.upper_mean, 2) << ','
               << fixed(r.upper_std, 2) << ',' << fixed(r.lower_mean, 2) << ','
               << fixed(r.lower_std, 2) << ',' << fixed(r.binary1_mean, 2) << ','
               << fixed(r.binary1_std, 2) << ',' << fixed(r.binary2_mean, 2) << ','
               << fixed(r.binary2_std, 2) << '\n';
        }
        return;
    }
    json arr = json::array();
    for (const auto& r : rows) {
        arr.push_back({{"key", r.key},
                       {"count", r.count},
                       {"upper", {{"mean", round2(r.upper_mean)}, {"std", round2(r.upper_std)}}},
                       {"lower", {{"mean", round2(r.lower_mean)}, {"std", round2(r.lower_std)}}},
                       {"binary1",
                        {{"mean", round2(r.binary1_mean)}, {"std", round2(r.binary1_std)}}},
                       {"binary2",
                        {{"mean", round2(r.binary2_mean)}, {"std", round2(r.binary2_std)}}}});
    }
    os << arr.dump(2) << '\n';
}

void write_histograms(std::ostream& os,
                      std::span<const std::pair<std::string, std::map<int, std::int64_t>>> hists,
                      output_format format) {
    if (format == output_format::csv) {
        os << "measure,value,count\n";
        for (const auto& [label, hist] : hists)
            for (const auto& [v, c] : hist) os << label << ',' << v << ',' << c << '\n';
        return;
    }
    json obj = json::object();
    for (const auto& [label, hist] : hists) {
        json h = json::object();
        for (const auto& [v, c] : hist) h[std::to_string(v)] = c;
        obj[label] = std::move(h);
    }
    os << obj.dump(2) << '\n';
}

void write_plane_ensemble(std::ostream& os, const plane_limit_table& upper,
                          const plane_limit_table& lower, output_format format) {
    const int n_max = std::min(upper.n_max(), lower.n_max());
    if (format == output_format::csv) {
        os << "n,total,upper_average,lower_average\n";
        for (int n = 1; n <= n_max; ++n) {
            os << n << ',' << upper.total(n).str() << ','
               << fixed(static_cast<double>(upper.average(n)), 6) << ','
               << fixed(static_cast<double>(lower.average(n)), 6) << '\n';
        }
        return;
    }
    json arr = json::array();
    for (int n = 1; n <= n_max; ++n) {
        json up = json::object(), lo = json::object();
        for (const auto& [p, c] : upper.counts(n)) up[std::to_string(p)] = c.str();
        for (const auto& [p, c] : lower.counts(n)) lo[std::to_string(p)] = c.str();
        arr.push_back({{"n", n},
                       {"total", upper.total(n).str()},
                       {"upper_average", static_cast<double>(upper.average(n))},
                       {"lower_average", static_cast<double>(lower.average(n))},
                       {"upper_counts", std::move(up)},
                       {"lower_counts", std::move(lo)}});
    }
    os << arr.dump(2) << '\n';
}

void write_binary_ensemble(std::ostream& os, const binary_strahler_table& table,
                           output_format format) {
    if (format == output_format::csv) {
        os << "n,total,mean,lower_limit,upper_limit\n";
        for (int n = 1; n <= table.n_max(); ++n) {
            const limit_pair lim = binary_ensemble_limits(n);
            os << n << ',' << table.total(n).str() << ','
               << fixed(static_cast<double>(table.mean(n)), 6) << ',' << lim.lower << ','
               << lim.upper << '\n';
        }
        return;
    }
    json arr = json::array();
    for (int n = 1; n <= table.n_max(); ++n) {
        const limit_pair lim = binary_ensemble_limits(n);
        json dist = json::object();
        for (const auto& [s, c] : table.distribution(n)) dist[std::to_string(s)] = c.str();
        arr.push_back({{"n", n},
                       {"total", table.total(n).str()},
                       {"mean", static_cast<double>(table.mean(n))},
                       {"lower_limit", lim.lower},
                       {"upper_limit", lim.upper},
                       {"distribution", std::move(dist)}});
    }
    os << arr.dump(2) << '\n';
}

void write_resample(std::ostream& os, const resample_result& result, output_format format) {
    if (format == output_format::csv) {
        os << "value,count\n";
        for (const auto& [v, c] : result.histogram) os << v << ',' << c << '\n';
        return;
    }
    json hist = json::object();
    for (const auto& [v, c] : result.histogram) hist[std::to_string(v)] = c;
    json obj = {{"total", result.total},
                {"mean", result.mean},
                {"stddev", result.stddev},
                {"exact_mean", result.exact_mean},
                {"exact_mean_stddev", result.exact_stddev},
                {"histogram", std::move(hist)}};
    os << obj.dump(2) << '\n';
}

std::span<const std::string_view> wordless_corpora() {
    static constexpr std::string_view names[] = {
        "UD_Hindi_English-HIENCS", "UD_Arabic-NYUAD",      "UD_Japanese-BCCWJ",
        "UD_English-ESL",          "UD_French-FTB",        "UD_English-GUMReddit",
        "UD_Mbya_Guarani-Dooley",
    };
    return names;
}

void export_corpus_text(const corpus_source& corpus, std::ostream& os) {
    for (std::string_view name : wordless_corpora()) {
        if (corpus.name == name)
            throw wordless_corpus(corpus.name + " provides structures without words");
    }
    for (const auto& path : corpus.paths) {
        std::ifstream in(path);
        if (!in) throw io_error("cannot open " + path.string());
        conllu_reader reader(in);
        while (auto e = reader.next()) {
            if (!std::holds_alternative<dep_tree>(*e)) continue;
            const dep_tree& t = std::get<dep_tree>(*e);
            for (int v = 0; v < t.size(); ++v) {
                if (v > 0) os << ' ';
                os << t.node(v).form;
            }
            os << '\n';
        }
    }
}

} // namespace strahler
