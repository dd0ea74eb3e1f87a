#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "strahler/errors.hpp"
#include "strahler/stats.hpp"
#include "support/enumerate.hpp"

using namespace strahler;
using namespace strahler::testing;

namespace {

const std::filesystem::path data_dir = STRAHLER_TEST_DATA_DIR;

analysis_result toy_analysis(bool drop = false) {
    analyze_config cfg;
    cfg.drop_punct = drop;
    cfg.threads = 2;
    return analyze(scan_corpus(data_dir / "toy-ud"), cfg);
}

} // namespace

TEST_CASE("toy corpus measurements") {
    const analysis_result result = toy_analysis();
    CHECK(result.report.parsed == 9);
    CHECK(result.report.skipped == 2);
    REQUIRE(result.records.size() == 9);

    for (const auto& rec : result.records) {
        CHECK(rec.lower <= rec.s_binary1);
        CHECK(rec.lower <= rec.s_binary2);
        CHECK(rec.s_binary1 <= rec.upper);
        CHECK(rec.s_binary2 <= rec.upper);
        if (rec.n == 1) {
            CHECK(rec.lower == 1);
            CHECK(rec.upper == 1);
            CHECK(rec.s_binary1 == 1);
            CHECK(rec.s_binary2 == 1);
        }
        if (rec.n == 2) {
            CHECK(rec.lower == 2);
            CHECK(rec.upper == 2);
            CHECK(rec.s_binary1 == 2);
            CHECK(rec.s_binary2 == 2);
        }
    }
    // dev file sorts first; its two good sentences lead
    CHECK(result.records[0].n == 3);
    CHECK(result.records[1].n == 4);
    // the clausal seven-word sentence spans its bracket
    bool found = false;
    for (const auto& rec : result.records)
        if (rec.n == 7) {
            found = true;
            CHECK(rec.lower == 2);
            CHECK(rec.upper == 3);
            CHECK(rec.s_binary2 == 3);
        }
    CHECK(found);
}

TEST_CASE("dropping punctuation shrinks trees") {
    const analysis_result with = toy_analysis(false);
    const analysis_result without = toy_analysis(true);
    auto count_n = [](const analysis_result& r, int n) {
        int c = 0;
        for (const auto& rec : r.records) c += rec.n == n;
        return c;
    };
    CHECK(count_n(with, 4) == 2);      // ts-7 and td-4
    CHECK(count_n(without, 4) == 1);   // ts-7 loses its two punct tokens
    CHECK(count_n(without, 2) == 2);
}

TEST_CASE("punct dependents reattach their children") {
    // 3 (punct) carries a child 4; dropping 3 hands 4 to the root
    const dep_tree t =
        tree_from_heads({0, 1, 1, 3}, {"root", "obj", "punct", "dep"}, {"a", "b", ",", "c"});
    const dep_tree pruned = drop_punct(t);
    CHECK(pruned.size() == 3);
    CHECK(pruned.node(pruned.root()).form == "a");
    bool c_at_root = false;
    for (int v : pruned.children(pruned.root()))
        if (pruned.node(v).form == "c") c_at_root = true;
    CHECK(c_at_root);
}

TEST_CASE("aggregate means and population deviations") {
    analysis_result fake;
    fake.corpus_names = {"X"};
    for (int v : {3, 3, 4}) {
        sentence_record rec;
        rec.corpus = 0;
        rec.n = 5;
        rec.lower = rec.upper = rec.s_binary1 = rec.s_binary2 = v;
        fake.records.push_back(rec);
    }
    const auto rows = aggregate(fake, group_by::corpus);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].count == 3);
    CHECK(rows[0].upper_mean == doctest::Approx(3.3333).epsilon(1e-3));
    CHECK(rows[0].upper_std == doctest::Approx(0.4714).epsilon(1e-3));

    analysis_result one;
    one.corpus_names = {"Y"};
    sentence_record rec;
    rec.corpus = 0;
    rec.n = 2;
    rec.lower = rec.upper = rec.s_binary1 = rec.s_binary2 = 2;
    one.records.push_back(rec);
    const auto single = aggregate(one, group_by::corpus);
    CHECK(single[0].upper_mean == 2.0);
    CHECK(single[0].upper_std == 0.0);

    analysis_result empty;
    CHECK_THROWS_AS(aggregate(empty, group_by::corpus), empty_input);
}

TEST_CASE("the six frequent five-node shapes average to the known limits") {
    analysis_result result;
    result.corpus_names = {"shapes"};
    const std::vector<std::vector<int>> shapes = {
        {0, 1, 1, 1, 1}, {0, 1, 1, 1, 2}, {0, 1, 1, 1, 3},
        {0, 1, 1, 1, 4}, {0, 1, 1, 2, 2}, {0, 1, 1, 3, 3},
    };
    analyze_config cfg;
    for (const auto& heads : shapes) {
        sentence_record rec = analyze_tree(tree_from_heads(heads), cfg);
        rec.corpus = 0;
        result.records.push_back(rec);
    }
    const auto rows = aggregate(result, group_by::length);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].key == "5");
    CHECK(rows[0].upper_mean == doctest::Approx(2.8333).epsilon(1e-4));
    CHECK(rows[0].lower_mean == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("histograms and medians") {
    CHECK(histogram({}, measure::upper).empty());

    std::vector<sentence_record> records;
    for (int v : {2, 3, 3, 4}) {
        sentence_record rec;
        rec.upper = v;
        records.push_back(rec);
    }
    const auto hist = histogram(records, measure::upper);
    CHECK(hist == std::map<int, std::int64_t>{{2, 1}, {3, 2}, {4, 1}});
    CHECK(histogram_median(hist) == 3);
    CHECK(histogram_median({{1, 5}, {2, 5}}) == 1);   // lower middle on ties
    CHECK(histogram_median({{4, 9}}) == 4);
}

TEST_CASE("resampling one-word sentences is degenerate") {
    binary_strahler_table table(4);
    const auto result = resample_binary_ensemble({{1, 50}}, table, 1);
    CHECK(result.histogram == std::map<int, std::int64_t>{{1, 50}});
    CHECK(result.mean == 1.0);
    CHECK(result.exact_mean == 1.0);
}

TEST_CASE("resampling follows the exact distribution") {
    binary_strahler_table table(8);
    const auto result = resample_binary_ensemble({{4, 1000}}, table, 7);
    // exact distribution at n=4 is {2: 4/5, 3: 1/5}
    CHECK(result.exact_mean == doctest::Approx(2.2).epsilon(1e-9));
    const std::int64_t threes = result.histogram.count(3) ? result.histogram.at(3) : 0;
    CHECK(threes > 200 - 38);   // 3 sigma of Binomial(1000, 0.2)
    CHECK(threes < 200 + 38);
    CHECK(std::abs(result.mean - result.exact_mean) <= 3 * result.exact_stddev);

    const auto again = resample_binary_ensemble({{4, 1000}}, table, 7);
    CHECK(again.histogram == result.histogram);

    CHECK_THROWS_AS(resample_binary_ensemble({{9, 1}}, table, 7), n_max_exceeded);
    CHECK_THROWS_AS(resample_binary_ensemble({}, table, 7), empty_input);
}

TEST_CASE("csv exports are stable") {
    std::ostringstream empty;
    write_aggregates(empty, {}, output_format::csv);
    CHECK(empty.str() ==
          "key,count,upper_mean,upper_std,lower_mean,lower_std,"
          "binary1_mean,binary1_std,binary2_mean,binary2_std\n");

    aggregate_row row;
    row.key = "X";
    row.count = 3;
    row.upper_mean = 3.3333;
    row.upper_std = 0.4714;
    row.lower_mean = 2.0;
    row.binary1_mean = 3.2111;
    row.binary2_mean = 3.105;
    std::ostringstream os;
    write_aggregates(os, std::vector<aggregate_row>{row}, output_format::csv);
    const std::string expected_prefix =
        "key,count,upper_mean,upper_std,lower_mean,lower_std,"
        "binary1_mean,binary1_std,binary2_mean,binary2_std\n"
        "X,3,3.33,0.47,2.00,0.00,3.21,0.00,3.10,0.00\n";
    CHECK(os.str() == expected_prefix);
}

TEST_CASE("record export round-trips through json") {
    analysis_result result;
    result.corpus_names = {"C"};
    sentence_record rec;
    rec.corpus = 0;
    rec.n = 7;
    rec.lower = 2;
    rec.upper = 3;
    rec.s_binary1 = 3;
    rec.s_binary2 = 3;
    result.records.push_back(rec);

    std::ostringstream csv;
    write_records(csv, result, output_format::csv);
    CHECK(csv.str() == "corpus,n,lower,upper,binary1,binary2\nC,7,2,3,3,3\n");

    std::ostringstream js;
    write_records(js, result, output_format::json);
    const auto parsed = nlohmann::json::parse(js.str());
    REQUIRE(parsed.size() == 1);
    CHECK(parsed[0]["corpus"] == "C");
    CHECK(parsed[0]["n"] == 7);
    CHECK(parsed[0]["lower"] == 2);
    CHECK(parsed[0]["upper"] == 3);
}

TEST_CASE("aggregate json rounds to two decimals and parses back") {
    aggregate_row row;
    row.key = "K";
    row.count = 2;
    row.upper_mean = 3.557;
    row.upper_std = 0.834;
    std::ostringstream os;
    write_aggregates(os, std::vector<aggregate_row>{row}, output_format::json);
    const auto parsed = nlohmann::json::parse(os.str());
    CHECK(parsed[0]["upper"]["mean"].get<double>() == doctest::Approx(3.56).epsilon(1e-9));
    CHECK(parsed[0]["upper"]["std"].get<double>() == doctest::Approx(0.83).epsilon(1e-9));
}

TEST_CASE("text export writes one sentence per line") {
    const auto dir = std::filesystem::temp_directory_path() / "strahler-export-test";
    std::filesystem::create_directories(dir);
    {
        std::ofstream out(dir / "mini.conllu", std::ios::binary);
        out << "1\tIt\t_\t_\t_\t_\t3\texpl\t_\t_\n"
               "2\twas\t_\t_\t_\t_\t3\tcop\t_\t_\n"
               "3\teasy\t_\t_\t_\t_\t0\troot\t_\t_\n\n";
    }
    corpus_source corpus;
    corpus.name = "UD_Mini-Test";
    corpus.paths = {dir / "mini.conllu"};

    std::ostringstream os;
    export_corpus_text(corpus, os);
    CHECK(os.str() == "It was easy\n");

    corpus_source empty;
    empty.name = "UD_Empty-Test";
    std::ostringstream os2;
    export_corpus_text(empty, os2);
    CHECK(os2.str().empty());

    corpus_source wordless;
    wordless.name = "UD_French-FTB";
    std::ostringstream os3;
    CHECK_THROWS_AS(export_corpus_text(wordless, os3), wordless_corpus);
}
