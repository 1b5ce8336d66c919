#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "augmentor/benchmark.hpp"
#include "augmentor/error.hpp"
#include "augmentor/geometric_series.hpp"
#include "augmentor/manifest.hpp"
#include "augmentor/nested_cv.hpp"
#include "augmentor/permutation_test.hpp"
#include "augmentor/report.hpp"
#include "augmentor/rng.hpp"
#include "augmentor/tabular_io.hpp"

#include "support/helpers.hpp"

using namespace augmentor;
using testsupport::outcome_col;

namespace {

using Pairs = std::vector<std::pair<double, double>>;

// Seven paired scores: model of interest first, comparator second.
const Pairs kAugmentedVsBaseline = {
    {0.7668, 0.7161}, {0.7780, 0.7171}, {0.8722, 0.7392}, {0.7451, 0.7143},
    {0.7341, 0.5125}, {0.7974, 0.7400}, {0.6700, 0.5584},
};

const Pairs kAugmentedVsResampled = {
    {0.7668, 0.6477}, {0.7780, 0.7077}, {0.8722, 0.8291}, {0.7451, 0.6729},
    {0.7341, 0.6116}, {0.7974, 0.7299}, {0.6700, 0.6914},
};

const Pairs kDiversityVsResampled = {
    {0.0023, 0.0013}, {0.0000, 0.0008}, {0.0061, 0.0019}, {0.0017, 0.0008},
    {0.0883, 0.0004}, {0.1177, 0.0002}, {0.0000, 0.0003},
};

} // namespace

TEST_CASE("a 1.5 growth base reproduces the reference schedule") {
    AugmentationSeries s = series_from_base(1.5);
    REQUIRE(s.sizes.size() == 30);
    CHECK(s.b == 1.5);
    // hand-computed ceil(1.5^(i+5))
    CHECK(s.sizes[0] == 8);
    CHECK(s.sizes[1] == 12);
    CHECK(s.sizes[2] == 18);
    CHECK(s.sizes[3] == 26);
    CHECK(s.sizes[4] == 39);
    CHECK(s.sizes[10] == 438);
    CHECK(s.sizes[15] == 3326);
    CHECK(s.sizes[20] == 25252);
    CHECK(s.sizes[29] == 970740);
    CHECK(std::is_sorted(s.sizes.begin(), s.sizes.end()));
    CHECK_THROWS_AS(series_from_base(1.0), DataError);
    CHECK_THROWS_AS(series_from_base(0.5), DataError);
}

TEST_CASE("drawn schedules are deterministic in the seed") {
    AugmentationSeries a = augmentation_series(7);
    AugmentationSeries b = augmentation_series(7);
    CHECK(a.b == b.b);
    CHECK(a.sizes == b.sizes);
    AugmentationSeries c = augmentation_series(8);
    CHECK(a.b != c.b);
    CHECK(a.sizes == series_from_base(a.b).sizes);  // the draw only picks b
}

TEST_CASE("the randomized growth base stays tight around 1.5") {
    // 1000 independent draws: every base within six standard deviations,
    // and the top-end size concentrated near the fixed-base value of 970740
    std::size_t in_band = 0;
    double sum_final = 0.0;
    std::vector<double> finals;
    for (std::uint64_t i = 0; i < 1000; ++i) {
        AugmentationSeries s = augmentation_series(i);
        REQUIRE(s.sizes.size() == 30);
        REQUIRE(std::is_sorted(s.sizes.begin(), s.sizes.end()));
        CHECK(s.b > 1.47);
        CHECK(s.b < 1.53);
        double fin = static_cast<double>(s.sizes.back());
        finals.push_back(fin);
        sum_final += fin;
        if (fin >= 0.8e6 && fin <= 1.2e6) ++in_band;
    }
    double mean = sum_final / 1000.0;
    std::nth_element(finals.begin(), finals.begin() + 500, finals.end());
    double median = finals[500];
    CHECK(mean > 0.8e6);
    CHECK(mean < 1.2e6);
    CHECK(median > 0.8e6);
    CHECK(median < 1.2e6);
    CHECK(in_band >= 850);  // ~92.6% expected from the 0.005 spread
}

TEST_CASE("strictly better paired scores leave only the identity in the tail") {
    PermutationTestResult r = exact_permutation_test(kAugmentedVsBaseline, Tail::greater);
    CHECK(r.enumerated == 128);
    CHECK(r.favorable == 1);
    CHECK(r.p_value == 1.0 / 128.0);
    double mean = 0.0;
    for (auto [a, b] : kAugmentedVsBaseline) mean += (a - b) / 7.0;
    CHECK(r.observed_mean_diff == doctest::Approx(mean).epsilon(1e-12));
    CHECK(r.tail == Tail::greater);

    for (std::size_t k = 3; k <= 10; ++k) {
        Pairs pairs;
        for (std::size_t i = 0; i < k; ++i)
            pairs.push_back({1.0 + static_cast<double>(i), 0.5});
        PermutationTestResult p = exact_permutation_test(pairs, Tail::greater);
        CHECK(p.favorable == 1);
        CHECK(p.p_value == 1.0 / std::pow(2.0, static_cast<double>(k)));
    }
}

TEST_CASE("a single adverse pair admits exactly one sign flip") {
    // only one comparator wins its pairing, by less than every other margin,
    // so the identity and that lone flip are the only favorable assignments
    PermutationTestResult r = exact_permutation_test(kAugmentedVsResampled, Tail::greater);
    CHECK(r.enumerated == 128);
    CHECK(r.favorable == 2);
    CHECK(r.p_value == 2.0 / 128.0);
}

TEST_CASE("near-cancelling pairs enumerate their full favorable set") {
    // {} , {-8e-4}, {-3e-4}, both negatives, and the two three-element
    // subsets whose positives do not cover the negatives: six in total
    PermutationTestResult r = exact_permutation_test(kDiversityVsResampled, Tail::greater);
    CHECK(r.enumerated == 128);
    CHECK(r.favorable == 6);
    CHECK(r.p_value == 6.0 / 128.0);
}

TEST_CASE("opposite tails overlap on ties") {
    PermutationTestResult g = exact_permutation_test(kAugmentedVsResampled, Tail::greater);
    PermutationTestResult l = exact_permutation_test(kAugmentedVsResampled, Tail::less);
    CHECK(g.p_value + l.p_value > 1.0);  // the identity sits in both tails
    CHECK(l.favorable + g.favorable >= 129);
}

TEST_CASE("exact enumeration refuses oversized inputs") {
    Pairs pairs;
    for (int i = 0; i < 21; ++i) pairs.push_back({1.0, 0.0});
    try {
        exact_permutation_test(pairs, Tail::greater);
        FAIL("expected a refusal");
    } catch (const DataError& e) {
        CHECK(std::string(e.what()).find("Monte Carlo") != std::string::npos);
    }
    CHECK_THROWS_AS(exact_permutation_test({}, Tail::greater), DataError);
    CHECK_THROWS_AS(mc_permutation_test({}, Tail::greater, 100, 1), DataError);
}

TEST_CASE("the sampled test agrees with full enumeration") {
    PermutationTestResult exact = exact_permutation_test(kAugmentedVsResampled, Tail::greater);
    PermutationTestResult mc = mc_permutation_test(kAugmentedVsResampled, Tail::greater, 200000, 5);
    CHECK(std::abs(mc.p_value - exact.p_value) < 0.002);
    PermutationTestResult again = mc_permutation_test(kAugmentedVsResampled, Tail::greater, 200000, 5);
    CHECK(mc.p_value == again.p_value);
    CHECK(mc.enumerated == 200001);  // the identity assignment always counts
    CHECK(mc.favorable >= 1);

    Pairs wide;
    for (int i = 0; i < 25; ++i) wide.push_back({2.0 + i, 1.0});
    PermutationTestResult p = mc_permutation_test(wide, Tail::greater, 999, 9);
    CHECK(p.p_value >= 1.0 / 1000.0);
    CHECK(p.p_value < 0.05);
}

TEST_CASE("ranking by the true log-odds lands near the design ceiling") {
    BenchmarkSpec spec;
    CHECK(benchmark_bayes_auc(spec, 400000, 1) == doctest::Approx(0.85).epsilon(0.012));
    CHECK(benchmark_bayes_auc(spec, 400000, 2) == doctest::Approx(0.85).epsilon(0.012));
}

TEST_CASE("the population honors its size and schema") {
    BenchmarkSpec spec;
    spec.rows = 777;
    Dataset ds = benchmark_population(spec, 4);
    CHECK(ds.rows() == 777);
    REQUIRE(ds.schema().size() == 9);
    std::size_t numerics = 0, categoricals = 0;
    for (const ColumnSpec& c : ds.schema().columns()) {
        if (c.kind == ColumnKind::numeric) ++numerics;
        if (c.kind == ColumnKind::categorical) {
            ++categoricals;
            CHECK(c.levels == std::vector<std::string>{"a", "b", "c"});
        }
    }
    CHECK(numerics == 6);
    CHECK(categoricals == 2);

    Dataset again = benchmark_population(spec, 4);
    CHECK(csv_text(ds) == csv_text(again));
    Dataset other = benchmark_population(spec, 5);
    CHECK(csv_text(ds) != csv_text(other));

    BenchmarkSpec bad;
    bad.rows = 0;
    CHECK_THROWS_AS(bad.validate(), DataError);
    bad.rows = 10;
    bad.signal = -1.0;
    CHECK_THROWS_AS(bad.validate(), DataError);
}

TEST_CASE("a null signal leaves nothing to learn") {
    BenchmarkSpec spec;
    spec.signal = 0.0;
    spec.rows = 2000;
    Dataset train = benchmark_population(spec, 11);
    Dataset test = benchmark_population(spec, 12);
    double auc = fit_and_score(train, test, GbdtParams{}, 13);
    CHECK(auc == doctest::Approx(0.5).epsilon(0.06));
}

TEST_CASE("a trained model approaches the ceiling with enough data") {
    BenchmarkSpec spec;
    spec.rows = 20000;
    Dataset train = benchmark_population(spec, 21);
    Dataset test = benchmark_population(spec, 22);
    double auc = fit_and_score(train, test, GbdtParams{}, 23);
    CHECK(auc > 0.80);
    CHECK(auc < 0.88);
}

TEST_CASE("display rounding matches the reported tables") {
    CHECK(format_auc(0.71614999) == "0.7161");
    CHECK(format_auc(0.5) == "0.5000");
    CHECK(format_percent(7.0800726) == "7.08");
    CHECK(format_percent(26.4878) == "26.49");
    CHECK(format_p_value(0.0078125) == "0.0078");
    CHECK(format_p_value(1.0 / 64.0) == "0.0156");
}

TEST_CASE("the per-model table renders tag, size, and rounded scores") {
    ModelBestRow row{"ctgan", 720, 0.7161, 0.7668, 100.0 * (0.7668 - 0.7161) / 0.7161};
    std::string text = render_model_best({row});
    CHECK(text.find("ctgan 720 0.7161 0.7668 7.08\n") != std::string::npos);
    CHECK(text.rfind("synthesizer n_prime baseline_auc augmented_auc relative_auc_percent\n", 0) == 0);
}

TEST_CASE("the sweep summary document mirrors the result") {
    SweepResult r;
    r.baseline_auc = 0.70;
    r.grid = {{"seq", 8, 0.71}, {"seq", 12, 0.74}, {"bn", 8, 0.72}, {"bn", 12, 0.69}};
    r.best = {"seq", 12, 0.74, 100.0 * (0.74 - 0.70) / 0.70};
    r.resampled_auc = 0.705;
    r.diversity_best = 0.012;
    r.diversity_resample = 0.003;

    nlohmann::json doc = nlohmann::json::parse(sweep_summary_json(r));
    CHECK(doc["baseline_auc"].get<double>() == 0.70);
    CHECK(doc["grid"].size() == 4);
    CHECK(doc["grid"][1]["n_prime"].get<std::size_t>() == 12);
    CHECK(doc["best"]["synthesizer"].get<std::string>() == "seq");
    CHECK(doc["resampled_auc"].get<double>() == 0.705);
    CHECK(doc["diversity_best"].get<double>() == 0.012);
    CHECK(doc["diversity_resample"].get<double>() == 0.003);
    REQUIRE(doc["models"].size() == 2);
    CHECK(doc["models"][0]["synthesizer"].get<std::string>() == "seq");
    CHECK(doc["models"][0]["n_prime"].get<std::size_t>() == 12);
    CHECK(doc["models"][1]["synthesizer"].get<std::string>() == "bn");
    CHECK(doc["models"][1]["n_prime"].get<std::size_t>() == 8);
    CHECK(doc["models"][1]["augmented_auc"].get<double>() == 0.72);

    SweepResult empty;
    CHECK_THROWS_AS(per_model_best(empty), DataError);
}

TEST_CASE("curve output is one row per threshold") {
    std::vector<CurvePoint> points = {{0.01, 0.25, 0.5, 0.25}, {0.02, 1.0, 1.0, 0.0}};
    std::string text = curve_csv(points);
    CHECK(text == "threshold,base_rate,aug_rate,x_j\n0.01,0.25,0.5,0.25\n0.02,1,1,0\n");
}

TEST_CASE("the paired-test document carries the exact counts") {
    PermutationTestResult r = exact_permutation_test(kAugmentedVsBaseline, Tail::greater);
    nlohmann::json doc = nlohmann::json::parse(permutation_json(r));
    CHECK(doc["p_value"].get<double>() == 1.0 / 128.0);
    CHECK(doc["assignments"].get<std::uint64_t>() == 128);
    CHECK(doc["favorable"].get<std::uint64_t>() == 1);
    CHECK(doc["tail"].get<std::string>() == "greater");
}

TEST_CASE("file digests follow the 64-bit fnv-1a reference values") {
    CHECK(hash_string_seed("") == 0xcbf29ce484222325ULL);
    CHECK(hash_string_seed("a") == 0xaf63dc4c8601ec8cULL);

    auto tmp = std::filesystem::temp_directory_path() / "augmentor_digest_test.bin";
    {
        std::ofstream out(tmp, std::ios::binary);
        out << "abc";
    }
    char expect[17];
    std::snprintf(expect, sizeof expect, "%016llx",
                  static_cast<unsigned long long>(hash_string_seed("abc")));
    CHECK(file_digest_hex(tmp) == expect);
    std::filesystem::remove(tmp);
    CHECK_THROWS_AS(file_digest_hex(tmp), DataError);
}

TEST_CASE("manifests survive a write and read cycle") {
    RunManifest m;
    m.command_line = "augmentor sweep --data d.csv --schema s.json";
    m.seeds = {42, 7};
    m.inputs["d.csv"] = "00112233aabbccdd";
    m.settings["threads"] = "2";
    m.settings["outer_folds"] = "5";
    m.timings_ms["total"] = 1234.5;

    auto tmp = std::filesystem::temp_directory_path() / "augmentor_manifest_test.json";
    write_manifest(m, tmp);
    RunManifest back = read_manifest(tmp);
    CHECK(back.command_line == m.command_line);
    CHECK(back.version == artifact_version());
    CHECK(back.seeds == m.seeds);
    CHECK(back.inputs == m.inputs);
    CHECK(back.settings == m.settings);
    CHECK(back.timings_ms == m.timings_ms);

    // timings live under their own key so comparisons can drop the one
    // field that legitimately changes between identical runs
    nlohmann::json doc = nlohmann::json::parse(manifest_json(m));
    CHECK(doc.contains("timings_ms"));
    doc.erase("timings_ms");
    CHECK(!doc.empty());

    std::ofstream(tmp) << "not json";
    CHECK_THROWS_AS(read_manifest(tmp), DataError);
    std::filesystem::remove(tmp);
}
