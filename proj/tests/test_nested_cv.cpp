#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "augmentor/error.hpp"
#include "augmentor/nested_cv.hpp"
#include "augmentor/rng.hpp"
#include "augmentor/synthesizer.hpp"
#include "support/helpers.hpp"

using namespace augmentor;
using namespace testsupport;

namespace {

// two informative predictors, logistic labels: learnable but not memorizable
Dataset signal_data(std::size_t n, std::uint64_t seed) {
    Schema schema{{numeric_col("x1"), numeric_col("x2"), outcome_col()}};
    DatasetBuilder b(schema);
    Rng rng(seed);
    for (std::size_t i = 0; i < n; ++i) {
        double x1 = rng.normal();
        double x2 = rng.normal();
        double p = 1.0 / (1.0 + std::exp(-(1.8 * x1 + 1.2 * x2)));
        b.set_numeric(0, x1);
        b.set_numeric(1, x2);
        b.set_level(2, rng.bernoulli(p) ? 1 : 0);
        b.end_row();
    }
    return b.build();
}

// every row carries a unique fingerprint and a label unrelated to it; the
// only way to score well on held-out rows is to have seen them
Dataset fingerprint_data(std::size_t n) {
    Schema schema{{numeric_col("id"), outcome_col()}};
    DatasetBuilder b(schema);
    for (std::size_t i = 0; i < n; ++i) {
        b.set_numeric(0, static_cast<double>(i));
        b.set_level(1, static_cast<std::int32_t>((splitmix64(i) >> 17) & 1));
        b.end_row();
    }
    return b.build();
}

SynthesizerSpec bootstrap_spec(std::uint64_t seed) {
    SynthesizerSpec spec;
    spec.kind = SynthKind::bootstrap;
    spec.config = BootstrapConfig{};
    spec.seed = seed;
    return spec;
}

} // namespace

TEST_CASE("outer folds account for every row") {
    Dataset ds = signal_data(100, 21);
    NestedCvOptions opt;
    opt.outer_folds = 5;
    opt.tune_budget = 4;
    opt.tune_folds = 3;
    NestedCvResult res = nested_cv_auc(ds, std::nullopt, 0, 5, opt);

    REQUIRE(res.folds.size() == 5);
    double sum = 0.0;
    std::size_t test_total = 0;
    for (const NestedCvFold& f : res.folds) {
        CHECK(f.train_rows + f.test_rows == 100);
        CHECK(f.test_rows == 20);
        CHECK(f.auc >= 0.0);
        CHECK(f.auc <= 1.0);
        CHECK(f.params.max_trees > 0);
        sum += f.auc;
        test_total += f.test_rows;
    }
    CHECK(test_total == 100);
    CHECK(res.mean_auc == doctest::Approx(sum / 5.0).epsilon(1e-15));
    // real signal, should beat chance comfortably
    CHECK(res.mean_auc > 0.65);
}

TEST_CASE("evaluation is deterministic in the seed") {
    Dataset ds = signal_data(80, 33);
    NestedCvOptions opt;
    opt.outer_folds = 4;
    opt.tune_budget = 3;
    opt.tune_folds = 3;
    NestedCvResult a = nested_cv_auc(ds, std::nullopt, 0, 9, opt);
    NestedCvResult b = nested_cv_auc(ds, std::nullopt, 0, 9, opt);
    REQUIRE(a.folds.size() == b.folds.size());
    for (std::size_t k = 0; k < a.folds.size(); ++k)
        CHECK(a.folds[k].auc == b.folds[k].auc);
    CHECK(a.mean_auc == b.mean_auc);

    NestedCvResult c = nested_cv_auc(ds, std::nullopt, 0, 10, opt);
    CHECK(a.mean_auc != c.mean_auc);
}

TEST_CASE("augmented evaluation keeps original row accounting") {
    Dataset ds = signal_data(100, 4);
    NestedCvOptions opt;
    opt.outer_folds = 5;
    opt.tune_budget = 3;
    opt.tune_folds = 3;
    NestedCvResult res = nested_cv_auc(ds, bootstrap_spec(1), 60, 6, opt);
    for (const NestedCvFold& f : res.folds) {
        CHECK(f.train_rows == 80);  // synthetic rows not counted
        CHECK(f.test_rows == 20);
    }
    CHECK(res.mean_auc > 0.6);
}

TEST_CASE("input validation") {
    Dataset ds = signal_data(40, 5);
    NestedCvOptions opt;
    opt.outer_folds = 1;
    CHECK_THROWS_AS(nested_cv_auc(ds, std::nullopt, 0, 1, opt), DataError);

    NestedCvOptions opt2;
    opt2.outer_folds = 4;
    CHECK_THROWS_AS(nested_cv_auc(ds, bootstrap_spec(1), 0, 1, opt2), DataError);
}

TEST_CASE("fitting the generator on all rows leaks the held-out labels") {
    Dataset ds = fingerprint_data(100);
    NestedCvOptions opt;
    opt.outer_folds = 5;
    opt.tune_budget = 8;
    opt.tune_folds = 3;
    opt.threads = 2;

    NestedCvResult safe = nested_cv_auc(ds, bootstrap_spec(2), 1000, 17, opt);

    NestedCvOptions leaky_opt = opt;
    leaky_opt.deliberate_leakage = true;
    NestedCvResult leaky = nested_cv_auc(ds, bootstrap_spec(2), 1000, 17, leaky_opt);

    CAPTURE(safe.mean_auc);
    CAPTURE(leaky.mean_auc);
    CHECK(leaky.mean_auc > safe.mean_auc);
    // memorization is the only signal: the leak should be blatant
    CHECK(leaky.mean_auc > 0.8);
    CHECK(safe.mean_auc < 0.7);
}

TEST_CASE("single split scoring") {
    std::vector<double> xs, xt;
    std::vector<std::int32_t> ys, yt;
    Rng rng(8);
    for (int i = 0; i < 120; ++i) {
        double x = rng.normal();
        (i < 80 ? xs : xt).push_back(x);
        (i < 80 ? ys : yt).push_back(x > 0 ? 1 : 0);
    }
    Dataset train = xy_dataset(xs, ys);
    Dataset test = xy_dataset(xt, yt);
    GbdtParams params;
    double auc = fit_and_score(train, test, params, 3);
    CHECK(auc > 0.95);
    CHECK(auc == fit_and_score(train, test, params, 3));
}
