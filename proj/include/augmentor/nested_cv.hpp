#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "augmentor/gbdt.hpp"
#include "augmentor/synthesizer.hpp"
#include "augmentor/tabular.hpp"
#include "augmentor/tuning.hpp"

namespace augmentor {

struct NestedCvOptions {
    std::size_t outer_folds = 5;
    int tune_budget = 30;
    std::size_t tune_folds = 5;
    int threads = 1;
    // Test hook: fit the generator on all rows, including each fold's test
    // rows. Quantifies how much synthetic leakage inflates the estimate; must
    // never be on in production paths.
    bool deliberate_leakage = false;
};

struct NestedCvFold {
    double auc = 0.0;
    GbdtParams params;          // winning configuration for this fold
    double tune_cv_auc = 0.0;
    std::size_t train_rows = 0; // original rows used for fitting
    std::size_t test_rows = 0;
};

struct NestedCvResult {
    std::vector<NestedCvFold> folds;
    double mean_auc = 0.0;
};

// Outer stratified k-fold evaluation of a training pipeline that may augment
// each fold's training partition with synthetic rows. The generator is
// fitted per fold on that fold's training partition only, so no information
// from the held-out rows can reach the model. Hyperparameters are tuned on
// the augmented partition; the scored model never sees the test rows.
NestedCvResult nested_cv_auc(const Dataset& ds,
                             const std::optional<SynthesizerSpec>& synth,
                             std::size_t n_prime, std::uint64_t seed,
                             const NestedCvOptions& options = {});

// Single-split helper used by the sweep: fit (optionally augmented) on
// `train`, return AUC on `test`.
double fit_and_score(const Dataset& train, const Dataset& test,
                     const GbdtParams& params, std::uint64_t seed);

} // namespace augmentor
