#pragma once

#include <cstdint>
#include <vector>

#include "augmentor/gbdt.hpp"
#include "augmentor/tabular.hpp"

namespace augmentor {

// Random-search box. Learning rate is drawn log2-uniform; the integer knobs
// are drawn uniformly over closed ranges.
struct HyperRanges {
    int max_depth_lo = 1, max_depth_hi = 15;
    double log2_learning_rate_lo = -10.0, log2_learning_rate_hi = 0.0;
    int early_stopping_lo = 7, early_stopping_hi = 30;
    int min_data_in_leaf_lo = 1, min_data_in_leaf_hi = 60;
    int num_leaves_lo = 4, num_leaves_hi = 60;
};

GbdtParams sample_params(const HyperRanges& ranges, const GbdtParams& base,
                         std::uint64_t seed);

// Mean AUC over stratified k-fold CV at fixed params.
double cross_val_auc(const Dataset& ds, const GbdtParams& params, std::size_t folds,
                     std::uint64_t seed);

struct TuneResult {
    GbdtParams params;
    double cv_auc = 0.0;
    std::vector<double> trial_aucs;
};

// Random search over `budget` draws, scored by k-fold CV on shared folds.
// Ties keep the earliest trial. budget >= 1.
TuneResult tune(const Dataset& train, const HyperRanges& ranges, int budget,
                std::uint64_t seed, int threads = 1, std::size_t folds = 5);

} // namespace augmentor
