#include "augmentor/tuning.hpp"

#include <cmath>

#include "augmentor/auc.hpp"
#include "augmentor/parallel.hpp"
#include "augmentor/rng.hpp"
#include "augmentor/sampling.hpp"

namespace augmentor {

GbdtParams sample_params(const HyperRanges& ranges, const GbdtParams& base,
                         std::uint64_t seed) {
    Rng rng(seed);
    GbdtParams p = base;
    p.max_depth = static_cast<int>(rng.uniform_int(ranges.max_depth_lo, ranges.max_depth_hi));
    p.learning_rate = std::exp2(
        rng.uniform(ranges.log2_learning_rate_lo, ranges.log2_learning_rate_hi));
    p.early_stopping_rounds = static_cast<int>(
        rng.uniform_int(ranges.early_stopping_lo, ranges.early_stopping_hi));
    p.min_data_in_leaf = static_cast<int>(
        rng.uniform_int(ranges.min_data_in_leaf_lo, ranges.min_data_in_leaf_hi));
    p.num_leaves = static_cast<int>(
        rng.uniform_int(ranges.num_leaves_lo, ranges.num_leaves_hi));
    return p;
}

double cross_val_auc(const Dataset& ds, const GbdtParams& params, std::size_t folds,
                     std::uint64_t seed) {
    auto fold_of = stratified_fold_ids(ds, folds, derive_seed(seed, hash_string_seed("cv_folds")));
    double total = 0.0;
    for (std::size_t k = 0; k < folds; ++k) {
        std::vector<std::size_t> train_idx, test_idx;
        for (std::size_t r = 0; r < ds.rows(); ++r)
            (fold_of[r] == k ? test_idx : train_idx).push_back(r);
        Dataset train = ds.select(train_idx);
        Dataset test = ds.select(test_idx);
        GbdtModel model = GbdtModel::fit(train, params, derive_seed(seed, k));
        total += auc_score(model.predict_scores(test), test.outcomes());
    }
    return total / static_cast<double>(folds);
}

TuneResult tune(const Dataset& train, const HyperRanges& ranges, int budget,
                std::uint64_t seed, int threads, std::size_t folds) {
    if (budget < 1) throw DataError("tuning budget must be >= 1");
    std::vector<GbdtParams> trials(static_cast<std::size_t>(budget));
    std::vector<double> scores(static_cast<std::size_t>(budget));
    std::uint64_t fold_seed = derive_seed(seed, hash_string_seed("tune"));
    for (std::size_t i = 0; i < trials.size(); ++i)
        trials[i] = sample_params(ranges, GbdtParams{}, derive_seed(seed, 1000 + i));
    parallel_for(trials.size(), threads, [&](std::size_t i) {
        scores[i] = cross_val_auc(train, trials[i], folds, fold_seed);
    });
    std::size_t best = 0;
    for (std::size_t i = 1; i < scores.size(); ++i)
        if (scores[i] > scores[best]) best = i;
    return TuneResult{trials[best], scores[best], scores};
}

} // namespace augmentor
