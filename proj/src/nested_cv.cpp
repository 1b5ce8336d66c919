#include "augmentor/nested_cv.hpp"

#include "augmentor/auc.hpp"
#include "augmentor/error.hpp"
#include "augmentor/rng.hpp"
#include "augmentor/sampling.hpp"

namespace augmentor {

double fit_and_score(const Dataset& train, const Dataset& test,
                     const GbdtParams& params, std::uint64_t seed) {
    GbdtModel model = GbdtModel::fit(train, params, seed);
    return auc_score(model.predict_scores(test), test.outcomes());
}

NestedCvResult nested_cv_auc(const Dataset& ds,
                             const std::optional<SynthesizerSpec>& synth,
                             std::size_t n_prime, std::uint64_t seed,
                             const NestedCvOptions& options) {
    if (options.outer_folds < 2) throw DataError("nested cv: need at least 2 outer folds");
    if (synth && n_prime == 0)
        throw DataError("nested cv: synthetic row count must be positive");

    std::vector<std::size_t> fold_of = stratified_fold_ids(
        ds, options.outer_folds, derive_seed(seed, hash_string_seed("outer_folds")));

    // In leakage mode the generator sees every row once, up front. The
    // leakage-safe path refits inside each fold below.
    std::unique_ptr<Synthesizer> leaky;
    if (synth && options.deliberate_leakage) {
        leaky = make_synthesizer(*synth);
        leaky->fit(ds);
    }

    NestedCvResult result;
    result.folds.resize(options.outer_folds);
    double sum = 0.0;
    for (std::size_t k = 0; k < options.outer_folds; ++k) {
        std::vector<std::size_t> train_rows, test_rows;
        for (std::size_t r = 0; r < ds.rows(); ++r)
            (fold_of[r] == k ? test_rows : train_rows).push_back(r);
        Dataset train = ds.select(train_rows);
        Dataset test = ds.select(test_rows);

        std::uint64_t fold_seed = derive_seed(seed, k + 1);
        Dataset fit_data = train;
        if (synth) {
            Dataset synthetic = [&] {
                std::uint64_t gen_seed =
                    derive_seed(fold_seed, hash_string_seed("synth_gen"));
                if (leaky) return leaky->generate(n_prime, gen_seed);
                auto gen = make_synthesizer(*synth);
                gen->fit(train);
                return gen->generate(n_prime, gen_seed);
            }();
            fit_data = concat(train, synthetic);
        }

        TuneResult tuned = tune(fit_data, HyperRanges{}, options.tune_budget,
                                derive_seed(fold_seed, hash_string_seed("tune")),
                                options.threads, options.tune_folds);

        NestedCvFold& fold = result.folds[k];
        fold.params = tuned.params;
        fold.tune_cv_auc = tuned.cv_auc;
        fold.train_rows = train.rows();
        fold.test_rows = test.rows();
        fold.auc = fit_and_score(fit_data, test,
                                 tuned.params,
                                 derive_seed(fold_seed, hash_string_seed("final_fit")));
        sum += fold.auc;
    }
    result.mean_auc = sum / static_cast<double>(options.outer_folds);
    return result;
}

} // namespace augmentor
