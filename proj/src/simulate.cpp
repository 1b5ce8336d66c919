#include "augmentor/simulate.hpp"

#include <algorithm>
#include <set>

#include "augmentor/complexity.hpp"
#include "augmentor/error.hpp"
#include "augmentor/nested_cv.hpp"
#include "augmentor/parallel.hpp"
#include "augmentor/rng.hpp"
#include "augmentor/sampling.hpp"
#include "augmentor/tuning.hpp"

namespace augmentor {

SimulateOptions paper_scale_options() {
    SimulateOptions opt;
    opt.n0_grid = {20,   30,   40,   50,   60,   70,   80,   90,    100,  150,
                   200,  250,  300,  350,  400,  450,  500,  550,   600,  650,
                   700,  750,  800,  850,  900,  950,  1000, 2000,  3000, 4000,
                   5000, 6000, 7000, 8000, 9000, 10000, 20000, 30000, 40000, 50000};
    opt.series_count = 10;
    opt.max_nprime = 0;
    return opt;
}

std::size_t planned_augmented_evaluations(const SimulateOptions& options,
                                          std::size_t synthesizer_count) {
    return options.n0_grid.size() * options.series_count * 30 * synthesizer_count;
}

SimulationResult simulate_part1(const Dataset& population,
                                const std::vector<SynthesizerSpec>& synthesizers,
                                std::uint64_t seed, const SimulateOptions& options) {
    if (synthesizers.empty()) throw DataError("simulate: no synthesizers given");
    {
        std::set<std::string> tags;
        for (const SynthesizerSpec& spec : synthesizers) {
            spec.validate();
            if (!tags.insert(spec.tag()).second)
                throw DataError("simulate: duplicate synthesizer '" + spec.tag() + "'");
        }
    }
    if (options.n0_grid.empty()) throw DataError("simulate: empty n0 grid");
    if (options.series_count == 0) throw DataError("simulate: need at least one series");
    std::size_t max_n0 = *std::max_element(options.n0_grid.begin(), options.n0_grid.end());
    if (population.rows() < max_n0 * 2)
        throw DataError("simulate: population of " + std::to_string(population.rows()) +
                        " rows cannot support base samples of " + std::to_string(max_n0));

    SimulationResult result;

    auto [train_pool, test] = train_test_split(
        population, options.train_fraction, derive_seed(seed, hash_string_seed("split")));

    result.series.reserve(options.series_count);
    for (std::size_t r = 0; r < options.series_count; ++r)
        result.series.push_back(augmentation_series(
            derive_seed(seed, hash_string_seed("series"), r), options.series_params));

    // one base sample, one tune, one baseline per n0
    std::vector<Dataset> bases;
    std::vector<GbdtParams> params(options.n0_grid.size());
    bases.reserve(options.n0_grid.size());
    for (std::size_t gi = 0; gi < options.n0_grid.size(); ++gi) {
        std::size_t n0 = options.n0_grid[gi];
        if (train_pool.rows() < n0)
            throw DataError("simulate: training side smaller than base size " +
                            std::to_string(n0));
        bases.push_back(stratified_sample(train_pool, n0,
                                          derive_seed(seed, hash_string_seed("base"), n0)));
        params[gi] = tune(bases.back(), HyperRanges{}, options.tune_budget,
                          derive_seed(seed, hash_string_seed("tune"), n0),
                          options.threads, options.tune_folds)
                         .params;
        double auc = fit_and_score(bases.back(), test, params[gi],
                                   derive_seed(seed, hash_string_seed("baseline"), n0));
        result.baselines.push_back(SimulationBaseline{n0, auc});
    }

    struct Task {
        std::size_t grid_index;    // into n0_grid / bases / params
        std::size_t synth_index;
        std::size_t series_index;
        std::size_t n_prime;
    };
    std::vector<Task> tasks;
    for (std::size_t gi = 0; gi < options.n0_grid.size(); ++gi)
        for (std::size_t s = 0; s < synthesizers.size(); ++s)
            for (std::size_t r = 0; r < options.series_count; ++r)
                for (std::size_t v : result.series[r].sizes) {
                    if (options.max_nprime != 0 && v > options.max_nprime) continue;
                    tasks.push_back(Task{gi, s, r, v});
                }

    result.cells.resize(tasks.size());
    parallel_for(tasks.size(), options.threads, [&](std::size_t i) {
        const Task& t = tasks[i];
        const Dataset& base = bases[t.grid_index];
        std::size_t n0 = options.n0_grid[t.grid_index];
        const std::string tag = synthesizers[t.synth_index].tag();
        std::uint64_t task_seed = derive_seed(seed, hash_string_seed("simcell:" + tag),
                                              n0 * 1024 + t.series_index, t.n_prime);
        SynthesizerSpec fitted = synthesizers[t.synth_index];
        fitted.seed = derive_seed(task_seed, hash_string_seed("synth_fit"));
        auto gen = make_synthesizer(fitted);
        gen->fit(base);
        Dataset synthetic =
            gen->generate(t.n_prime, derive_seed(task_seed, hash_string_seed("synth_gen")));
        double auc = fit_and_score(concat(base, synthetic), test, params[t.grid_index],
                                   derive_seed(task_seed, hash_string_seed("final_fit")));
        result.cells[i] = SimulationCell{n0, tag, t.series_index, t.n_prime, auc};
    });

    // label each (n0, synthesizer) by whether any augmentation level helped
    for (std::size_t gi = 0; gi < options.n0_grid.size(); ++gi) {
        std::size_t n0 = options.n0_grid[gi];
        for (const SynthesizerSpec& spec : synthesizers) {
            double best = -1.0;
            for (const SimulationCell& c : result.cells)
                if (c.n0 == n0 && c.synthesizer == spec.tag())
                    best = std::max(best, c.auc);
            DecisionExample ex;
            ex.features.n_train = static_cast<double>(n0);
            ex.features.imbalance = imbalance_factor(bases[gi]);
            ex.features.dof = static_cast<double>(degrees_of_freedom(bases[gi]));
            ex.features.baseline_auc = result.baselines[gi].auc;
            ex.augmentation_helped = best > result.baselines[gi].auc;
            ex.group = options.dataset_label;
            result.records.push_back(std::move(ex));
        }
    }

    return result;
}

} // namespace augmentor
