#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "augmentor/decision.hpp"
#include "augmentor/geometric_series.hpp"
#include "augmentor/synthesizer.hpp"
#include "augmentor/tabular.hpp"

namespace augmentor {

struct SimulateOptions {
    std::vector<std::size_t> n0_grid = {50, 100, 200, 400};
    std::size_t series_count = 2;
    // series sizes above this are skipped; 0 runs the full series
    std::size_t max_nprime = 5000;
    double train_fraction = 0.70;
    int tune_budget = 8;
    std::size_t tune_folds = 5;
    int threads = 1;
    // group label stamped on the emitted screening examples
    std::string dataset_label = "population";
    SeriesParams series_params;
};

// The full-scale grid: 40 base sizes, 10 series, no size cap. Orders of
// magnitude more compute than the desk defaults; callers opt in explicitly.
SimulateOptions paper_scale_options();

struct SimulationBaseline {
    std::size_t n0 = 0;
    double auc = 0.0;
};

struct SimulationCell {
    std::size_t n0 = 0;
    std::string synthesizer;
    std::size_t series_index = 0;
    std::size_t n_prime = 0;
    double auc = 0.0;
};

struct SimulationResult {
    std::vector<AugmentationSeries> series;
    std::vector<SimulationBaseline> baselines;
    std::vector<SimulationCell> cells;  // canonical order, thread-count independent
    std::vector<DecisionExample> records;  // one per (n0, synthesizer)
};

// Augmentation-benefit sweep against a fixed held-out test set: split the
// population, draw one stratified base sample per n0, tune once per base,
// then score every (synthesizer, series, size) augmentation of it on the
// same test partition. Each record labels whether any augmentation level
// beat that base's un-augmented AUC.
SimulationResult simulate_part1(const Dataset& population,
                                const std::vector<SynthesizerSpec>& synthesizers,
                                std::uint64_t seed, const SimulateOptions& options = {});

// Augmented-evaluation count implied by an uncapped configuration
// (|n0_grid| * series_count * 30 per synthesizer).
std::size_t planned_augmented_evaluations(const SimulateOptions& options,
                                          std::size_t synthesizer_count);

} // namespace augmentor
