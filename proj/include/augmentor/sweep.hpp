#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "augmentor/diversity.hpp"
#include "augmentor/geometric_series.hpp"
#include "augmentor/synthesizer.hpp"
#include "augmentor/tabular.hpp"

namespace augmentor {

struct SweepOptions {
    std::size_t outer_folds = 5;
    int tune_budget = 8;
    std::size_t tune_folds = 5;
    int threads = 1;
    // run even when the screening model advises against augmenting
    bool force = false;
    // drop series sizes above this; 0 keeps the whole series
    std::size_t max_nprime = 0;
    // when set, finished cells are appended here immediately and picked up
    // again by a rerun, so an interrupted sweep resumes instead of restarting
    std::string cells_path;
    EifParams eif;
};

// One scored fold of one grid cell. The synthesizer field holds the spec tag,
// or "baseline" / "resample_control" for the two non-grid phases.
struct SweepCell {
    std::string synthesizer;
    std::size_t n_prime = 0;
    std::size_t fold = 0;
    double auc = 0.0;
};

struct GridEntry {
    std::string synthesizer;
    std::size_t n_prime = 0;
    double mean_auc = 0.0;
};

struct SweepBest {
    std::string synthesizer;
    std::size_t n_prime = 0;
    double augmented_auc = 0.0;
    double relative_auc_percent = 0.0;
};

struct SweepResult {
    double baseline_auc = 0.0;
    std::vector<SweepCell> cells;  // baseline rows, grid rows, control rows
    std::vector<GridEntry> grid;   // synthesizer registration order, sizes ascending
    SweepBest best;
    double resampled_auc = 0.0;    // bootstrap control at the winning size
    double diversity_best = 0.0;
    double diversity_resample = 0.0;
    // fold-averaged 100-point contamination comparisons; empty when the
    // winning size is zero
    std::vector<CurvePoint> curve_best;
    std::vector<CurvePoint> curve_resample;
};

// Per-synthesizer argmax rows, the shape of the per-dataset report tables.
struct ModelBestRow {
    std::string synthesizer;
    std::size_t n_prime = 0;
    double baseline_auc = 0.0;
    double augmented_auc = 0.0;
    double relative_auc_percent = 0.0;
};

// Cross-validated search for the augmentation level that maximizes held-out
// AUC. Every fold of every (synthesizer, size) cell is an independent task
// with its own derived RNG stream, so results do not depend on thread count
// or completion order. Synthesizers are refitted inside each training
// partition; the held-out rows never reach a generator or model. Refuses to
// run when the screening model advises against augmentation unless forced.
SweepResult run_sweep(const Dataset& ds, const std::vector<SynthesizerSpec>& synthesizers,
                      const AugmentationSeries& series, std::uint64_t seed,
                      const SweepOptions& options = {});

std::vector<ModelBestRow> per_model_best(const SweepResult& result);

// Cell CSV helpers shared by the sweep writer and the command-line tool.
std::string sweep_cells_header();
std::string render_sweep_cell(const SweepCell& cell);
std::vector<SweepCell> read_sweep_cells(const std::string& path);

} // namespace augmentor
