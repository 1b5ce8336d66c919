#pragma once

#include <string>
#include <vector>

#include "augmentor/diversity.hpp"
#include "augmentor/permutation_test.hpp"
#include "augmentor/sweep.hpp"

namespace augmentor {

// Display rounding used by the text reports. JSON output keeps full precision.
std::string format_auc(double v);      // 4 decimals
std::string format_percent(double v);  // 2 decimals
std::string format_p_value(double v);  // 4 decimals

// Full-precision JSON mirror of a sweep run: baseline_auc, grid, best,
// resampled_auc, the two diversity scores, and per-synthesizer best rows.
std::string sweep_summary_json(const SweepResult& result);

// One row per synthesizer: tag, best size, baseline AUC, augmented AUC,
// relative gain in percent.
std::string render_model_best(const std::vector<ModelBestRow>& rows);

// 100-row CSV of a contamination-curve comparison.
std::string curve_csv(const std::vector<CurvePoint>& points);
std::string curve_csv_header();

std::string permutation_json(const PermutationTestResult& result);

} // namespace augmentor
