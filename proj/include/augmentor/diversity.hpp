#pragma once

#include <cstdint>
#include <vector>

#include "augmentor/isolation_forest.hpp"
#include "augmentor/tabular.hpp"

namespace augmentor {

// One screening level of the excess outlier-rate curve.
struct CurvePoint {
    double threshold = 0.0;       // j-th percentile of the reference scores
    double reference_rate = 0.0;  // reference fraction with score >= threshold
    double candidate_rate = 0.0;  // candidate fraction with score >= threshold
    double excess = 0.0;          // candidate_rate - reference_rate
};

// For each screening level j = 1..100 the threshold is the k-th largest
// reference score with k = ceil(j * n / 100); rows are flagged when
// score >= threshold. Identical score sets give an exactly zero excess.
std::vector<CurvePoint> contamination_points(const std::vector<double>& reference_scores,
                                             const std::vector<double>& candidate_scores);

// Just the excess entries of contamination_points.
std::vector<double> contamination_curve(const std::vector<double>& reference_scores,
                                        const std::vector<double>& candidate_scores);

// Scalar summary of a 100-point curve: mean of x * (2 - x) over entries with
// x >= 0. Zero for the flat curve, 1 when every entry is 1, 0.75 at 0.5.
double diversity_from_curve(const std::vector<double>& curve);

struct DiversityResult {
    std::vector<CurvePoint> points;
    std::vector<double> curve;
    double score = 0.0;
};

// Fits the forest on the original rows only and measures how much more often
// the synthetic rows trip the outlier screen.
DiversityResult diversity_added(const Dataset& base, const Dataset& synthetic,
                                const EifParams& params, std::uint64_t seed);

} // namespace augmentor
