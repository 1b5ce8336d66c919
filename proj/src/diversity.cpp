#include "augmentor/diversity.hpp"

#include <algorithm>
#include <cmath>

#include "augmentor/error.hpp"
#include "augmentor/rng.hpp"

namespace augmentor {

std::vector<CurvePoint> contamination_points(const std::vector<double>& reference_scores,
                                             const std::vector<double>& candidate_scores) {
    if (reference_scores.empty() || candidate_scores.empty())
        throw DataError("contamination curve: empty score vector");

    std::vector<double> ref_desc = reference_scores;
    std::sort(ref_desc.begin(), ref_desc.end(), std::greater<>());
    std::vector<double> cand_sorted = candidate_scores;
    std::sort(cand_sorted.begin(), cand_sorted.end());

    const auto nr = static_cast<double>(ref_desc.size());

    auto frac_at_least = [](const std::vector<double>& ascending, double t) {
        auto it = std::lower_bound(ascending.begin(), ascending.end(), t);
        return static_cast<double>(ascending.end() - it) /
               static_cast<double>(ascending.size());
    };

    std::vector<CurvePoint> points(100);
    std::vector<double> ref_asc(ref_desc.rbegin(), ref_desc.rend());
    for (int j = 1; j <= 100; ++j) {
        auto k = static_cast<std::size_t>(
            std::ceil(static_cast<double>(j) * nr / 100.0));
        k = std::min(std::max<std::size_t>(k, 1), ref_desc.size());
        CurvePoint& p = points[static_cast<std::size_t>(j - 1)];
        p.threshold = ref_desc[k - 1];
        p.reference_rate = frac_at_least(ref_asc, p.threshold);
        p.candidate_rate = frac_at_least(cand_sorted, p.threshold);
        p.excess = p.candidate_rate - p.reference_rate;
    }
    return points;
}

std::vector<double> contamination_curve(const std::vector<double>& reference_scores,
                                        const std::vector<double>& candidate_scores) {
    std::vector<CurvePoint> points = contamination_points(reference_scores, candidate_scores);
    std::vector<double> curve(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) curve[i] = points[i].excess;
    return curve;
}

double diversity_from_curve(const std::vector<double>& curve) {
    if (curve.size() != 100)
        throw DataError("diversity: curve must have 100 entries");
    double total = 0.0;
    for (double x : curve)
        if (x >= 0.0) total += x * (2.0 - x);
    return total / 100.0;
}

DiversityResult diversity_added(const Dataset& base, const Dataset& synthetic,
                                const EifParams& params, std::uint64_t seed) {
    IsolationForest forest =
        IsolationForest::fit(base, params, derive_seed(seed, hash_string_seed("eif_fit")));
    std::vector<double> ref = forest.anomaly_scores(base);
    std::vector<double> cand = forest.anomaly_scores(synthetic);
    DiversityResult result;
    result.points = contamination_points(ref, cand);
    result.curve.resize(result.points.size());
    for (std::size_t i = 0; i < result.points.size(); ++i)
        result.curve[i] = result.points[i].excess;
    result.score = diversity_from_curve(result.curve);
    return result;
}

} // namespace augmentor
