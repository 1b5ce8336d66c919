#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace augmentor {

// Equal-frequency binning over finite values. Interior boundaries are
// quantile cuts with duplicates merged, so the realized bin count can be
// smaller than requested. Value bins are [lo, hi) half-open except the last;
// an optional dedicated bin absorbs NaN.
class Discretizer {
public:
    static Discretizer fit(std::span<const double> values, std::size_t max_bins,
                           bool with_missing_bin);

    std::size_t bin(double v) const;  // NaN maps to the missing bin
    std::size_t value_bin_count() const { return bounds_.size() + 1; }
    std::size_t bin_count() const { return value_bin_count() + (missing_bin_ ? 1 : 0); }
    bool has_missing_bin() const { return missing_bin_; }
    std::size_t missing_bin() const { return value_bin_count(); }

    // Observed-value interval covered by a value bin (used to reconstruct a
    // numeric draw from a sampled bin).
    std::pair<double, double> bin_range(std::size_t value_bin) const;

    const std::vector<double>& boundaries() const { return bounds_; }
    double observed_min() const { return min_; }
    double observed_max() const { return max_; }

private:
    std::vector<double> bounds_;
    double min_ = 0.0;
    double max_ = 0.0;
    bool missing_bin_ = false;
};

} // namespace augmentor
