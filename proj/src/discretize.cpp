#include "augmentor/discretize.hpp"

#include <algorithm>
#include <cmath>

#include "augmentor/error.hpp"

namespace augmentor {

Discretizer Discretizer::fit(std::span<const double> values, std::size_t max_bins,
                             bool with_missing_bin) {
    if (max_bins == 0) throw DataError("bin count must be positive");
    Discretizer d;
    d.missing_bin_ = with_missing_bin;

    std::vector<double> sorted;
    sorted.reserve(values.size());
    for (double v : values)
        if (!std::isnan(v)) sorted.push_back(v);
    if (sorted.empty()) return d;  // single degenerate value bin at [0, 0]

    std::sort(sorted.begin(), sorted.end());
    d.min_ = sorted.front();
    d.max_ = sorted.back();

    const std::size_t n = sorted.size();
    for (std::size_t j = 1; j < max_bins; ++j) {
        std::size_t cut = (j * n) / max_bins;
        if (cut == 0 || cut >= n) continue;
        double b = sorted[cut];
        if (b <= d.min_) continue;  // empty first bin otherwise
        if (d.bounds_.empty() || b > d.bounds_.back()) d.bounds_.push_back(b);
    }
    return d;
}

std::size_t Discretizer::bin(double v) const {
    if (std::isnan(v)) {
        if (!missing_bin_) throw DataError("NaN reached a discretizer with no missing bin");
        return missing_bin();
    }
    return static_cast<std::size_t>(
        std::upper_bound(bounds_.begin(), bounds_.end(), v) - bounds_.begin());
}

std::pair<double, double> Discretizer::bin_range(std::size_t value_bin) const {
    if (value_bin >= value_bin_count())
        throw DataError("bin index out of range");
    double lo = value_bin == 0 ? min_ : bounds_[value_bin - 1];
    double hi = value_bin == bounds_.size() ? max_ : bounds_[value_bin];
    return {lo, hi};
}

} // namespace augmentor
