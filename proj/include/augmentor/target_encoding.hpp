#pragma once

#include <cstdint>
#include <unordered_map>

#include "augmentor/tabular.hpp"

namespace augmentor {

// Smoothed outcome-mean encoding for a categorical column:
//   encoded(level) = (count * level_mean + smoothing * global_mean) / (count + smoothing)
// Unseen levels (and missing, when the fit data had none) fall back to the
// global outcome mean. Fit on training partitions only.
class TargetEncoder {
public:
    TargetEncoder() = default;

    static TargetEncoder fit(const Dataset& train, std::size_t column, double smoothing);

    std::size_t column() const { return column_; }
    double smoothing() const { return smoothing_; }
    double default_value() const { return default_value_; }
    double encode_level(std::int32_t level) const;

    // Replaces the column with its encoded numeric values; the result schema
    // marks the column numeric.
    Dataset apply(const Dataset& ds) const;

private:
    std::size_t column_ = 0;
    double smoothing_ = 0.0;
    double default_value_ = 0.0;
    std::unordered_map<std::int32_t, double> mapping_;
};

} // namespace augmentor
