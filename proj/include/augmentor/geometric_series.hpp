#pragma once

#include <cstdint>
#include <vector>

namespace augmentor {

// Schedule of synthetic-row counts to try, denser at the small end: the i-th
// entry is ceil(b^(i+5)) for i = 0..29 with the growth base b drawn once per
// series from a normal distribution tightly centered on 1.5.
struct AugmentationSeries {
    double b = 1.5;
    std::vector<std::size_t> sizes;  // 30 entries, non-decreasing
};

struct SeriesParams {
    double mean = 1.5;
    double sd = 0.005;
};

// Deterministic in the seed.
AugmentationSeries augmentation_series(std::uint64_t seed, const SeriesParams& params = {});

// Test hook and pinning tool: the same schedule for an explicitly chosen base.
AugmentationSeries series_from_base(double b);

} // namespace augmentor
