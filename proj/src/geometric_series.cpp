#include "augmentor/geometric_series.hpp"

#include <cmath>

#include "augmentor/error.hpp"
#include "augmentor/rng.hpp"

namespace augmentor {

AugmentationSeries series_from_base(double b) {
    if (!(b > 1.0)) throw DataError("augmentation series: growth base must exceed 1");
    AugmentationSeries series;
    series.b = b;
    series.sizes.reserve(30);
    // repeated multiplication instead of pow: bit-for-bit reproducible across
    // math libraries
    double power = b * b * b * b;  // b^4
    for (int i = 1; i <= 30; ++i) {
        power *= b;  // b^(i+4)
        series.sizes.push_back(static_cast<std::size_t>(std::ceil(power)));
    }
    return series;
}

AugmentationSeries augmentation_series(std::uint64_t seed, const SeriesParams& params) {
    Rng rng(derive_seed(seed, hash_string_seed("series_base")));
    return series_from_base(rng.normal(params.mean, params.sd));
}

} // namespace augmentor
