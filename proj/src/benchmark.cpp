#include "augmentor/benchmark.hpp"

#include <array>
#include <cmath>

#include "augmentor/auc.hpp"
#include "augmentor/error.hpp"
#include "augmentor/rng.hpp"

namespace augmentor {

namespace {

constexpr std::array<double, 6> kNumericWeights = {1.0, -0.8, 0.6, -0.5, 0.4, 0.3};
constexpr std::array<double, 3> kLevelEffects = {-0.8, 0.0, 0.8};

Schema benchmark_schema() {
    std::vector<ColumnSpec> cols;
    for (int j = 1; j <= 6; ++j)
        cols.push_back(ColumnSpec{"x" + std::to_string(j), ColumnKind::numeric,
                                  ColumnRole::predictor, {}, {}});
    cols.push_back(ColumnSpec{"c1", ColumnKind::categorical, ColumnRole::predictor,
                              {"a", "b", "c"}, {}});
    cols.push_back(ColumnSpec{"c2", ColumnKind::categorical, ColumnRole::predictor,
                              {"a", "b", "c"}, {}});
    cols.push_back(ColumnSpec{"y", ColumnKind::binary_outcome, ColumnRole::outcome,
                              {"0", "1"}, {}});
    return Schema{cols};
}

struct DrawnRow {
    std::array<double, 6> x;
    std::array<std::int32_t, 2> c;
    double log_odds;
};

DrawnRow draw_row(Rng& rng, const BenchmarkSpec& spec) {
    DrawnRow row;
    double raw = 0.0;
    for (std::size_t j = 0; j < 6; ++j) {
        row.x[j] = rng.normal();
        raw += kNumericWeights[j] * row.x[j];
    }
    for (std::size_t j = 0; j < 2; ++j) {
        row.c[j] = static_cast<std::int32_t>(rng.uniform_index(3));
        raw += kLevelEffects[static_cast<std::size_t>(row.c[j])];
    }
    row.log_odds = spec.signal * raw + spec.intercept;
    return row;
}

} // namespace

void BenchmarkSpec::validate() const {
    if (rows == 0) throw DataError("benchmark population: rows must be positive");
    if (signal < 0.0) throw DataError("benchmark population: signal must be non-negative");
    if (!std::isfinite(signal) || !std::isfinite(intercept))
        throw DataError("benchmark population: parameters must be finite");
}

Dataset benchmark_population(const BenchmarkSpec& spec, std::uint64_t seed) {
    spec.validate();
    DatasetBuilder b(benchmark_schema());
    Rng rng(derive_seed(seed, hash_string_seed("benchmark_population")));
    for (std::size_t r = 0; r < spec.rows; ++r) {
        DrawnRow row = draw_row(rng, spec);
        for (std::size_t j = 0; j < 6; ++j) b.set_numeric(j, row.x[j]);
        b.set_level(6, row.c[0]);
        b.set_level(7, row.c[1]);
        double p = 1.0 / (1.0 + std::exp(-row.log_odds));
        b.set_level(8, rng.bernoulli(p) ? 1 : 0);
        b.end_row();
    }
    return b.build();
}

double benchmark_bayes_auc(const BenchmarkSpec& spec, std::size_t mc_rows,
                           std::uint64_t seed) {
    spec.validate();
    if (mc_rows < 100) throw DataError("benchmark population: too few rows for the oracle");
    Rng rng(derive_seed(seed, hash_string_seed("benchmark_oracle")));
    std::vector<double> scores(mc_rows);
    std::vector<std::int32_t> labels(mc_rows);
    for (std::size_t r = 0; r < mc_rows; ++r) {
        DrawnRow row = draw_row(rng, spec);
        scores[r] = row.log_odds;
        double p = 1.0 / (1.0 + std::exp(-row.log_odds));
        labels[r] = rng.bernoulli(p) ? 1 : 0;
    }
    return auc_score(scores, labels);
}

} // namespace augmentor
