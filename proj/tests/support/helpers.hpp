#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "augmentor/rng.hpp"
#include "augmentor/tabular.hpp"

namespace testsupport {

using namespace augmentor;

inline ColumnSpec numeric_col(std::string name) {
    return ColumnSpec{std::move(name), ColumnKind::numeric, ColumnRole::predictor, {}, {}};
}

inline ColumnSpec categorical_col(std::string name, std::vector<std::string> levels,
                                  std::optional<bool> high_card = std::nullopt) {
    return ColumnSpec{std::move(name), ColumnKind::categorical, ColumnRole::predictor,
                      std::move(levels), high_card};
}

inline ColumnSpec outcome_col(std::string name = "y") {
    return ColumnSpec{std::move(name), ColumnKind::binary_outcome, ColumnRole::outcome,
                      {"0", "1"}, {}};
}

// One numeric predictor `x` plus outcome `y`.
inline Dataset xy_dataset(const std::vector<double>& x, const std::vector<std::int32_t>& y,
                          Provenance prov = Provenance::original) {
    Schema schema{{numeric_col("x"), outcome_col()}};
    DatasetBuilder b(schema, prov);
    for (std::size_t i = 0; i < x.size(); ++i) {
        b.set_numeric(0, x[i]);
        b.set_level(1, y[i]);
        b.end_row();
    }
    return b.build();
}

// `count` i.i.d. standard-normal predictors with Bernoulli(p) labels,
// independent of the features.
inline Dataset noise_dataset(std::size_t rows, std::size_t numeric_cols, double prevalence,
                             std::uint64_t seed) {
    std::vector<ColumnSpec> cols;
    for (std::size_t c = 0; c < numeric_cols; ++c)
        cols.push_back(numeric_col("x" + std::to_string(c)));
    cols.push_back(outcome_col());
    Schema schema{cols};
    DatasetBuilder b(schema);
    Rng rng(seed);
    std::size_t positives = 0;
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < numeric_cols; ++c) b.set_numeric(c, rng.normal());
        bool pos = rng.bernoulli(prevalence);
        // guarantee both classes appear
        if (r == rows - 2 && positives == 0) pos = true;
        if (r == rows - 1 && positives == rows - 1) pos = false;
        if (pos) ++positives;
        b.set_level(numeric_cols, pos ? 1 : 0);
        b.end_row();
    }
    return b.build();
}

} // namespace testsupport
