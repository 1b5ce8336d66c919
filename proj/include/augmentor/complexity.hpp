#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "augmentor/tabular.hpp"

namespace augmentor {

struct ComplexityProfile {
    std::size_t n0 = 0;
    double imbalance = 1.0;
    std::size_t dof = 0;
    double std_entropy = 0.0;
    double mi_cov = 0.0;
    double separability = 0.0;
    std::optional<double> baseline_auc;
};

double imbalance_from_prevalence(double positive_fraction);
double imbalance_factor(const Dataset& ds);  // errors on a single-class dataset

// Numeric predictors contribute 1, categorical ones (levels - 1). The
// dataset-aware variant counts observed missingness in a categorical predictor
// as one extra level.
std::size_t degrees_of_freedom(const Schema& schema);
std::size_t degrees_of_freedom(const Dataset& ds);

struct DiscretizationOptions {
    std::size_t numeric_bins = 10;
};

// Mean over predictors of H / log(#occupied bins); single-bin columns
// contribute 0. Numerics are equal-frequency binned; missing is its own bin.
double standardized_entropy(const Dataset& ds, const DiscretizationOptions& opts = {});

// Coefficient of variation (population sd / mean) of pairwise mutual
// information over all unordered predictor pairs, same discretization as
// the entropy metric. Zero mean (or fewer than 2 predictors) yields 0.
double mutual_information_cov(const Dataset& ds, const DiscretizationOptions& opts = {});

// Gower distance over predictor columns of one dataset (numeric range scaling
// comes from the construction dataset). Columns missing on either side are
// skipped and the mean renormalized.
class GowerMetric {
public:
    explicit GowerMetric(const Dataset& ds);
    double distance(std::size_t row_a, std::size_t row_b) const;

private:
    const Dataset* ds_;
    std::vector<std::size_t> predictor_cols_;
    std::vector<double> ranges_;  // per predictor column; 0 for categorical
};

// mean intraclass nearest-neighbor Gower distance / mean interclass
// nearest-neighbor Gower distance. Each class needs >= 2 rows.
double separability(const Dataset& ds, int threads = 1);

ComplexityProfile profile(const Dataset& ds,
                          std::optional<double> baseline_auc = std::nullopt,
                          int threads = 1);

} // namespace augmentor
