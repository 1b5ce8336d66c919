#pragma once

#include <cstdint>

#include "augmentor/tabular.hpp"

namespace augmentor {

// Synthetic population with a known logistic ground truth: six standard
// normal predictors, two 3-level categoricals, and a binary outcome whose
// log-odds are a fixed weighted sum scaled by `signal`. The default signal
// is calibrated so the best achievable ranking (scoring by the true
// log-odds) has an AUC close to 0.85.
struct BenchmarkSpec {
    std::size_t rows = 10000;
    double signal = 1.016;
    double intercept = 0.0;  // shifts prevalence away from one half

    void validate() const;
};

Dataset benchmark_population(const BenchmarkSpec& spec, std::uint64_t seed);

// Monte Carlo estimate of the AUC obtained by ranking with the true
// log-odds: the ceiling no trained model can beat in expectation.
double benchmark_bayes_auc(const BenchmarkSpec& spec, std::size_t mc_rows,
                           std::uint64_t seed);

} // namespace augmentor
