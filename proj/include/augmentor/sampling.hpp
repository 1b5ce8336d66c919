#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "augmentor/tabular.hpp"

namespace augmentor {

// Largest-remainder apportionment of `total` seats over `counts` (ties broken
// by larger remainder, then lower index). Exposed for tests.
std::vector<std::size_t> largest_remainder_allocation(const std::vector<std::size_t>& counts,
                                                      std::size_t total);

// Class-stratified subsample of n0 rows without replacement. Errors if n0
// exceeds the dataset or the allocation leaves a class empty.
std::vector<std::size_t> stratified_sample_indices(const Dataset& ds, std::size_t n0,
                                                   std::uint64_t seed);
Dataset stratified_sample(const Dataset& ds, std::size_t n0, std::uint64_t seed);

// Stratified train/test split; |train| = round(fraction * rows), distributed
// over classes by largest remainder. Errors if either side of either class
// would be empty.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> stratified_split_indices(
    const Dataset& ds, double train_fraction, std::uint64_t seed);
std::pair<Dataset, Dataset> train_test_split(const Dataset& ds, double train_fraction,
                                             std::uint64_t seed);

// fold id per row; each class is shuffled then dealt round-robin, so fold
// class counts differ by at most one. Errors if any class has fewer rows than
// folds.
std::vector<std::size_t> stratified_fold_ids(const Dataset& ds, std::size_t folds,
                                             std::uint64_t seed);

} // namespace augmentor
