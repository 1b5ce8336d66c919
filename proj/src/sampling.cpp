#include "augmentor/sampling.hpp"

#include <algorithm>
#include <cmath>

#include "augmentor/rng.hpp"

namespace augmentor {

std::vector<std::size_t> largest_remainder_allocation(const std::vector<std::size_t>& counts,
                                                      std::size_t total) {
    std::size_t sum = 0;
    for (std::size_t c : counts) sum += c;
    if (sum == 0) throw DataError("cannot allocate over empty classes");
    if (total > sum) throw DataError("allocation exceeds available rows");

    std::vector<std::size_t> alloc(counts.size(), 0);
    std::vector<std::pair<double, std::size_t>> remainders;  // (-remainder, index)
    std::size_t assigned = 0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        double exact = static_cast<double>(total) * static_cast<double>(counts[i]) /
                       static_cast<double>(sum);
        alloc[i] = static_cast<std::size_t>(std::floor(exact));
        assigned += alloc[i];
        remainders.emplace_back(-(exact - std::floor(exact)), i);
    }
    std::sort(remainders.begin(), remainders.end());
    for (std::size_t k = 0; assigned < total; ++k) {
        ++alloc[remainders[k].second];
        ++assigned;
    }
    return alloc;
}

namespace {

std::vector<std::vector<std::size_t>> rows_by_class(const Dataset& ds) {
    std::vector<std::vector<std::size_t>> by_class(2);
    const auto& y = ds.outcomes();
    for (std::size_t r = 0; r < y.size(); ++r)
        by_class[static_cast<std::size_t>(y[r])].push_back(r);
    return by_class;
}

// First k elements of a seeded partial Fisher-Yates over `pool`.
std::vector<std::size_t> draw_without_replacement(std::vector<std::size_t> pool,
                                                  std::size_t k, Rng& rng) {
    for (std::size_t i = 0; i < k; ++i) {
        std::size_t j = i + rng.uniform_index(pool.size() - i);
        std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
    return pool;
}

} // namespace

std::vector<std::size_t> stratified_sample_indices(const Dataset& ds, std::size_t n0,
                                                   std::uint64_t seed) {
    if (n0 == 0) throw DataError("sample size must be positive");
    if (n0 > ds.rows()) throw DataError("sample size exceeds dataset size");
    auto by_class = rows_by_class(ds);
    auto alloc = largest_remainder_allocation(
        {by_class[0].size(), by_class[1].size()}, n0);
    for (std::size_t k = 0; k < alloc.size(); ++k)
        if (alloc[k] == 0 && !by_class[k].empty())
            throw DataError("stratified sample would leave a class with 0 rows");

    Rng rng(derive_seed(seed, hash_string_seed("stratified_sample")));
    std::vector<std::size_t> out;
    out.reserve(n0);
    for (std::size_t k = 0; k < by_class.size(); ++k) {
        auto picked = draw_without_replacement(by_class[k], alloc[k], rng);
        std::sort(picked.begin(), picked.end());
        out.insert(out.end(), picked.begin(), picked.end());
    }
    std::sort(out.begin(), out.end());
    return out;
}

Dataset stratified_sample(const Dataset& ds, std::size_t n0, std::uint64_t seed) {
    auto idx = stratified_sample_indices(ds, n0, seed);
    return ds.select(idx);
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> stratified_split_indices(
    const Dataset& ds, double train_fraction, std::uint64_t seed) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw DataError("train fraction must lie strictly between 0 and 1");
    auto by_class = rows_by_class(ds);
    std::size_t total_train = static_cast<std::size_t>(
        std::llround(train_fraction * static_cast<double>(ds.rows())));
    auto train_alloc = largest_remainder_allocation(
        {by_class[0].size(), by_class[1].size()}, total_train);
    for (std::size_t k = 0; k < by_class.size(); ++k) {
        if (by_class[k].empty()) continue;
        if (train_alloc[k] == 0 || train_alloc[k] >= by_class[k].size())
            throw DataError("split leaves a class empty on one side (degenerate class counts)");
    }

    Rng rng(derive_seed(seed, hash_string_seed("train_test_split")));
    std::vector<std::size_t> train, test;
    for (std::size_t k = 0; k < by_class.size(); ++k) {
        std::vector<std::size_t> pool = by_class[k];
        rng.shuffle(pool);
        train.insert(train.end(), pool.begin(),
                     pool.begin() + static_cast<std::ptrdiff_t>(train_alloc[k]));
        test.insert(test.end(), pool.begin() + static_cast<std::ptrdiff_t>(train_alloc[k]),
                    pool.end());
    }
    std::sort(train.begin(), train.end());
    std::sort(test.begin(), test.end());
    return {std::move(train), std::move(test)};
}

std::pair<Dataset, Dataset> train_test_split(const Dataset& ds, double train_fraction,
                                             std::uint64_t seed) {
    auto [train_idx, test_idx] = stratified_split_indices(ds, train_fraction, seed);
    return {ds.select(train_idx), ds.select(test_idx)};
}

std::vector<std::size_t> stratified_fold_ids(const Dataset& ds, std::size_t folds,
                                             std::uint64_t seed) {
    if (folds < 2) throw DataError("need at least 2 folds");
    auto by_class = rows_by_class(ds);
    for (const auto& rows : by_class)
        if (rows.size() < folds)
            throw DataError("a class has fewer rows than folds; stratified " +
                            std::to_string(folds) + "-fold is impossible");
    Rng rng(derive_seed(seed, hash_string_seed("stratified_folds")));
    std::vector<std::size_t> fold_of(ds.rows(), 0);
    for (auto& rows : by_class) {
        rng.shuffle(rows);
        for (std::size_t i = 0; i < rows.size(); ++i) fold_of[rows[i]] = i % folds;
    }
    return fold_of;
}

} // namespace augmentor
