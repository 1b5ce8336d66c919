#include "augmentor/auc.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "augmentor/error.hpp"

namespace augmentor {

double auc_score(const std::vector<double>& scores,
                 const std::vector<std::int32_t>& labels) {
    if (scores.size() != labels.size())
        throw DataError("scores and labels differ in length");
    if (scores.empty()) throw DataError("AUC of an empty sample");

    const std::size_t n = scores.size();
    std::uint64_t n_pos = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (std::isnan(scores[i])) throw DataError("NaN score in AUC input");
        if (labels[i] != 0 && labels[i] != 1) throw DataError("labels must be 0/1");
        n_pos += static_cast<std::uint64_t>(labels[i]);
    }
    const std::uint64_t n_neg = n - n_pos;
    if (n_pos == 0 || n_neg == 0)
        throw DataError("AUC undefined: only one class present");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    // Doubled ranks stay integral under ties: a tie block covering 1-based
    // ranks [i+1, j] contributes (i + 1 + j) per member.
    std::uint64_t rank2_pos_sum = 0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j < n && scores[order[j]] == scores[order[i]]) ++j;
        std::uint64_t rank2 = static_cast<std::uint64_t>(i) + 1 + j;
        for (std::size_t k = i; k < j; ++k)
            if (labels[order[k]] == 1) rank2_pos_sum += rank2;
        i = j;
    }
    std::uint64_t numerator2 = rank2_pos_sum - n_pos * (n_pos + 1);
    return static_cast<double>(numerator2) / static_cast<double>(2 * n_pos * n_neg);
}

} // namespace augmentor
