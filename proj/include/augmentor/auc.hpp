#pragma once

#include <cstdint>
#include <vector>

namespace augmentor {

// Mann-Whitney AUC: (#concordant + 0.5 * #ties) / (#pos * #neg), computed via
// tied ranks with an integer numerator so it agrees bit-for-bit with pair
// counting. Labels are 0/1; errors when a class is absent or a score is NaN.
double auc_score(const std::vector<double>& scores, const std::vector<std::int32_t>& labels);

} // namespace augmentor
