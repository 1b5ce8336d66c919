#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace augmentor {

enum class Tail { greater, less };

Tail tail_from_string(const std::string& s);
std::string to_string(Tail tail);

struct PermutationTestResult {
    double observed_mean_diff = 0.0;
    double p_value = 0.0;
    std::uint64_t enumerated = 0;  // sign assignments examined
    std::uint64_t favorable = 0;   // assignments at least as extreme
    Tail tail = Tail::greater;
};

// Exact one-sided test for the mean of paired differences a - b: every one of
// the 2^k sign assignments is enumerated and p is the exact fraction whose
// mean is at least (tail greater) or at most (tail less) the observed one.
// Refuses more than 20 pairs; use the Monte Carlo variant for larger k.
PermutationTestResult exact_permutation_test(
    const std::vector<std::pair<double, double>>& pairs, Tail tail);

// Random sign assignments instead of full enumeration, for k > 20. The
// identity assignment is always included, so p > 0.
PermutationTestResult mc_permutation_test(
    const std::vector<std::pair<double, double>>& pairs, Tail tail,
    std::uint64_t draws, std::uint64_t seed);

} // namespace augmentor
