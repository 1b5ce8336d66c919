#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "augmentor/discretize.hpp"
#include "augmentor/synthesizer.hpp"
#include "augmentor/tabular.hpp"
#include "augmentor/target_encoding.hpp"

namespace augmentor {

// Discrete Bayesian network synthesizer. Columns are coded to small
// alphabets (numeric: equal-frequency bins; categorical: level ids;
// high-cardinality categorical: outcome-encoded then binned). Structure is
// found by restarted hill-climbing on the BIC score, parameters are
// posterior-mean tables under a symmetric Dirichlet prior, and rows are
// drawn by ancestral sampling and mapped back to the original value space.
class BayesNetSynthesizer final : public Synthesizer {
public:
    BayesNetSynthesizer(BnConfig config, std::uint64_t fit_seed);

    void fit(const Dataset& train) override;
    Dataset generate(std::size_t n, std::uint64_t seed) const override;
    std::string name() const override { return "bn"; }

    // Fitted structure as an adjacency list: parents[c] holds the schema
    // column indices of c's parents (sorted). Exposed for tests.
    const std::vector<std::vector<std::size_t>>& parents() const;
    double network_score() const;

    // Total BIC of a structure on this synthesizer's coded training data.
    // Exposed so tests can score alternative structures.
    double score_structure(const std::vector<std::vector<std::size_t>>& parents) const;

private:
    enum class Coding { numeric_bins, levels, encoded_bins };

    struct ColumnCoder {
        Coding coding = Coding::levels;
        std::int32_t cardinality = 0;
        Discretizer binner;                    // numeric_bins / encoded_bins
        TargetEncoder encoder;                 // encoded_bins
        bool has_missing = false;
        // encoded_bins: original level ids observed in each code's bin
        std::vector<std::vector<std::int32_t>> level_pools;
    };

    double family_score(std::size_t node, const std::vector<std::size_t>& parents) const;
    std::vector<std::vector<std::size_t>> climb(std::vector<std::vector<std::size_t>> parents,
                                                double& score_out) const;

    BnConfig config_;
    std::uint64_t fit_seed_ = 0;
    Schema schema_;
    std::vector<ColumnCoder> coder_;
    std::vector<std::vector<std::int32_t>> codes_;  // per column, per training row
    std::size_t train_rows_ = 0;
    std::vector<std::vector<std::size_t>> parents_;
    double score_ = 0.0;
    // CPTs: per node, parent configuration index -> probability vector over
    // the node's codes. Configurations absent from training fall back to a
    // uniform draw, which equals the posterior mean under the prior.
    std::vector<std::unordered_map<std::int64_t, std::vector<double>>> cpt_;
    std::vector<std::vector<std::int64_t>> cpt_stride_;  // aligned with parents_[c]
    std::vector<std::size_t> sample_order_;              // topological
    mutable std::map<std::pair<std::size_t, std::vector<std::size_t>>, double> family_cache_;
    bool fitted_ = false;
};

} // namespace augmentor
