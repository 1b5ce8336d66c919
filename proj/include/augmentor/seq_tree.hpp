#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "augmentor/discretize.hpp"
#include "augmentor/synthesizer.hpp"
#include "augmentor/tabular.hpp"

namespace augmentor {

// Sequential tree synthesizer: columns are generated one at a time, each
// drawn from the leaf pool of a CART fitted on the columns generated before
// it. The first column is resampled from its marginal. Numeric predictors
// are binned for split search; missing values form their own bin/level and
// are reproduced through the pools, so missingness patterns survive.
class SeqSynthesizer final : public Synthesizer {
public:
    explicit SeqSynthesizer(SeqConfig config);

    void fit(const Dataset& train) override;
    Dataset generate(std::size_t n, std::uint64_t seed) const override;
    std::string name() const override { return "seq"; }

    // Exposed for tests: tree size for the column at `order_pos`, and the
    // smallest leaf pool across all trees (the marginal pool for the first
    // column is the whole training set).
    std::size_t node_count(std::size_t order_pos) const;
    std::size_t smallest_leaf_pool() const;

private:
    struct Node {
        int left = -1;             // -1: leaf
        int right = -1;
        int pred = -1;             // schema column of the split predictor
        bool equals_split = false; // categorical: code == split_code goes left
        std::int32_t split_code = 0;  // numeric: code < split_code goes left
        bool missing_left = false;    // numeric predictors only
        std::vector<std::uint32_t> pool;  // training rows in this leaf
    };

    struct Tree {
        std::size_t column = 0;    // target column (schema index)
        std::vector<Node> nodes;   // empty for the first column (marginal)
    };

    std::int32_t code_of(std::size_t col, double numeric_value,
                         std::int32_t level_value) const;
    void build_tree(Tree& tree, const std::vector<std::size_t>& prior_cols);
    int grow(Tree& tree, std::vector<std::uint32_t>&& rows, int depth,
             const std::vector<std::size_t>& prior_cols);

    SeqConfig config_;
    Dataset train_;
    std::vector<std::size_t> order_;             // schema column indices
    std::vector<Discretizer> binner_;            // per schema column (numeric only)
    std::vector<std::vector<std::int32_t>> codes_;  // per schema column, per row
    std::vector<std::int32_t> code_count_;       // per schema column
    std::vector<Tree> trees_;                    // aligned with order_
    bool fitted_ = false;
};

} // namespace augmentor
