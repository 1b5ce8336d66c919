#pragma once

#include <cstdint>
#include <vector>

#include "augmentor/discretize.hpp"
#include "augmentor/tabular.hpp"
#include "augmentor/target_encoding.hpp"

namespace augmentor {

struct GbdtParams {
    int max_trees = 200;
    int num_leaves = 15;
    int max_depth = 6;
    int min_data_in_leaf = 10;
    double learning_rate = 0.3;
    // 0 disables early stopping (the tree cap alone limits boosting); when
    // enabled, a stratified validation split of this fraction is carved from
    // the training data and boosting stops after this many stale rounds.
    int early_stopping_rounds = 7;
    double validation_fraction = 0.2;
    std::size_t max_bins = 255;
    double lambda_l2 = 0.0;
    double min_sum_hessian = 1e-3;
    double encoder_smoothing = 20.0;
};

// Binary-logistic boosted trees: leaf-wise growth, histogram splits, missing
// values routed to the gain-optimal child, high-cardinality categoricals
// target-encoded (encoders fitted on the data passed to fit).
class GbdtModel {
public:
    static GbdtModel fit(const Dataset& train, const GbdtParams& params,
                         std::uint64_t seed);

    std::vector<double> predict_scores(const Dataset& ds) const;  // additive margin
    std::vector<double> predict_proba(const Dataset& ds) const;

    const GbdtParams& params() const { return params_; }
    std::size_t tree_count() const { return trees_.size(); }
    double base_score() const { return base_score_; }
    bool early_stopped() const { return early_stopped_; }

private:
    struct Feature {
        std::size_t column = 0;
        bool categorical = false;       // split by level equality
        bool target_encoded = false;
        TargetEncoder encoder;
        Discretizer binner;             // ordered features only
        std::size_t level_count = 0;    // categorical: levels excl. missing bin
        std::size_t bin_count = 0;      // histogram width incl. missing bin
    };
    struct Node {
        bool leaf = true;
        double value = 0.0;             // shrinkage already applied
        int feature = -1;
        std::uint16_t split_bin = 0;    // ordered: left if bin <= split_bin
        bool missing_left = false;      // ordered features only
        int left = -1, right = -1;
    };
    using Tree = std::vector<Node>;

    std::vector<std::uint16_t> bin_row(const Dataset& ds, std::size_t row) const;
    double score_row(const std::vector<std::uint16_t>& bins) const;

    GbdtParams params_;
    Schema fit_schema_;
    std::vector<Feature> features_;
    std::vector<Tree> trees_;
    double base_score_ = 0.0;
    bool early_stopped_ = false;
};

} // namespace augmentor
