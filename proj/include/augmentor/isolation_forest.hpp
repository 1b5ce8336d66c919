#pragma once

#include <cstdint>
#include <vector>

#include "augmentor/tabular.hpp"
#include "augmentor/target_encoding.hpp"

namespace augmentor {

struct EifParams {
    std::size_t trees = 100;
    std::size_t subsample = 256;
    double encoder_smoothing = 20.0;
};

// Isolation forest with oblique (random-hyperplane) splits over an embedded
// view of the rows: numerics mean-imputed, small categoricals one-hot
// (missing = all zeros), high-cardinality categoricals outcome-encoded, the
// outcome itself a 0/1 coordinate. Scores are in (0, 1); larger means easier
// to isolate.
class IsolationForest {
public:
    static IsolationForest fit(const Dataset& ds, const EifParams& params,
                               std::uint64_t seed);

    std::vector<double> anomaly_scores(const Dataset& ds) const;
    std::size_t dimension() const { return dim_; }

private:
    struct Node {
        int left = -1, right = -1;     // -1: leaf
        std::vector<double> w;         // hyperplane normal
        double threshold = 0.0;        // projection split point
        double leaf_adjust = 0.0;      // c(m) for the points that stopped here
    };
    using Tree = std::vector<Node>;

    struct ColumnEmbedding {
        std::size_t column = 0;
        enum class Kind { numeric, onehot, encoded, outcome } kind = Kind::numeric;
        std::size_t offset = 0;
        std::size_t width = 1;
        double impute = 0.0;           // numeric mean over observed values
        TargetEncoder encoder;         // encoded columns
    };

    std::vector<double> embed_row(const Dataset& ds, std::size_t row) const;
    double path_length(const Tree& tree, const std::vector<double>& x) const;

    Schema fit_schema_;
    std::vector<ColumnEmbedding> embeddings_;
    std::size_t dim_ = 0;
    std::vector<Tree> trees_;
    double normalizer_ = 1.0;          // c(subsample size)
    bool fitted_ = false;
};

// Average unsuccessful-search depth of a binary tree over m points; the
// standard isolation-forest normalizing constant.
double average_path_length(std::size_t m);

} // namespace augmentor
