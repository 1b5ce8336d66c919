#include "augmentor/gbdt.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "augmentor/rng.hpp"
#include "augmentor/sampling.hpp"

namespace augmentor {

namespace {

constexpr double kMinGain = 1e-12;

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

void validate(const GbdtParams& p) {
    if (p.max_trees < 1) throw DataError("max_trees must be >= 1");
    if (p.num_leaves < 2) throw DataError("num_leaves must be >= 2");
    if (p.max_depth < 1) throw DataError("max_depth must be >= 1");
    if (p.min_data_in_leaf < 1) throw DataError("min_data_in_leaf must be >= 1");
    if (!(p.learning_rate > 0.0)) throw DataError("learning_rate must be positive");
    if (p.early_stopping_rounds < 0) throw DataError("early_stopping_rounds must be >= 0");
    if (!(p.validation_fraction > 0.0 && p.validation_fraction < 1.0))
        throw DataError("validation_fraction must lie in (0, 1)");
    if (p.max_bins < 2 || p.max_bins > 65000) throw DataError("max_bins out of range");
}

struct SplitInfo {
    double gain = 0.0;
    int feature = -1;
    std::uint16_t bin = 0;
    bool missing_left = false;
    bool found() const { return feature >= 0; }
};

struct Histogram {
    std::vector<double> g, h;
    std::vector<std::uint32_t> c;
    void reset(std::size_t bins) {
        g.assign(bins, 0.0);
        h.assign(bins, 0.0);
        c.assign(bins, 0);
    }
};

} // namespace

GbdtModel GbdtModel::fit(const Dataset& train, const GbdtParams& params,
                         std::uint64_t seed) {
    validate(params);
    if (train.rows() < 2) throw DataError("need at least 2 training rows");
    {
        auto counts = train.outcome_counts();
        if (counts[0] == 0 || counts[1] == 0)
            throw DataError("single-class training data");
    }

    GbdtModel model;
    model.params_ = params;
    model.fit_schema_ = train.schema();

    const Schema& schema = train.schema();
    for (std::size_t c = 0; c < schema.size(); ++c) {
        const ColumnSpec& spec = schema.at(c);
        if (spec.role == ColumnRole::outcome) continue;
        Feature f;
        f.column = c;
        if (spec.is_numeric()) {
            f.binner = Discretizer::fit(train.numeric_column(c), params.max_bins, true);
            f.bin_count = f.binner.bin_count();
        } else if (spec.is_high_cardinality()) {
            f.target_encoded = true;
            f.encoder = TargetEncoder::fit(train, c, params.encoder_smoothing);
            std::vector<double> encoded;
            encoded.reserve(train.rows());
            for (std::int32_t lv : train.level_column(c))
                encoded.push_back(f.encoder.encode_level(lv));
            f.binner = Discretizer::fit(encoded, params.max_bins, true);
            f.bin_count = f.binner.bin_count();
        } else {
            f.categorical = true;
            f.level_count = spec.levels.size();
            f.bin_count = f.level_count + 1;  // trailing bin holds missing
        }
        model.features_.push_back(std::move(f));
    }
    if (model.features_.empty()) throw DataError("no predictor columns");

    const std::size_t n = train.rows();
    const std::size_t n_features = model.features_.size();

    std::vector<std::vector<std::uint16_t>> binned(n_features,
                                                   std::vector<std::uint16_t>(n));
    for (std::size_t r = 0; r < n; ++r) {
        auto bins = model.bin_row(train, r);
        for (std::size_t f = 0; f < n_features; ++f) binned[f][r] = bins[f];
    }

    // Early-stopping split; tiny or lopsided inputs fall back to no holdout.
    std::vector<std::uint32_t> grow_rows, val_rows;
    bool use_early_stop = params.early_stopping_rounds > 0;
    if (use_early_stop) {
        try {
            auto [gi, vi] = stratified_split_indices(
                train, 1.0 - params.validation_fraction,
                derive_seed(seed, hash_string_seed("gbdt_holdout")));
            grow_rows.assign(gi.begin(), gi.end());
            val_rows.assign(vi.begin(), vi.end());
        } catch (const DataError&) {
            use_early_stop = false;
        }
    }
    if (!use_early_stop) {
        grow_rows.resize(n);
        for (std::size_t r = 0; r < n; ++r) grow_rows[r] = static_cast<std::uint32_t>(r);
    }

    const auto& outcome = train.outcomes();
    std::vector<double> y(grow_rows.size());
    double pos = 0.0;
    for (std::size_t i = 0; i < grow_rows.size(); ++i) {
        y[i] = static_cast<double>(outcome[grow_rows[i]]);
        pos += y[i];
    }
    double prevalence = pos / static_cast<double>(grow_rows.size());
    prevalence = std::min(std::max(prevalence, 1e-12), 1.0 - 1e-12);
    model.base_score_ = std::log(prevalence / (1.0 - prevalence));

    std::vector<double> margin(grow_rows.size(), model.base_score_);
    std::vector<double> val_margin(val_rows.size(), model.base_score_);
    std::vector<double> grad(grow_rows.size()), hess(grow_rows.size());

    const double lambda = params.lambda_l2;
    auto leaf_objective = [&](double g, double h) { return g * g / (h + lambda + 1e-12); };
    auto leaf_weight = [&](double g, double h) { return -g / (h + lambda + 1e-12); };

    struct BuildNode {
        std::vector<std::uint32_t> rows;
        int depth = 0;
        double g = 0.0, h = 0.0;
        SplitInfo best;
        int tree_index = -1;
    };

    Histogram hist;
    auto compute_best = [&](BuildNode& node) {
        node.best = SplitInfo{};
        if (node.depth >= params.max_depth) return;
        if (node.rows.size() < 2 * static_cast<std::size_t>(params.min_data_in_leaf))
            return;
        double parent_obj = leaf_objective(node.g, node.h);
        for (std::size_t f = 0; f < n_features; ++f) {
            const Feature& feat = model.features_[f];
            hist.reset(feat.bin_count);
            const auto& col = binned[f];
            for (std::uint32_t pos : node.rows) {
                std::uint16_t b = col[grow_rows[pos]];
                hist.g[b] += grad[pos];
                hist.h[b] += hess[pos];
                ++hist.c[b];
            }
            auto consider = [&](double gl, double hl, std::uint32_t cl, std::uint16_t bin,
                                bool missing_left) {
                double gr = node.g - gl;
                double hr = node.h - hl;
                std::uint32_t cr = static_cast<std::uint32_t>(node.rows.size()) - cl;
                if (cl < static_cast<std::uint32_t>(params.min_data_in_leaf) ||
                    cr < static_cast<std::uint32_t>(params.min_data_in_leaf))
                    return;
                if (hl < params.min_sum_hessian || hr < params.min_sum_hessian) return;
                double gain = leaf_objective(gl, hl) + leaf_objective(gr, hr) - parent_obj;
                if (gain > node.best.gain + kMinGain) {
                    node.best.gain = gain;
                    node.best.feature = static_cast<int>(f);
                    node.best.bin = bin;
                    node.best.missing_left = missing_left;
                }
            };
            if (feat.categorical) {
                // one-vs-rest on populated levels (missing is the last bin)
                for (std::size_t b = 0; b < feat.bin_count; ++b) {
                    if (hist.c[b] == 0) continue;
                    consider(hist.g[b], hist.h[b], hist.c[b],
                             static_cast<std::uint16_t>(b), false);
                }
            } else {
                std::size_t miss = feat.binner.missing_bin();
                double gm = hist.g[miss], hm = hist.h[miss];
                std::uint32_t cm = hist.c[miss];
                double gl = 0.0, hl = 0.0;
                std::uint32_t cl = 0;
                for (std::size_t b = 0; b + 1 < feat.binner.value_bin_count(); ++b) {
                    gl += hist.g[b];
                    hl += hist.h[b];
                    cl += hist.c[b];
                    consider(gl, hl, cl, static_cast<std::uint16_t>(b), false);
                    if (cm > 0)
                        consider(gl + gm, hl + hm, cl + cm,
                                 static_cast<std::uint16_t>(b), true);
                }
            }
        }
    };

    double best_val_loss = std::numeric_limits<double>::infinity();
    std::size_t best_iter = 0;

    for (int iter = 0; iter < params.max_trees; ++iter) {
        for (std::size_t i = 0; i < grow_rows.size(); ++i) {
            double p = sigmoid(margin[i]);
            grad[i] = p - y[i];
            hess[i] = std::max(p * (1.0 - p), 1e-16);
        }

        // grad/hess are indexed by position in grow_rows; node row ids are those
        // positions, and binned columns are indexed through grow_rows.
        Tree tree;
        std::vector<BuildNode> build;
        build.reserve(static_cast<std::size_t>(params.num_leaves) * 2);

        BuildNode root;
        root.rows.resize(grow_rows.size());
        for (std::size_t i = 0; i < grow_rows.size(); ++i)
            root.rows[i] = static_cast<std::uint32_t>(i);
        for (std::size_t i = 0; i < root.rows.size(); ++i) {
            root.g += grad[i];
            root.h += hess[i];
        }
        root.tree_index = 0;
        tree.push_back(Node{});
        tree[0].value = params.learning_rate * leaf_weight(root.g, root.h);

        compute_best(root);
        if (!root.best.found()) break;  // nothing left to learn
        build.push_back(std::move(root));

        auto cmp = [&](std::size_t a, std::size_t b) {
            return build[a].best.gain < build[b].best.gain;
        };
        std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(cmp)> heap(cmp);
        heap.push(0);
        int leaves = 1;

        while (leaves < params.num_leaves && !heap.empty()) {
            std::size_t ni = heap.top();
            heap.pop();
            BuildNode node = std::move(build[ni]);
            if (!node.best.found()) continue;

            const Feature& feat = model.features_[static_cast<std::size_t>(node.best.feature)];
            const auto& col = binned[static_cast<std::size_t>(node.best.feature)];
            auto goes_left = [&](std::uint32_t pos) {
                std::uint16_t b = col[grow_rows[pos]];
                if (feat.categorical) return b == node.best.bin;
                if (feat.binner.has_missing_bin() && b == feat.binner.missing_bin())
                    return node.best.missing_left;
                return b <= node.best.bin;
            };

            BuildNode left, right;
            left.depth = right.depth = node.depth + 1;
            for (std::uint32_t pos : node.rows) {
                if (goes_left(pos)) {
                    left.rows.push_back(pos);
                    left.g += grad[pos];
                    left.h += hess[pos];
                } else {
                    right.rows.push_back(pos);
                    right.g += grad[pos];
                    right.h += hess[pos];
                }
            }

            left.tree_index = static_cast<int>(tree.size());
            tree.push_back(Node{});
            tree.back().value = params.learning_rate * leaf_weight(left.g, left.h);
            right.tree_index = static_cast<int>(tree.size());
            tree.push_back(Node{});
            tree.back().value = params.learning_rate * leaf_weight(right.g, right.h);
            // indices, not references: the push_backs above may reallocate
            Node& parent = tree[static_cast<std::size_t>(node.tree_index)];
            parent.leaf = false;
            parent.feature = node.best.feature;
            parent.split_bin = node.best.bin;
            parent.missing_left = node.best.missing_left;
            parent.left = left.tree_index;
            parent.right = right.tree_index;
            ++leaves;

            compute_best(left);
            compute_best(right);
            build.push_back(std::move(left));
            if (build.back().best.found()) heap.push(build.size() - 1);
            build.push_back(std::move(right));
            if (build.back().best.found()) heap.push(build.size() - 1);
        }

        // apply leaf values to grow margins
        for (const BuildNode& bn : build) {
            if (!tree[static_cast<std::size_t>(bn.tree_index)].leaf) continue;
            double v = tree[static_cast<std::size_t>(bn.tree_index)].value;
            for (std::uint32_t pos : bn.rows) margin[pos] += v;
        }

        model.trees_.push_back(std::move(tree));

        if (use_early_stop) {
            const Tree& t = model.trees_.back();
            double loss = 0.0;
            for (std::size_t i = 0; i < val_rows.size(); ++i) {
                std::size_t node = 0;
                while (!t[node].leaf) {
                    const Node& nd = t[node];
                    const Feature& feat = model.features_[static_cast<std::size_t>(nd.feature)];
                    std::uint16_t b = binned[static_cast<std::size_t>(nd.feature)][val_rows[i]];
                    bool left;
                    if (feat.categorical) left = b == nd.split_bin;
                    else if (feat.binner.has_missing_bin() && b == feat.binner.missing_bin())
                        left = nd.missing_left;
                    else left = b <= nd.split_bin;
                    node = static_cast<std::size_t>(left ? nd.left : nd.right);
                }
                val_margin[i] += t[node].value;
                double p = sigmoid(val_margin[i]);
                p = std::min(std::max(p, 1e-15), 1.0 - 1e-15);
                double yy = static_cast<double>(outcome[val_rows[i]]);
                loss -= yy * std::log(p) + (1.0 - yy) * std::log(1.0 - p);
            }
            loss /= static_cast<double>(val_rows.size());
            if (loss < best_val_loss - 1e-12) {
                best_val_loss = loss;
                best_iter = model.trees_.size() - 1;
            } else if (model.trees_.size() - 1 - best_iter >=
                       static_cast<std::size_t>(params.early_stopping_rounds)) {
                break;
            }
        }
    }

    if (use_early_stop && !model.trees_.empty() &&
        best_iter + 1 < model.trees_.size()) {
        model.trees_.resize(best_iter + 1);
        model.early_stopped_ = true;
    }
    return model;
}

std::vector<std::uint16_t> GbdtModel::bin_row(const Dataset& ds, std::size_t row) const {
    std::vector<std::uint16_t> bins(features_.size());
    for (std::size_t f = 0; f < features_.size(); ++f) {
        const Feature& feat = features_[f];
        const ColumnSpec& spec = ds.schema().at(feat.column);
        if (feat.categorical) {
            if (spec.is_numeric())
                throw DataError("column '" + spec.name + "' changed kind since fit");
            std::int32_t lv = ds.level_at(row, feat.column);
            std::size_t b;
            if (lv == kMissingLevel) b = feat.level_count;                 // missing bin
            else if (static_cast<std::size_t>(lv) < feat.level_count) b = static_cast<std::size_t>(lv);
            else b = feat.level_count + 1;                                 // unseen level
            bins[f] = static_cast<std::uint16_t>(b);
        } else if (feat.target_encoded) {
            if (spec.is_numeric())
                throw DataError("column '" + spec.name + "' changed kind since fit");
            double enc = feat.encoder.encode_level(ds.level_at(row, feat.column));
            bins[f] = static_cast<std::uint16_t>(feat.binner.bin(enc));
        } else {
            if (!spec.is_numeric())
                throw DataError("column '" + spec.name + "' changed kind since fit");
            bins[f] = static_cast<std::uint16_t>(feat.binner.bin(ds.numeric_at(row, feat.column)));
        }
    }
    return bins;
}

double GbdtModel::score_row(const std::vector<std::uint16_t>& bins) const {
    double score = base_score_;
    for (const Tree& t : trees_) {
        std::size_t node = 0;
        while (!t[node].leaf) {
            const Node& nd = t[node];
            const Feature& feat = features_[static_cast<std::size_t>(nd.feature)];
            std::uint16_t b = bins[static_cast<std::size_t>(nd.feature)];
            bool left;
            if (feat.categorical) {
                left = b == nd.split_bin;
            } else if (feat.binner.has_missing_bin() && b == feat.binner.missing_bin()) {
                left = nd.missing_left;
            } else {
                left = b <= nd.split_bin;
            }
            node = static_cast<std::size_t>(left ? nd.left : nd.right);
        }
        score += t[node].value;
    }
    return score;
}

std::vector<double> GbdtModel::predict_scores(const Dataset& ds) const {
    if (trees_.empty() && features_.empty())
        throw DataError("predicting with an unfitted model");
    if (!ds.schema().same_shape(fit_schema_))
        throw DataError("dataset schema does not match the fitted model");
    std::vector<double> out(ds.rows());
    for (std::size_t r = 0; r < ds.rows(); ++r) out[r] = score_row(bin_row(ds, r));
    return out;
}

std::vector<double> GbdtModel::predict_proba(const Dataset& ds) const {
    std::vector<double> out = predict_scores(ds);
    for (double& v : out) v = sigmoid(v);
    return out;
}

} // namespace augmentor
