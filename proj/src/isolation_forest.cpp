#include "augmentor/isolation_forest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "augmentor/error.hpp"
#include "augmentor/rng.hpp"

namespace augmentor {

double average_path_length(std::size_t m) {
    if (m <= 1) return 0.0;
    if (m == 2) return 1.0;
    constexpr double kEulerGamma = 0.57721566490153286;
    double dm = static_cast<double>(m);
    double harmonic = std::log(dm - 1.0) + kEulerGamma;
    return 2.0 * harmonic - 2.0 * (dm - 1.0) / dm;
}

std::vector<double> IsolationForest::embed_row(const Dataset& ds, std::size_t row) const {
    std::vector<double> x(dim_, 0.0);
    for (const ColumnEmbedding& e : embeddings_) {
        switch (e.kind) {
            case ColumnEmbedding::Kind::numeric: {
                double v = ds.numeric_at(row, e.column);
                x[e.offset] = std::isnan(v) ? e.impute : v;
                break;
            }
            case ColumnEmbedding::Kind::onehot: {
                std::int32_t lv = ds.level_at(row, e.column);
                if (lv >= 0 && static_cast<std::size_t>(lv) < e.width)
                    x[e.offset + static_cast<std::size_t>(lv)] = 1.0;
                break;
            }
            case ColumnEmbedding::Kind::encoded: {
                x[e.offset] = e.encoder.encode_level(ds.level_at(row, e.column));
                break;
            }
            case ColumnEmbedding::Kind::outcome: {
                x[e.offset] = static_cast<double>(ds.outcome_at(row));
                break;
            }
        }
    }
    return x;
}

IsolationForest IsolationForest::fit(const Dataset& ds, const EifParams& params,
                                     std::uint64_t seed) {
    if (ds.rows() == 0) throw DataError("isolation forest: empty data");
    if (params.trees == 0 || params.subsample < 2)
        throw DataError("isolation forest: need trees >= 1 and subsample >= 2");

    IsolationForest forest;
    forest.fit_schema_ = ds.schema();
    const Schema& schema = ds.schema();
    std::size_t offset = 0;
    for (std::size_t c = 0; c < schema.size(); ++c) {
        const ColumnSpec& spec = schema.at(c);
        ColumnEmbedding e;
        e.column = c;
        e.offset = offset;
        if (spec.role == ColumnRole::outcome) {
            e.kind = ColumnEmbedding::Kind::outcome;
        } else if (spec.kind == ColumnKind::numeric) {
            e.kind = ColumnEmbedding::Kind::numeric;
            double sum = 0.0;
            std::size_t n_obs = 0;
            for (double v : ds.numeric_column(c)) {
                if (!std::isnan(v)) {
                    sum += v;
                    ++n_obs;
                }
            }
            e.impute = n_obs > 0 ? sum / static_cast<double>(n_obs) : 0.0;
        } else if (spec.is_high_cardinality()) {
            e.kind = ColumnEmbedding::Kind::encoded;
            e.encoder = TargetEncoder::fit(ds, c, params.encoder_smoothing);
        } else {
            e.kind = ColumnEmbedding::Kind::onehot;
            e.width = spec.levels.size();
        }
        offset += e.width;
        forest.embeddings_.push_back(std::move(e));
    }
    forest.dim_ = offset;

    std::vector<std::vector<double>> X(ds.rows());
    for (std::size_t r = 0; r < ds.rows(); ++r) X[r] = forest.embed_row(ds, r);

    const std::size_t psi = std::min(params.subsample, ds.rows());
    forest.normalizer_ = std::max(average_path_length(psi), 1e-12);
    const int depth_cap = static_cast<int>(
        std::ceil(std::log2(static_cast<double>(std::max<std::size_t>(psi, 2)))));

    forest.trees_.resize(params.trees);
    for (std::size_t ti = 0; ti < params.trees; ++ti) {
        Rng rng(derive_seed(seed, hash_string_seed("eif_tree"), ti));

        // partial Fisher-Yates: first psi slots become the subsample
        std::vector<std::size_t> idx(ds.rows());
        std::iota(idx.begin(), idx.end(), 0u);
        for (std::size_t i = 0; i < psi; ++i) {
            std::size_t j = i + rng.uniform_index(idx.size() - i);
            std::swap(idx[i], idx[j]);
        }
        idx.resize(psi);

        Tree& tree = forest.trees_[ti];
        // explicit stack to keep node ids stable
        struct Item {
            std::vector<std::size_t> rows;
            int depth;
            int node;
        };
        tree.push_back(Node{});
        std::vector<Item> stack{{std::move(idx), 0, 0}};
        while (!stack.empty()) {
            Item item = std::move(stack.back());
            stack.pop_back();
            Node& placeholder = tree[static_cast<std::size_t>(item.node)];
            if (item.depth >= depth_cap || item.rows.size() <= 1) {
                placeholder.leaf_adjust = average_path_length(item.rows.size());
                continue;
            }
            std::vector<double> w(forest.dim_);
            for (double& wi : w) wi = rng.normal();
            double zmin = 1e300, zmax = -1e300;
            std::vector<double> z(item.rows.size());
            for (std::size_t i = 0; i < item.rows.size(); ++i) {
                const auto& xi = X[item.rows[i]];
                double dot = 0.0;
                for (std::size_t dmi = 0; dmi < forest.dim_; ++dmi) dot += w[dmi] * xi[dmi];
                z[i] = dot;
                zmin = std::min(zmin, dot);
                zmax = std::max(zmax, dot);
            }
            if (!(zmax > zmin)) {  // coincident points: nothing to isolate
                placeholder.leaf_adjust = average_path_length(item.rows.size());
                continue;
            }
            double t = rng.uniform(zmin, zmax);
            std::vector<std::size_t> left, right;
            for (std::size_t i = 0; i < item.rows.size(); ++i)
                (z[i] < t ? left : right).push_back(item.rows[i]);
            if (left.empty() || right.empty()) {
                placeholder.leaf_adjust = average_path_length(item.rows.size());
                continue;
            }
            int li = static_cast<int>(tree.size());
            tree.push_back(Node{});
            int ri = static_cast<int>(tree.size());
            tree.push_back(Node{});
            Node& node = tree[static_cast<std::size_t>(item.node)];
            node.left = li;
            node.right = ri;
            node.w = std::move(w);
            node.threshold = t;
            stack.push_back(Item{std::move(right), item.depth + 1, ri});
            stack.push_back(Item{std::move(left), item.depth + 1, li});
        }
    }
    forest.fitted_ = true;
    return forest;
}

double IsolationForest::path_length(const Tree& tree, const std::vector<double>& x) const {
    std::size_t node = 0;
    double depth = 0.0;
    while (tree[node].left >= 0) {
        const Node& nd = tree[node];
        double dot = 0.0;
        for (std::size_t d = 0; d < dim_; ++d) dot += nd.w[d] * x[d];
        node = static_cast<std::size_t>(dot < nd.threshold ? nd.left : nd.right);
        depth += 1.0;
    }
    return depth + tree[node].leaf_adjust;
}

std::vector<double> IsolationForest::anomaly_scores(const Dataset& ds) const {
    if (!fitted_) throw DataError("isolation forest: scoring before fit");
    if (!ds.schema().same_shape(fit_schema_))
        throw DataError("isolation forest: dataset schema does not match fit");
    std::vector<double> out(ds.rows());
    for (std::size_t r = 0; r < ds.rows(); ++r) {
        std::vector<double> x = embed_row(ds, r);
        double sum = 0.0;
        for (const Tree& t : trees_) sum += path_length(t, x);
        double avg = sum / static_cast<double>(trees_.size());
        out[r] = std::exp2(-avg / normalizer_);
    }
    return out;
}

} // namespace augmentor
