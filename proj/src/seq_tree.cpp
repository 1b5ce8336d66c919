#include "augmentor/seq_tree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_set>

#include "augmentor/error.hpp"
#include "augmentor/rng.hpp"

namespace augmentor {
namespace {

constexpr std::size_t kPredictorBins = 32;
constexpr double kMinGain = 1e-12;

// Per-split-candidate accumulator for one target column. Categorical targets
// count classes (missing is one more class); numeric targets track observed
// moments plus a row count that includes missing.
struct TargetStats {
    std::vector<double> class_count;  // categorical targets
    double n_rows = 0.0;
    double n_obs = 0.0;
    double sum = 0.0;
    double sum_sq = 0.0;

    void add(const TargetStats& o) {
        for (std::size_t i = 0; i < class_count.size(); ++i)
            class_count[i] += o.class_count[i];
        n_rows += o.n_rows;
        n_obs += o.n_obs;
        sum += o.sum;
        sum_sq += o.sum_sq;
    }
    void sub(const TargetStats& o) {
        for (std::size_t i = 0; i < class_count.size(); ++i)
            class_count[i] -= o.class_count[i];
        n_rows -= o.n_rows;
        n_obs -= o.n_obs;
        sum -= o.sum;
        sum_sq -= o.sum_sq;
    }
};

// Gini impurity weighted by row count (categorical) or sum of squared
// deviations over observed values (numeric). Lower is better; gain is the
// parent cost minus the children's.
double node_cost(const TargetStats& s, bool categorical) {
    if (categorical) {
        if (s.n_rows <= 0.0) return 0.0;
        double sq = 0.0;
        for (double c : s.class_count) sq += c * c;
        return s.n_rows - sq / s.n_rows;
    }
    if (s.n_obs <= 0.0) return 0.0;
    return s.sum_sq - s.sum * s.sum / s.n_obs;
}

} // namespace

SeqSynthesizer::SeqSynthesizer(SeqConfig config) : config_(std::move(config)) {
    if (config_.max_depth < 1) throw DataError("seq: max_depth must be >= 1");
    if (config_.min_leaf < 1) throw DataError("seq: min_leaf must be >= 1");
}

std::int32_t SeqSynthesizer::code_of(std::size_t col, double numeric_value,
                                     std::int32_t level_value) const {
    if (train_.schema().at(col).kind == ColumnKind::numeric)
        return static_cast<std::int32_t>(binner_[col].bin(numeric_value));
    if (level_value == kMissingLevel)
        return static_cast<std::int32_t>(train_.schema().at(col).levels.size());
    return level_value;
}

void SeqSynthesizer::fit(const Dataset& train) {
    if (train.rows() < 2) throw DataError("seq: need at least 2 training rows");
    train_ = train;
    const Schema& schema = train_.schema();

    order_.clear();
    if (config_.column_order.empty()) {
        for (std::size_t c = 0; c < schema.size(); ++c)
            if (c != schema.outcome_index()) order_.push_back(c);
        order_.push_back(schema.outcome_index());
    } else {
        if (config_.column_order.size() != schema.size())
            throw DataError("seq: column_order must list every column exactly once");
        std::unordered_set<std::size_t> seen;
        for (const std::string& name : config_.column_order) {
            std::size_t c = schema.index_of(name);
            if (!seen.insert(c).second)
                throw DataError("seq: duplicate column in column_order: " + name);
            order_.push_back(c);
        }
    }

    binner_.assign(schema.size(), Discretizer{});
    codes_.assign(schema.size(), {});
    code_count_.assign(schema.size(), 0);
    for (std::size_t c = 0; c < schema.size(); ++c) {
        if (schema.at(c).kind == ColumnKind::numeric) {
            const auto& vals = train_.numeric_column(c);
            binner_[c] = Discretizer::fit(vals, kPredictorBins, true);
            codes_[c].resize(train_.rows());
            for (std::size_t r = 0; r < train_.rows(); ++r)
                codes_[c][r] = static_cast<std::int32_t>(binner_[c].bin(vals[r]));
            code_count_[c] = static_cast<std::int32_t>(binner_[c].bin_count());
        } else {
            const auto& vals = train_.level_column(c);
            std::int32_t missing_code = static_cast<std::int32_t>(schema.at(c).levels.size());
            codes_[c].resize(train_.rows());
            for (std::size_t r = 0; r < train_.rows(); ++r)
                codes_[c][r] = vals[r] == kMissingLevel ? missing_code : vals[r];
            code_count_[c] = missing_code + 1;
        }
    }

    trees_.clear();
    trees_.resize(order_.size());
    std::vector<std::size_t> prior;
    for (std::size_t pos = 0; pos < order_.size(); ++pos) {
        trees_[pos].column = order_[pos];
        if (pos > 0) build_tree(trees_[pos], prior);
        prior.push_back(order_[pos]);
    }
    fitted_ = true;
}

void SeqSynthesizer::build_tree(Tree& tree, const std::vector<std::size_t>& prior_cols) {
    std::vector<std::uint32_t> all(train_.rows());
    std::iota(all.begin(), all.end(), 0u);
    grow(tree, std::move(all), 0, prior_cols);
}

int SeqSynthesizer::grow(Tree& tree, std::vector<std::uint32_t>&& rows, int depth,
                         const std::vector<std::size_t>& prior_cols) {
    const std::size_t target = tree.column;
    const bool categorical = train_.schema().at(target).kind != ColumnKind::numeric;
    const std::int32_t n_classes = categorical ? code_count_[target] : 0;

    auto stats_of = [&](const std::vector<std::uint32_t>& rs) {
        TargetStats s;
        if (categorical) s.class_count.assign(static_cast<std::size_t>(n_classes), 0.0);
        s.n_rows = static_cast<double>(rs.size());
        if (categorical) {
            for (std::uint32_t r : rs) s.class_count[static_cast<std::size_t>(codes_[target][r])] += 1.0;
        } else {
            const auto& vals = train_.numeric_column(target);
            for (std::uint32_t r : rs) {
                double v = vals[r];
                if (!std::isnan(v)) {
                    s.n_obs += 1.0;
                    s.sum += v;
                    s.sum_sq += v * v;
                }
            }
        }
        return s;
    };

    int node_id = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();

    TargetStats parent = stats_of(rows);
    double parent_cost = node_cost(parent, categorical);

    bool can_split = depth < config_.max_depth &&
                     rows.size() >= 2 * static_cast<std::size_t>(config_.min_leaf) &&
                     parent_cost > kMinGain;

    double best_gain = kMinGain;
    std::size_t best_pred = 0;
    bool best_equals = false;
    std::int32_t best_code = 0;
    bool best_missing_left = false;
    bool found = false;

    if (can_split) {
        for (std::size_t p : prior_cols) {
            const std::int32_t n_codes = code_count_[p];
            std::vector<TargetStats> per_code(static_cast<std::size_t>(n_codes));
            for (auto& s : per_code)
                if (categorical) s.class_count.assign(static_cast<std::size_t>(n_classes), 0.0);
            const auto& pc = codes_[p];
            if (categorical) {
                for (std::uint32_t r : rows) {
                    auto& s = per_code[static_cast<std::size_t>(pc[r])];
                    s.n_rows += 1.0;
                    s.class_count[static_cast<std::size_t>(codes_[target][r])] += 1.0;
                }
            } else {
                const auto& vals = train_.numeric_column(target);
                for (std::uint32_t r : rows) {
                    auto& s = per_code[static_cast<std::size_t>(pc[r])];
                    s.n_rows += 1.0;
                    double v = vals[r];
                    if (!std::isnan(v)) {
                        s.n_obs += 1.0;
                        s.sum += v;
                        s.sum_sq += v * v;
                    }
                }
            }

            auto consider = [&](const TargetStats& left, bool equals,
                                std::int32_t code, bool missing_left) {
                double nl = left.n_rows;
                double nr = parent.n_rows - nl;
                if (nl < config_.min_leaf || nr < config_.min_leaf) return;
                TargetStats right = parent;
                right.sub(left);
                double gain = parent_cost - node_cost(left, categorical) -
                              node_cost(right, categorical);
                if (gain > best_gain) {
                    best_gain = gain;
                    best_pred = p;
                    best_equals = equals;
                    best_code = code;
                    best_missing_left = missing_left;
                    found = true;
                }
            };

            if (train_.schema().at(p).kind == ColumnKind::numeric) {
                std::int32_t value_codes =
                    static_cast<std::int32_t>(binner_[p].value_bin_count());
                const TargetStats* missing =
                    value_codes < n_codes ? &per_code[static_cast<std::size_t>(value_codes)]
                                          : nullptr;
                TargetStats left;
                if (categorical)
                    left.class_count.assign(static_cast<std::size_t>(n_classes), 0.0);
                for (std::int32_t t = 1; t < value_codes; ++t) {
                    left.add(per_code[static_cast<std::size_t>(t - 1)]);
                    if (missing && missing->n_rows > 0.0) {
                        TargetStats with_missing = left;
                        with_missing.add(*missing);
                        consider(with_missing, false, t, true);
                        consider(left, false, t, false);
                    } else {
                        consider(left, false, t, false);
                    }
                }
            } else {
                for (std::int32_t code = 0; code < n_codes; ++code) {
                    const auto& s = per_code[static_cast<std::size_t>(code)];
                    if (s.n_rows == 0.0) continue;
                    consider(s, true, code, false);
                }
            }
        }
    }

    if (!found) {
        tree.nodes[static_cast<std::size_t>(node_id)].pool = std::move(rows);
        return node_id;
    }

    std::vector<std::uint32_t> left_rows, right_rows;
    const auto& pc = codes_[best_pred];
    std::int32_t missing_code =
        train_.schema().at(best_pred).kind == ColumnKind::numeric
            ? static_cast<std::int32_t>(binner_[best_pred].value_bin_count())
            : -1;
    for (std::uint32_t r : rows) {
        std::int32_t code = pc[r];
        bool left;
        if (best_equals) {
            left = code == best_code;
        } else if (code == missing_code) {
            left = best_missing_left;
        } else {
            left = code < best_code;
        }
        (left ? left_rows : right_rows).push_back(r);
    }
    rows.clear();
    rows.shrink_to_fit();

    int left_id = grow(tree, std::move(left_rows), depth + 1, prior_cols);
    int right_id = grow(tree, std::move(right_rows), depth + 1, prior_cols);
    Node& node = tree.nodes[static_cast<std::size_t>(node_id)];
    node.left = left_id;
    node.right = right_id;
    node.pred = static_cast<int>(best_pred);
    node.equals_split = best_equals;
    node.split_code = best_code;
    node.missing_left = best_missing_left;
    return node_id;
}

std::size_t SeqSynthesizer::node_count(std::size_t order_pos) const {
    if (!fitted_ || order_pos >= trees_.size())
        throw DataError("seq: tree index out of range");
    return trees_[order_pos].nodes.size();
}

std::size_t SeqSynthesizer::smallest_leaf_pool() const {
    if (!fitted_) throw DataError("seq: model not fitted");
    std::size_t smallest = train_.rows();
    for (const Tree& tree : trees_)
        for (const Node& node : tree.nodes)
            if (node.left < 0) smallest = std::min(smallest, node.pool.size());
    return smallest;
}

Dataset SeqSynthesizer::generate(std::size_t n, std::uint64_t seed) const {
    if (!fitted_) throw DataError("seq: generate before fit");
    const Schema& schema = train_.schema();
    Rng rng(derive_seed(seed, hash_string_seed("seq_generate")));

    DatasetBuilder builder(schema, Provenance::synthetic);
    std::vector<double> num_row(schema.size(), 0.0);
    std::vector<std::int32_t> lvl_row(schema.size(), kMissingLevel);

    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t pos = 0; pos < order_.size(); ++pos) {
            const Tree& tree = trees_[pos];
            std::size_t col = tree.column;
            std::uint32_t source;
            if (tree.nodes.empty()) {
                source = static_cast<std::uint32_t>(rng.uniform_index(train_.rows()));
            } else {
                int node = 0;
                while (tree.nodes[static_cast<std::size_t>(node)].left >= 0) {
                    const Node& nd = tree.nodes[static_cast<std::size_t>(node)];
                    std::size_t p = static_cast<std::size_t>(nd.pred);
                    std::int32_t code = code_of(p, num_row[p], lvl_row[p]);
                    bool left;
                    if (nd.equals_split) {
                        left = code == nd.split_code;
                    } else if (schema.at(p).kind == ColumnKind::numeric &&
                               code == static_cast<std::int32_t>(binner_[p].value_bin_count())) {
                        left = nd.missing_left;
                    } else {
                        left = code < nd.split_code;
                    }
                    node = left ? nd.left : nd.right;
                }
                const auto& pool = tree.nodes[static_cast<std::size_t>(node)].pool;
                source = pool[rng.uniform_index(pool.size())];
            }
            if (schema.at(col).kind == ColumnKind::numeric)
                num_row[col] = train_.numeric_column(col)[source];
            else
                lvl_row[col] = train_.level_column(col)[source];
        }
        for (std::size_t c = 0; c < schema.size(); ++c) {
            if (schema.at(c).kind == ColumnKind::numeric) {
                if (std::isnan(num_row[c]))
                    builder.set_missing(c);
                else
                    builder.set_numeric(c, num_row[c]);
            } else {
                if (lvl_row[c] == kMissingLevel)
                    builder.set_missing(c);
                else
                    builder.set_level(c, lvl_row[c]);
            }
        }
        builder.end_row();
    }
    return builder.build();
}

} // namespace augmentor
