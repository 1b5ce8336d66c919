#include "augmentor/bayes_net.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "augmentor/error.hpp"
#include "augmentor/rng.hpp"

namespace augmentor {
namespace {

// True when a directed path u ~> v exists. `parents` is the adjacency as
// parent lists; children are derived on the fly (graphs here are tiny).
bool has_path(const std::vector<std::vector<std::size_t>>& parents,
              std::size_t u, std::size_t v) {
    std::vector<std::size_t> stack{u};
    std::vector<bool> seen(parents.size(), false);
    seen[u] = true;
    while (!stack.empty()) {
        std::size_t x = stack.back();
        stack.pop_back();
        if (x == v) return true;
        for (std::size_t y = 0; y < parents.size(); ++y) {
            if (seen[y]) continue;
            const auto& p = parents[y];
            if (std::find(p.begin(), p.end(), x) != p.end()) {
                seen[y] = true;
                stack.push_back(y);
            }
        }
    }
    return false;
}

void insert_sorted(std::vector<std::size_t>& v, std::size_t x) {
    v.insert(std::upper_bound(v.begin(), v.end(), x), x);
}

void erase_value(std::vector<std::size_t>& v, std::size_t x) {
    v.erase(std::find(v.begin(), v.end(), x));
}

} // namespace

BayesNetSynthesizer::BayesNetSynthesizer(BnConfig config, std::uint64_t fit_seed)
    : config_(std::move(config)), fit_seed_(fit_seed) {
    if (config_.numeric_bins < 2) throw DataError("bn: numeric_bins must be >= 2");
    if (config_.max_parents < 0) throw DataError("bn: max_parents must be >= 0");
    if (config_.restarts < 1) throw DataError("bn: restarts must be >= 1");
    if (!(config_.dirichlet_alpha > 0.0)) throw DataError("bn: dirichlet_alpha must be > 0");
}

void BayesNetSynthesizer::fit(const Dataset& train) {
    if (train.rows() < 2) throw DataError("bn: need at least 2 training rows");
    schema_ = train.schema();
    train_rows_ = train.rows();
    const std::size_t n_cols = schema_.size();

    coder_.assign(n_cols, ColumnCoder{});
    codes_.assign(n_cols, {});
    family_cache_.clear();

    for (std::size_t c = 0; c < n_cols; ++c) {
        ColumnCoder& coder = coder_[c];
        coder.has_missing = train.column_has_missing(c);
        codes_[c].resize(train_rows_);
        if (schema_.at(c).kind == ColumnKind::numeric) {
            coder.coding = Coding::numeric_bins;
            const auto& vals = train.numeric_column(c);
            coder.binner = Discretizer::fit(vals, config_.numeric_bins, coder.has_missing);
            for (std::size_t r = 0; r < train_rows_; ++r)
                codes_[c][r] = static_cast<std::int32_t>(coder.binner.bin(vals[r]));
            coder.cardinality = static_cast<std::int32_t>(coder.binner.bin_count());
        } else if (schema_.at(c).kind == ColumnKind::categorical &&
                   schema_.at(c).is_high_cardinality()) {
            coder.coding = Coding::encoded_bins;
            coder.encoder = TargetEncoder::fit(train, c, config_.encoder_smoothing);
            const auto& lvls = train.level_column(c);
            std::vector<double> encoded(train_rows_);
            for (std::size_t r = 0; r < train_rows_; ++r)
                encoded[r] = coder.encoder.encode_level(lvls[r]);
            coder.binner = Discretizer::fit(encoded, config_.numeric_bins, false);
            coder.cardinality = static_cast<std::int32_t>(coder.binner.bin_count());
            coder.level_pools.assign(static_cast<std::size_t>(coder.cardinality), {});
            for (std::size_t r = 0; r < train_rows_; ++r) {
                auto code = static_cast<std::int32_t>(coder.binner.bin(encoded[r]));
                codes_[c][r] = code;
                coder.level_pools[static_cast<std::size_t>(code)].push_back(lvls[r]);
            }
        } else {
            coder.coding = Coding::levels;
            const auto& lvls = train.level_column(c);
            auto missing_code = static_cast<std::int32_t>(schema_.at(c).levels.size());
            for (std::size_t r = 0; r < train_rows_; ++r)
                codes_[c][r] = lvls[r] == kMissingLevel ? missing_code : lvls[r];
            coder.cardinality = missing_code + (coder.has_missing ? 1 : 0);
        }
        if (coder.cardinality < 1) throw DataError("bn: empty column alphabet");
    }

    // Restarted hill climb: first pass from the empty graph, later passes
    // from random DAGs. Best final score wins; earlier restarts win ties.
    parents_.clear();
    double best_score = -std::numeric_limits<double>::infinity();
    for (int restart = 0; restart < config_.restarts; ++restart) {
        std::vector<std::vector<std::size_t>> init(n_cols);
        if (restart > 0) {
            Rng rng(derive_seed(fit_seed_, 7000 + static_cast<std::uint64_t>(restart)));
            std::vector<std::size_t> order(n_cols);
            std::iota(order.begin(), order.end(), 0u);
            rng.shuffle(order);
            for (std::size_t j = 1; j < n_cols; ++j) {
                for (std::size_t i = 0; i < j; ++i) {
                    if (init[order[j]].size() >=
                        static_cast<std::size_t>(config_.max_parents))
                        break;
                    if (rng.bernoulli(0.25)) insert_sorted(init[order[j]], order[i]);
                }
            }
        }
        double score = 0.0;
        auto result = climb(std::move(init), score);
        if (score > best_score) {
            best_score = score;
            parents_ = std::move(result);
        }
    }
    score_ = best_score;

    // Posterior-mean conditional tables for the winning structure.
    cpt_.assign(n_cols, {});
    cpt_stride_.assign(n_cols, {});
    const double alpha = config_.dirichlet_alpha;
    for (std::size_t c = 0; c < n_cols; ++c) {
        const auto& pars = parents_[c];
        auto& strides = cpt_stride_[c];
        strides.resize(pars.size());
        std::int64_t stride = 1;
        for (std::size_t k = 0; k < pars.size(); ++k) {
            strides[k] = stride;
            stride *= coder_[pars[k]].cardinality;
        }
        const auto r = static_cast<std::size_t>(coder_[c].cardinality);
        std::unordered_map<std::int64_t, std::vector<double>> counts;
        for (std::size_t row = 0; row < train_rows_; ++row) {
            std::int64_t cfg = 0;
            for (std::size_t k = 0; k < pars.size(); ++k)
                cfg += strides[k] * codes_[pars[k]][row];
            auto& vec = counts[cfg];
            if (vec.empty()) vec.assign(r, 0.0);
            vec[static_cast<std::size_t>(codes_[c][row])] += 1.0;
        }
        for (auto& [cfg, vec] : counts) {
            double total = std::accumulate(vec.begin(), vec.end(), 0.0);
            for (double& p : vec) p = (p + alpha) / (total + alpha * static_cast<double>(r));
        }
        cpt_[c] = std::move(counts);
    }

    // Ancestral order, smallest column index first among ready nodes.
    sample_order_.clear();
    std::vector<std::size_t> remaining_parents(n_cols);
    for (std::size_t c = 0; c < n_cols; ++c) remaining_parents[c] = parents_[c].size();
    std::vector<bool> emitted(n_cols, false);
    while (sample_order_.size() < n_cols) {
        bool progress = false;
        for (std::size_t c = 0; c < n_cols; ++c) {
            if (emitted[c] || remaining_parents[c] > 0) continue;
            emitted[c] = true;
            sample_order_.push_back(c);
            for (std::size_t y = 0; y < n_cols; ++y)
                if (!emitted[y] &&
                    std::find(parents_[y].begin(), parents_[y].end(), c) != parents_[y].end())
                    --remaining_parents[y];
            progress = true;
            break;
        }
        if (!progress) throw DataError("bn: learned structure is cyclic");
    }
    fitted_ = true;
}

double BayesNetSynthesizer::family_score(std::size_t node,
                                         const std::vector<std::size_t>& parents) const {
    auto key = std::make_pair(node, parents);
    if (auto it = family_cache_.find(key); it != family_cache_.end()) return it->second;

    const auto r = static_cast<std::size_t>(coder_[node].cardinality);
    std::vector<std::int64_t> strides(parents.size());
    std::int64_t stride = 1;
    double q = 1.0;
    for (std::size_t k = 0; k < parents.size(); ++k) {
        strides[k] = stride;
        stride *= coder_[parents[k]].cardinality;
        q *= static_cast<double>(coder_[parents[k]].cardinality);
    }
    std::unordered_map<std::int64_t, std::vector<double>> counts;
    for (std::size_t row = 0; row < train_rows_; ++row) {
        std::int64_t cfg = 0;
        for (std::size_t k = 0; k < parents.size(); ++k)
            cfg += strides[k] * codes_[parents[k]][row];
        auto& vec = counts[cfg];
        if (vec.empty()) vec.assign(r, 0.0);
        vec[static_cast<std::size_t>(codes_[node][row])] += 1.0;
    }
    double ll = 0.0;
    for (const auto& [cfg, vec] : counts) {
        double total = std::accumulate(vec.begin(), vec.end(), 0.0);
        for (double n : vec)
            if (n > 0.0) ll += n * std::log(n / total);
    }
    double penalty = 0.5 * std::log(static_cast<double>(train_rows_)) * q *
                     (static_cast<double>(r) - 1.0);
    double score = ll - penalty;
    family_cache_.emplace(std::move(key), score);
    return score;
}

double BayesNetSynthesizer::score_structure(
    const std::vector<std::vector<std::size_t>>& parents) const {
    if (parents.size() != schema_.size())
        throw DataError("bn: structure size does not match column count");
    double total = 0.0;
    for (std::size_t c = 0; c < parents.size(); ++c) {
        std::vector<std::size_t> sorted = parents[c];
        std::sort(sorted.begin(), sorted.end());
        total += family_score(c, sorted);
    }
    return total;
}

std::vector<std::vector<std::size_t>> BayesNetSynthesizer::climb(
    std::vector<std::vector<std::size_t>> parents, double& score_out) const {
    const std::size_t n = parents.size();
    std::vector<double> fam(n);
    double total = 0.0;
    for (std::size_t c = 0; c < n; ++c) {
        fam[c] = family_score(c, parents[c]);
        total += fam[c];
    }

    const auto max_parents = static_cast<std::size_t>(config_.max_parents);
    while (true) {
        double eps = 1e-9 * (1.0 + std::abs(total));
        double best_gain = eps;
        int best_kind = -1;  // 0 add, 1 remove, 2 reverse
        std::size_t best_u = 0, best_v = 0;

        auto is_parent = [&](std::size_t u, std::size_t v) {
            return std::find(parents[v].begin(), parents[v].end(), u) != parents[v].end();
        };
        auto try_move = [&](int kind, std::size_t u, std::size_t v, double gain) {
            if (gain > best_gain) {
                best_gain = gain;
                best_kind = kind;
                best_u = u;
                best_v = v;
            }
        };

        // Additions, both orientations per pair, lower-to-higher first.
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                for (auto [u, v] : {std::pair{i, j}, std::pair{j, i}}) {
                    if (is_parent(u, v) || is_parent(v, u)) continue;
                    if (parents[v].size() >= max_parents) continue;
                    if (has_path(parents, v, u)) continue;  // would close a cycle
                    std::vector<std::size_t> cand = parents[v];
                    insert_sorted(cand, u);
                    try_move(0, u, v, family_score(v, cand) - fam[v]);
                }
            }
        }
        // Removals.
        for (std::size_t v = 0; v < n; ++v) {
            for (std::size_t u : parents[v]) {
                std::vector<std::size_t> cand = parents[v];
                erase_value(cand, u);
                try_move(1, u, v, family_score(v, cand) - fam[v]);
            }
        }
        // Reversals: u->v becomes v->u.
        for (std::size_t v = 0; v < n; ++v) {
            for (std::size_t u : parents[v]) {
                if (parents[u].size() >= max_parents) continue;
                std::vector<std::size_t> without = parents[v];
                erase_value(without, u);
                // Cycle check on the graph without u->v.
                std::vector<std::vector<std::size_t>> tmp = parents;
                tmp[v] = without;
                if (has_path(tmp, u, v)) continue;
                std::vector<std::size_t> u_cand = parents[u];
                insert_sorted(u_cand, v);
                double gain = (family_score(v, without) - fam[v]) +
                              (family_score(u, u_cand) - fam[u]);
                try_move(2, u, v, gain);
            }
        }

        if (best_kind < 0) break;
        if (best_kind == 0) {
            insert_sorted(parents[best_v], best_u);
            double nv = family_score(best_v, parents[best_v]);
            total += nv - fam[best_v];
            fam[best_v] = nv;
        } else if (best_kind == 1) {
            erase_value(parents[best_v], best_u);
            double nv = family_score(best_v, parents[best_v]);
            total += nv - fam[best_v];
            fam[best_v] = nv;
        } else {
            erase_value(parents[best_v], best_u);
            insert_sorted(parents[best_u], best_v);
            double nv = family_score(best_v, parents[best_v]);
            double nu = family_score(best_u, parents[best_u]);
            total += (nv - fam[best_v]) + (nu - fam[best_u]);
            fam[best_v] = nv;
            fam[best_u] = nu;
        }
    }
    score_out = total;
    return parents;
}

const std::vector<std::vector<std::size_t>>& BayesNetSynthesizer::parents() const {
    if (!fitted_) throw DataError("bn: structure requested before fit");
    return parents_;
}

double BayesNetSynthesizer::network_score() const {
    if (!fitted_) throw DataError("bn: score requested before fit");
    return score_;
}

Dataset BayesNetSynthesizer::generate(std::size_t n, std::uint64_t seed) const {
    if (!fitted_) throw DataError("bn: generate before fit");
    Rng rng(derive_seed(seed, hash_string_seed("bn_generate")));
    DatasetBuilder builder(schema_, Provenance::synthetic);

    const std::size_t n_cols = schema_.size();
    std::vector<std::int32_t> code_row(n_cols, 0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t c : sample_order_) {
            std::int64_t cfg = 0;
            const auto& pars = parents_[c];
            const auto& strides = cpt_stride_[c];
            for (std::size_t k = 0; k < pars.size(); ++k)
                cfg += strides[k] * code_row[pars[k]];
            const auto r = static_cast<std::size_t>(coder_[c].cardinality);
            double u = rng.uniform();
            std::size_t drawn = r - 1;
            auto it = cpt_[c].find(cfg);
            if (it == cpt_[c].end()) {
                // Parent configuration unseen in training: posterior mean is
                // uniform over the alphabet.
                drawn = std::min(static_cast<std::size_t>(u * static_cast<double>(r)), r - 1);
            } else {
                double cum = 0.0;
                for (std::size_t k = 0; k < r; ++k) {
                    cum += it->second[k];
                    if (u < cum) {
                        drawn = k;
                        break;
                    }
                }
            }
            code_row[c] = static_cast<std::int32_t>(drawn);
        }
        for (std::size_t c = 0; c < n_cols; ++c) {
            const ColumnCoder& coder = coder_[c];
            auto code = static_cast<std::size_t>(code_row[c]);
            switch (coder.coding) {
                case Coding::numeric_bins: {
                    if (coder.has_missing && code == coder.binner.missing_bin()) {
                        builder.set_missing(c);
                    } else {
                        auto [lo, hi] = coder.binner.bin_range(code);
                        builder.set_numeric(c, lo < hi ? rng.uniform(lo, hi) : lo);
                    }
                    break;
                }
                case Coding::levels: {
                    auto missing_code = static_cast<std::size_t>(schema_.at(c).levels.size());
                    if (code == missing_code)
                        builder.set_missing(c);
                    else
                        builder.set_level(c, static_cast<std::int32_t>(code));
                    break;
                }
                case Coding::encoded_bins: {
                    const auto& pool = coder.level_pools[code];
                    if (pool.empty()) throw DataError("bn: empty reconstruction pool");
                    std::int32_t lvl = pool[rng.uniform_index(pool.size())];
                    if (lvl == kMissingLevel)
                        builder.set_missing(c);
                    else
                        builder.set_level(c, lvl);
                    break;
                }
            }
        }
        builder.end_row();
    }
    return builder.build();
}

} // namespace augmentor
