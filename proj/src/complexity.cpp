#include "augmentor/complexity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "augmentor/discretize.hpp"
#include "augmentor/parallel.hpp"

namespace augmentor {

double imbalance_from_prevalence(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw DataError("imbalance is undefined for a single-class dataset");
    return std::max(p / (1.0 - p), (1.0 - p) / p);
}

double imbalance_factor(const Dataset& ds) {
    return imbalance_from_prevalence(ds.positive_fraction());
}

std::size_t degrees_of_freedom(const Schema& schema) {
    std::size_t dof = 0;
    for (const auto& c : schema.columns()) {
        if (c.role == ColumnRole::outcome) continue;
        if (c.is_numeric()) {
            dof += 1;
        } else {
            if (c.levels.empty())
                throw DataError("categorical column '" + c.name + "' has no levels");
            dof += c.levels.size() - 1;
        }
    }
    return dof;
}

std::size_t degrees_of_freedom(const Dataset& ds) {
    std::size_t dof = 0;
    const Schema& schema = ds.schema();
    for (std::size_t c = 0; c < schema.size(); ++c) {
        const ColumnSpec& spec = schema.at(c);
        if (spec.role == ColumnRole::outcome) continue;
        if (spec.is_numeric()) {
            dof += 1;
        } else {
            std::size_t levels = spec.levels.size();
            if (ds.column_has_missing(c)) ++levels;  // missing acts as an extra level
            if (levels == 0)
                throw DataError("categorical column '" + spec.name + "' has no levels");
            dof += levels - 1;
        }
    }
    return dof;
}

namespace {

// Per-column discrete view shared by the entropy and MI metrics; missing is
// always its own symbol.
std::vector<std::size_t> discrete_view(const Dataset& ds, std::size_t col,
                                       std::size_t numeric_bins,
                                       std::size_t* out_cardinality) {
    const ColumnSpec& spec = ds.schema().at(col);
    std::vector<std::size_t> symbols(ds.rows());
    if (spec.is_numeric()) {
        const auto& v = ds.numeric_column(col);
        Discretizer disc = Discretizer::fit(v, numeric_bins, true);
        for (std::size_t r = 0; r < v.size(); ++r) symbols[r] = disc.bin(v[r]);
        *out_cardinality = disc.bin_count();
    } else {
        const auto& v = ds.level_column(col);
        std::size_t k = spec.levels.size();
        for (std::size_t r = 0; r < v.size(); ++r)
            symbols[r] = v[r] == kMissingLevel ? k : static_cast<std::size_t>(v[r]);
        *out_cardinality = k + 1;
    }
    return symbols;
}

std::vector<std::size_t> predictor_columns(const Schema& schema) {
    std::vector<std::size_t> cols;
    for (std::size_t c = 0; c < schema.size(); ++c)
        if (schema.at(c).role == ColumnRole::predictor) cols.push_back(c);
    return cols;
}

} // namespace

double standardized_entropy(const Dataset& ds, const DiscretizationOptions& opts) {
    if (ds.rows() == 0) throw DataError("cannot profile an empty dataset");
    auto cols = predictor_columns(ds.schema());
    if (cols.empty()) throw DataError("dataset has no predictor columns");

    const double n = static_cast<double>(ds.rows());
    double total = 0.0;
    for (std::size_t col : cols) {
        std::size_t cardinality = 0;
        auto symbols = discrete_view(ds, col, opts.numeric_bins, &cardinality);
        std::vector<std::size_t> counts(cardinality, 0);
        for (std::size_t s : symbols) ++counts[s];
        std::size_t occupied = 0;
        double h = 0.0;
        for (std::size_t c : counts) {
            if (c == 0) continue;
            ++occupied;
            double p = static_cast<double>(c) / n;
            h -= p * std::log(p);
        }
        if (occupied > 1) total += h / std::log(static_cast<double>(occupied));
    }
    return total / static_cast<double>(cols.size());
}

double mutual_information_cov(const Dataset& ds, const DiscretizationOptions& opts) {
    if (ds.rows() == 0) throw DataError("cannot profile an empty dataset");
    auto cols = predictor_columns(ds.schema());
    if (cols.size() < 2) return 0.0;

    std::vector<std::vector<std::size_t>> views(cols.size());
    std::vector<std::size_t> cards(cols.size());
    for (std::size_t i = 0; i < cols.size(); ++i)
        views[i] = discrete_view(ds, cols[i], opts.numeric_bins, &cards[i]);

    const double n = static_cast<double>(ds.rows());
    std::vector<double> mis;
    for (std::size_t i = 0; i < cols.size(); ++i) {
        for (std::size_t j = i + 1; j < cols.size(); ++j) {
            std::vector<double> joint(cards[i] * cards[j], 0.0);
            std::vector<double> pa(cards[i], 0.0), pb(cards[j], 0.0);
            for (std::size_t r = 0; r < ds.rows(); ++r) {
                joint[views[i][r] * cards[j] + views[j][r]] += 1.0;
                pa[views[i][r]] += 1.0;
                pb[views[j][r]] += 1.0;
            }
            double mi = 0.0;
            for (std::size_t a = 0; a < cards[i]; ++a) {
                for (std::size_t b = 0; b < cards[j]; ++b) {
                    double pab = joint[a * cards[j] + b];
                    if (pab == 0.0) continue;
                    mi += (pab / n) * std::log(pab * n / (pa[a] * pb[b]));
                }
            }
            mis.push_back(std::max(mi, 0.0));
        }
    }

    double mean = 0.0;
    for (double m : mis) mean += m;
    mean /= static_cast<double>(mis.size());
    if (mean == 0.0) return 0.0;
    double var = 0.0;
    for (double m : mis) var += (m - mean) * (m - mean);
    var /= static_cast<double>(mis.size());
    return std::sqrt(var) / mean;
}

GowerMetric::GowerMetric(const Dataset& ds) : ds_(&ds) {
    predictor_cols_ = predictor_columns(ds.schema());
    if (predictor_cols_.empty()) throw DataError("dataset has no predictor columns");
    ranges_.resize(predictor_cols_.size(), 0.0);
    for (std::size_t i = 0; i < predictor_cols_.size(); ++i) {
        std::size_t c = predictor_cols_[i];
        if (!ds.schema().at(c).is_numeric()) continue;
        double lo = std::numeric_limits<double>::infinity();
        double hi = -std::numeric_limits<double>::infinity();
        for (double v : ds.numeric_column(c)) {
            if (std::isnan(v)) continue;
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        ranges_[i] = hi > lo ? hi - lo : 0.0;
    }
}

double GowerMetric::distance(std::size_t row_a, std::size_t row_b) const {
    double sum = 0.0;
    std::size_t used = 0;
    for (std::size_t i = 0; i < predictor_cols_.size(); ++i) {
        std::size_t c = predictor_cols_[i];
        if (ds_->schema().at(c).is_numeric()) {
            double a = ds_->numeric_at(row_a, c);
            double b = ds_->numeric_at(row_b, c);
            if (std::isnan(a) || std::isnan(b)) continue;
            ++used;
            if (ranges_[i] > 0.0) sum += std::abs(a - b) / ranges_[i];
        } else {
            std::int32_t a = ds_->level_at(row_a, c);
            std::int32_t b = ds_->level_at(row_b, c);
            if (a == kMissingLevel || b == kMissingLevel) continue;
            ++used;
            sum += a == b ? 0.0 : 1.0;
        }
    }
    if (used == 0)
        throw DataError("Gower distance undefined: the rows share no observed column");
    return sum / static_cast<double>(used);
}

double separability(const Dataset& ds, int threads) {
    auto counts = ds.outcome_counts();
    if (counts[0] < 2 || counts[1] < 2)
        throw DataError("separability needs at least 2 rows in each class");

    GowerMetric metric(ds);
    const auto& y = ds.outcomes();
    const std::size_t n = ds.rows();
    std::vector<double> intra(n), inter(n);
    parallel_for(n, threads, [&](std::size_t i) {
        double best_same = std::numeric_limits<double>::infinity();
        double best_other = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            double d = metric.distance(i, j);
            if (y[j] == y[i]) best_same = std::min(best_same, d);
            else best_other = std::min(best_other, d);
        }
        intra[i] = best_same;
        inter[i] = best_other;
    });

    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        num += intra[i];
        den += inter[i];
    }
    if (num == 0.0) return 0.0;
    if (den == 0.0) return std::numeric_limits<double>::infinity();
    return num / den;
}

ComplexityProfile profile(const Dataset& ds, std::optional<double> baseline_auc,
                          int threads) {
    if (ds.rows() == 0) throw DataError("cannot profile an empty dataset");
    if (baseline_auc && !(*baseline_auc >= 0.0 && *baseline_auc <= 1.0))
        throw DataError("baseline AUC must lie in [0, 1]");
    ComplexityProfile p;
    p.n0 = ds.rows();
    p.imbalance = imbalance_factor(ds);
    p.dof = degrees_of_freedom(ds);
    p.std_entropy = standardized_entropy(ds);
    p.mi_cov = mutual_information_cov(ds);
    p.separability = separability(ds, threads);
    p.baseline_auc = baseline_auc;
    return p;
}

} // namespace augmentor
