#include "augmentor/target_encoding.hpp"

namespace augmentor {

TargetEncoder TargetEncoder::fit(const Dataset& train, std::size_t column,
                                 double smoothing) {
    const ColumnSpec& spec = train.schema().at(column);
    if (!spec.is_categorical() || spec.role == ColumnRole::outcome)
        throw DataError("target encoding needs a categorical predictor column");
    if (smoothing < 0.0) throw DataError("smoothing must be non-negative");
    if (train.rows() == 0) throw DataError("cannot fit target encoder on empty data");

    TargetEncoder enc;
    enc.column_ = column;
    enc.smoothing_ = smoothing;

    const auto& values = train.level_column(column);
    const auto& y = train.outcomes();
    std::unordered_map<std::int32_t, std::pair<double, double>> stats;  // level -> (sum, count)
    double global_sum = 0.0;
    for (std::size_t r = 0; r < values.size(); ++r) {
        auto& s = stats[values[r]];
        s.first += y[r];
        s.second += 1.0;
        global_sum += y[r];
    }
    enc.default_value_ = global_sum / static_cast<double>(train.rows());
    for (const auto& [level, s] : stats) {
        double mean = s.first / s.second;
        double denom = s.second + smoothing;
        enc.mapping_[level] =
            denom > 0.0 ? (s.second * mean + smoothing * enc.default_value_) / denom
                        : enc.default_value_;
    }
    return enc;
}

double TargetEncoder::encode_level(std::int32_t level) const {
    auto it = mapping_.find(level);
    return it == mapping_.end() ? default_value_ : it->second;
}

Dataset TargetEncoder::apply(const Dataset& ds) const {
    const ColumnSpec& spec = ds.schema().at(column_);
    if (!spec.is_categorical())
        throw DataError("encoded column '" + spec.name + "' is not categorical here");

    std::vector<ColumnSpec> columns = ds.schema().columns();
    columns[column_].kind = ColumnKind::numeric;
    columns[column_].levels.clear();
    columns[column_].high_cardinality.reset();

    std::vector<ColumnData> data;
    data.reserve(ds.cols());
    for (std::size_t c = 0; c < ds.cols(); ++c) {
        if (c == column_) {
            const auto& src = ds.level_column(c);
            std::vector<double> encoded;
            encoded.reserve(src.size());
            for (std::int32_t lv : src) encoded.push_back(encode_level(lv));
            data.emplace_back(std::move(encoded));
        } else if (ds.schema().at(c).is_numeric()) {
            data.emplace_back(ds.numeric_column(c));
        } else {
            data.emplace_back(ds.level_column(c));
        }
    }
    return Dataset(Schema{std::move(columns)}, std::move(data), ds.provenance());
}

} // namespace augmentor
