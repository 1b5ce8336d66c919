#include "augmentor/tabular.hpp"

#include <algorithm>
#include <limits>
#include <unordered_set>

namespace augmentor {

std::string to_string(ColumnKind kind) {
    switch (kind) {
        case ColumnKind::numeric: return "numeric";
        case ColumnKind::categorical: return "categorical";
        case ColumnKind::binary_outcome: return "binary-outcome";
    }
    return "?";
}

std::string to_string(ColumnRole role) {
    return role == ColumnRole::predictor ? "predictor" : "outcome";
}

std::string to_string(Provenance p) {
    switch (p) {
        case Provenance::original: return "original";
        case Provenance::synthetic: return "synthetic";
        case Provenance::resampled: return "resampled";
        case Provenance::augmented: return "augmented";
    }
    return "?";
}

std::int32_t ColumnSpec::level_index(const std::string& value) const {
    for (std::size_t i = 0; i < levels.size(); ++i)
        if (levels[i] == value) return static_cast<std::int32_t>(i);
    return kMissingLevel;
}

Schema::Schema(std::vector<ColumnSpec> columns) : columns_(std::move(columns)) {
    validate();
    for (std::size_t i = 0; i < columns_.size(); ++i)
        if (columns_[i].role == ColumnRole::outcome) outcome_index_ = i;
}

void Schema::validate() const {
    if (columns_.empty()) throw DataError("schema has no columns");
    std::unordered_set<std::string> names;
    std::size_t outcomes = 0;
    for (const auto& c : columns_) {
        if (c.name.empty()) throw DataError("schema column with empty name");
        if (!names.insert(c.name).second)
            throw DataError("duplicate column name '" + c.name + "'");
        bool outcome_kind = c.kind == ColumnKind::binary_outcome;
        bool outcome_role = c.role == ColumnRole::outcome;
        if (outcome_kind != outcome_role)
            throw DataError("column '" + c.name +
                            "': binary-outcome kind and outcome role must pair up");
        if (outcome_role) {
            ++outcomes;
            if (c.levels.size() != 2)
                throw DataError("outcome column '" + c.name +
                                "' must declare exactly 2 levels");
        }
        if (c.kind == ColumnKind::numeric && !c.levels.empty())
            throw DataError("numeric column '" + c.name + "' must not declare levels");
        std::unordered_set<std::string> seen;
        for (const auto& lv : c.levels)
            if (!seen.insert(lv).second)
                throw DataError("column '" + c.name + "': duplicate level '" + lv + "'");
    }
    if (outcomes != 1) throw DataError("schema must declare exactly one outcome column");
}

std::size_t Schema::index_of(const std::string& name) const {
    for (std::size_t i = 0; i < columns_.size(); ++i)
        if (columns_[i].name == name) return i;
    throw DataError("no column named '" + name + "'");
}

std::int32_t Schema::add_level(std::size_t column, const std::string& value) {
    ColumnSpec& c = columns_[column];
    if (!c.is_categorical())
        throw DataError("cannot add level to numeric column '" + c.name + "'");
    if (c.kind == ColumnKind::binary_outcome)
        throw DataError("outcome column '" + c.name + "' has a fixed level set");
    c.levels.push_back(value);
    return static_cast<std::int32_t>(c.levels.size() - 1);
}

bool Schema::same_shape(const Schema& other) const {
    if (columns_.size() != other.columns_.size()) return false;
    for (std::size_t i = 0; i < columns_.size(); ++i) {
        const auto& a = columns_[i];
        const auto& b = other.columns_[i];
        if (a.name != b.name || a.kind != b.kind || a.role != b.role) return false;
    }
    return true;
}

bool Schema::operator==(const Schema& other) const {
    if (!same_shape(other)) return false;
    for (std::size_t i = 0; i < columns_.size(); ++i)
        if (columns_[i].levels != other.columns_[i].levels) return false;
    return true;
}

namespace {

std::size_t column_size(const ColumnData& c) {
    return std::visit([](const auto& v) { return v.size(); }, c);
}

ColumnData empty_column(const ColumnSpec& spec) {
    if (spec.is_numeric()) return std::vector<double>{};
    return std::vector<std::int32_t>{};
}

} // namespace

Dataset::Dataset(Schema schema, std::vector<ColumnData> columns, Provenance provenance)
    : schema_(std::move(schema)), columns_(std::move(columns)), provenance_(provenance) {
    if (columns_.size() != schema_.size())
        throw DataError("column count does not match schema");
    rows_ = columns_.empty() ? 0 : column_size(columns_[0]);
    for (std::size_t i = 0; i < columns_.size(); ++i) {
        if (column_size(columns_[i]) != rows_)
            throw DataError("ragged columns in dataset");
        bool is_num = std::holds_alternative<std::vector<double>>(columns_[i]);
        if (is_num != schema_.at(i).is_numeric())
            throw DataError("column '" + schema_.at(i).name +
                            "' storage does not match its declared kind");
    }
}

Dataset Dataset::empty(Schema schema, Provenance provenance) {
    std::vector<ColumnData> cols;
    cols.reserve(schema.size());
    for (const auto& c : schema.columns()) cols.push_back(empty_column(c));
    return Dataset(std::move(schema), std::move(cols), provenance);
}

const std::vector<double>& Dataset::numeric_column(std::size_t col) const {
    const auto* v = std::get_if<std::vector<double>>(&columns_[col]);
    if (!v) throw DataError("column '" + schema_.at(col).name + "' is not numeric");
    return *v;
}

const std::vector<std::int32_t>& Dataset::level_column(std::size_t col) const {
    const auto* v = std::get_if<std::vector<std::int32_t>>(&columns_[col]);
    if (!v) throw DataError("column '" + schema_.at(col).name + "' is not categorical");
    return *v;
}

bool Dataset::is_missing(std::size_t row, std::size_t col) const {
    if (schema_.at(col).is_numeric()) return std::isnan(numeric_column(col)[row]);
    return level_column(col)[row] == kMissingLevel;
}

std::vector<std::size_t> Dataset::outcome_counts() const {
    std::vector<std::size_t> counts(2, 0);
    for (std::int32_t y : outcomes()) {
        if (y != 0 && y != 1) throw DataError("outcome cell outside {0,1}");
        ++counts[static_cast<std::size_t>(y)];
    }
    return counts;
}

double Dataset::positive_fraction() const {
    if (rows_ == 0) throw DataError("empty dataset has no class prevalence");
    auto counts = outcome_counts();
    return static_cast<double>(counts[1]) / static_cast<double>(rows_);
}

Dataset Dataset::select(std::span<const std::size_t> rows,
                        std::optional<Provenance> provenance) const {
    std::vector<ColumnData> cols;
    cols.reserve(columns_.size());
    for (const auto& col : columns_) {
        if (const auto* num = std::get_if<std::vector<double>>(&col)) {
            std::vector<double> out;
            out.reserve(rows.size());
            for (std::size_t r : rows) out.push_back((*num)[r]);
            cols.emplace_back(std::move(out));
        } else {
            const auto& lev = std::get<std::vector<std::int32_t>>(col);
            std::vector<std::int32_t> out;
            out.reserve(rows.size());
            for (std::size_t r : rows) out.push_back(lev[r]);
            cols.emplace_back(std::move(out));
        }
    }
    return Dataset(schema_, std::move(cols), provenance.value_or(provenance_));
}

bool Dataset::column_has_missing(std::size_t col) const {
    if (schema_.at(col).is_numeric()) {
        for (double v : numeric_column(col))
            if (std::isnan(v)) return true;
        return false;
    }
    for (std::int32_t v : level_column(col))
        if (v == kMissingLevel) return true;
    return false;
}

void Dataset::append_numeric_cell(std::size_t col, double value) {
    std::get<std::vector<double>>(columns_[col]).push_back(value);
}

void Dataset::append_level_cell(std::size_t col, std::int32_t level) {
    std::get<std::vector<std::int32_t>>(columns_[col]).push_back(level);
}

void Dataset::finish_row() {
    ++rows_;
    for (const auto& col : columns_)
        if (column_size(col) != rows_) throw DataError("row appended with missing cells");
}

DatasetBuilder::DatasetBuilder(Schema schema, Provenance provenance)
    : schema_(std::move(schema)), provenance_(provenance) {
    columns_.reserve(schema_.size());
    for (const auto& c : schema_.columns()) columns_.push_back(empty_column(c));
    row_set_.assign(schema_.size(), false);
}

DatasetBuilder& DatasetBuilder::set_numeric(std::size_t col, double value) {
    if (!schema_.at(col).is_numeric())
        throw DataError("column '" + schema_.at(col).name + "' is not numeric");
    std::get<std::vector<double>>(columns_[col]).push_back(value);
    row_set_[col] = true;
    return *this;
}

DatasetBuilder& DatasetBuilder::set_level(std::size_t col, std::int32_t level) {
    const ColumnSpec& spec = schema_.at(col);
    if (!spec.is_categorical())
        throw DataError("column '" + spec.name + "' is not categorical");
    if (level != kMissingLevel &&
        (level < 0 || static_cast<std::size_t>(level) >= spec.levels.size()))
        throw DataError("level index out of range for column '" + spec.name + "'");
    if (level == kMissingLevel && spec.role == ColumnRole::outcome)
        throw DataError("outcome cell cannot be missing");
    std::get<std::vector<std::int32_t>>(columns_[col]).push_back(level);
    row_set_[col] = true;
    return *this;
}

DatasetBuilder& DatasetBuilder::set_missing(std::size_t col) {
    const ColumnSpec& spec = schema_.at(col);
    if (spec.role == ColumnRole::outcome) throw DataError("outcome cell cannot be missing");
    if (spec.is_numeric())
        std::get<std::vector<double>>(columns_[col])
            .push_back(std::numeric_limits<double>::quiet_NaN());
    else
        std::get<std::vector<std::int32_t>>(columns_[col]).push_back(kMissingLevel);
    row_set_[col] = true;
    return *this;
}

void DatasetBuilder::end_row() {
    for (std::size_t i = 0; i < row_set_.size(); ++i)
        if (!row_set_[i])
            throw DataError("row ended without a value for column '" +
                            schema_.at(i).name + "'");
    row_set_.assign(schema_.size(), false);
    ++rows_;
}

Dataset DatasetBuilder::build() {
    for (bool set : row_set_)
        if (set) throw DataError("unfinished row in dataset builder");
    return Dataset(std::move(schema_), std::move(columns_), provenance_);
}

namespace {

// Checks the two level lists agree on their common prefix; returns the longer.
const std::vector<std::string>* merged_levels(const ColumnSpec& a, const ColumnSpec& b) {
    const auto& la = a.levels;
    const auto& lb = b.levels;
    const auto& shorter = la.size() <= lb.size() ? la : lb;
    const auto& longer = la.size() <= lb.size() ? lb : la;
    for (std::size_t i = 0; i < shorter.size(); ++i)
        if (shorter[i] != longer[i]) return nullptr;
    return la.size() <= lb.size() ? &lb : &la;
}

} // namespace

Dataset concat(const Dataset& base, const Dataset& extra) {
    if (!base.schema().same_shape(extra.schema()))
        throw DataError("cannot concatenate datasets with different schemas");

    std::vector<ColumnSpec> merged = base.schema().columns();
    for (std::size_t i = 0; i < merged.size(); ++i) {
        const ColumnSpec& other = extra.schema().at(i);
        if (merged[i].is_categorical()) {
            const auto* levels = merged_levels(merged[i], other);
            if (!levels)
                throw DataError("cannot concatenate: level lists for column '" +
                                merged[i].name + "' disagree");
            merged[i].levels = *levels;
        }
    }

    Schema schema{merged};
    std::vector<ColumnData> cols;
    cols.reserve(schema.size());
    for (std::size_t i = 0; i < schema.size(); ++i) {
        if (schema.at(i).is_numeric()) {
            std::vector<double> out = base.numeric_column(i);
            const auto& add = extra.numeric_column(i);
            out.insert(out.end(), add.begin(), add.end());
            cols.emplace_back(std::move(out));
        } else {
            std::vector<std::int32_t> out = base.level_column(i);
            const auto& add = extra.level_column(i);
            out.insert(out.end(), add.begin(), add.end());
            cols.emplace_back(std::move(out));
        }
    }
    return Dataset(std::move(schema), std::move(cols), Provenance::augmented);
}

} // namespace augmentor
