#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "augmentor/error.hpp"

namespace augmentor {

enum class ColumnKind { numeric, categorical, binary_outcome };
enum class ColumnRole { predictor, outcome };
enum class Provenance { original, synthetic, resampled, augmented };

constexpr std::int32_t kMissingLevel = -1;
constexpr std::size_t kHighCardinalityThreshold = 50;

std::string to_string(ColumnKind kind);
std::string to_string(ColumnRole role);
std::string to_string(Provenance p);

struct ColumnSpec {
    std::string name;
    ColumnKind kind = ColumnKind::numeric;
    ColumnRole role = ColumnRole::predictor;
    std::vector<std::string> levels;             // categorical / outcome only
    std::optional<bool> high_cardinality;        // unset: inferred from level count

    bool is_numeric() const { return kind == ColumnKind::numeric; }
    bool is_categorical() const { return kind != ColumnKind::numeric; }
    bool is_high_cardinality() const {
        return high_cardinality.value_or(levels.size() > kHighCardinalityThreshold);
    }
    std::int32_t level_index(const std::string& value) const;
};

class Schema {
public:
    Schema() = default;
    explicit Schema(std::vector<ColumnSpec> columns);

    std::size_t size() const { return columns_.size(); }
    const ColumnSpec& at(std::size_t i) const { return columns_[i]; }
    const std::vector<ColumnSpec>& columns() const { return columns_; }
    std::size_t outcome_index() const { return outcome_index_; }
    const ColumnSpec& outcome() const { return columns_[outcome_index_]; }
    std::size_t predictor_count() const { return columns_.size() - 1; }
    std::size_t index_of(const std::string& name) const;

    // Level-list extension (lenient loads) is applied in place; everything
    // else about a schema is immutable after validation.
    std::int32_t add_level(std::size_t column, const std::string& value);

    bool same_shape(const Schema& other) const;  // names, kinds, roles
    bool operator==(const Schema& other) const;

private:
    void validate() const;
    std::vector<ColumnSpec> columns_;
    std::size_t outcome_index_ = 0;
};

// Columnar storage: numeric cells as double (NaN = missing), categorical and
// outcome cells as level index (-1 = missing; outcomes are never missing after
// load).
using ColumnData = std::variant<std::vector<double>, std::vector<std::int32_t>>;

class Dataset {
public:
    Dataset() = default;
    Dataset(Schema schema, std::vector<ColumnData> columns,
            Provenance provenance = Provenance::original);

    static Dataset empty(Schema schema, Provenance provenance = Provenance::original);

    const Schema& schema() const { return schema_; }
    Schema& mutable_schema() { return schema_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return schema_.size(); }
    Provenance provenance() const { return provenance_; }
    void set_provenance(Provenance p) { provenance_ = p; }

    const std::vector<double>& numeric_column(std::size_t col) const;
    const std::vector<std::int32_t>& level_column(std::size_t col) const;

    double numeric_at(std::size_t row, std::size_t col) const {
        return numeric_column(col)[row];
    }
    std::int32_t level_at(std::size_t row, std::size_t col) const {
        return level_column(col)[row];
    }
    bool is_missing(std::size_t row, std::size_t col) const;
    std::int32_t outcome_at(std::size_t row) const {
        return level_column(schema_.outcome_index())[row];
    }
    const std::vector<std::int32_t>& outcomes() const {
        return level_column(schema_.outcome_index());
    }

    // Count of rows per outcome level (size 2).
    std::vector<std::size_t> outcome_counts() const;
    double positive_fraction() const;

    Dataset select(std::span<const std::size_t> rows,
                   std::optional<Provenance> provenance = std::nullopt) const;

    bool column_has_missing(std::size_t col) const;

    void append_numeric_cell(std::size_t col, double value);
    void append_level_cell(std::size_t col, std::int32_t level);
    void finish_row();  // checks all columns advanced together

private:
    Schema schema_;
    std::vector<ColumnData> columns_;
    std::size_t rows_ = 0;
    Provenance provenance_ = Provenance::original;
};

// Row-by-row construction with per-cell type checking.
class DatasetBuilder {
public:
    explicit DatasetBuilder(Schema schema, Provenance provenance = Provenance::original);

    DatasetBuilder& set_numeric(std::size_t col, double value);
    DatasetBuilder& set_level(std::size_t col, std::int32_t level);
    DatasetBuilder& set_missing(std::size_t col);
    void end_row();
    Dataset build();

private:
    Schema schema_;
    Provenance provenance_;
    std::vector<ColumnData> columns_;
    std::vector<bool> row_set_;
    std::size_t rows_ = 0;
};

// Original rows first, synthetic rows after; result provenance is `augmented`.
// Level lists may differ only by suffix extension (lenient loads append);
// the union schema is used.
Dataset concat(const Dataset& base, const Dataset& extra);

} // namespace augmentor
