#include "augmentor/tabular_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

namespace augmentor {

using nlohmann::json;

namespace {

ColumnKind parse_kind(const std::string& s) {
    if (s == "numeric") return ColumnKind::numeric;
    if (s == "categorical") return ColumnKind::categorical;
    if (s == "binary-outcome" || s == "binary_outcome") return ColumnKind::binary_outcome;
    throw DataError("unknown column kind '" + s + "'");
}

ColumnRole parse_role(const std::string& s) {
    if (s == "predictor") return ColumnRole::predictor;
    if (s == "outcome") return ColumnRole::outcome;
    throw DataError("unknown column role '" + s + "'");
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace

Schema schema_from_json_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw DataError(std::string("schema is not valid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("columns") || !doc["columns"].is_array())
        throw DataError("schema JSON must be an object with a 'columns' array");
    std::vector<ColumnSpec> columns;
    for (const auto& c : doc["columns"]) {
        ColumnSpec spec;
        if (!c.contains("name") || !c.contains("kind"))
            throw DataError("schema column needs 'name' and 'kind'");
        spec.name = c["name"].get<std::string>();
        spec.kind = parse_kind(c["kind"].get<std::string>());
        if (c.contains("role"))
            spec.role = parse_role(c["role"].get<std::string>());
        else
            spec.role = spec.kind == ColumnKind::binary_outcome ? ColumnRole::outcome
                                                                : ColumnRole::predictor;
        if (c.contains("levels"))
            spec.levels = c["levels"].get<std::vector<std::string>>();
        if (c.contains("high_cardinality"))
            spec.high_cardinality = c["high_cardinality"].get<bool>();
        columns.push_back(std::move(spec));
    }
    return Schema{std::move(columns)};
}

Schema load_schema(const std::filesystem::path& path) {
    return schema_from_json_text(read_file(path));
}

std::string schema_to_json_text(const Schema& schema) {
    json cols = json::array();
    for (const auto& c : schema.columns()) {
        json col;
        col["name"] = c.name;
        col["kind"] = to_string(c.kind);
        col["role"] = to_string(c.role);
        if (c.is_categorical()) col["levels"] = c.levels;
        if (c.high_cardinality.has_value()) col["high_cardinality"] = *c.high_cardinality;
        cols.push_back(std::move(col));
    }
    json doc;
    doc["columns"] = std::move(cols);
    return doc.dump(2) + "\n";
}

void save_schema(const Schema& schema, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write '" + path.string() + "'");
    out << schema_to_json_text(schema);
}

std::vector<std::vector<std::string>> parse_csv_records(const std::string& text,
                                                        const std::string& origin) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> record;
    std::string field;
    bool in_quotes = false;
    bool at_record_start = true;
    std::size_t line = 1;
    const std::size_t n = text.size();

    for (std::size_t i = 0; i < n;) {
        char ch = text[i];
        if (in_quotes) {
            if (ch == '"') {
                if (i + 1 < n && text[i + 1] == '"') {
                    field.push_back('"');
                    i += 2;
                } else {
                    in_quotes = false;
                    ++i;
                }
                continue;
            }
            if (ch == '\n') ++line;
            field.push_back(ch);
            ++i;
            continue;
        }
        if (ch == '"') {
            if (!field.empty())
                throw DataError(origin + ":" + std::to_string(line) +
                                ": stray quote inside unquoted field");
            in_quotes = true;
            at_record_start = false;
            ++i;
            continue;
        }
        if (ch == ',') {
            record.push_back(std::move(field));
            field.clear();
            at_record_start = false;
            ++i;
            continue;
        }
        if (ch == '\n' || ch == '\r') {
            record.push_back(std::move(field));
            field.clear();
            records.push_back(std::move(record));
            record.clear();
            at_record_start = true;
            if (ch == '\r' && i + 1 < n && text[i + 1] == '\n') ++i;
            ++line;
            ++i;
            continue;
        }
        field.push_back(ch);
        at_record_start = false;
        ++i;
    }
    if (in_quotes)
        throw DataError(origin + ":" + std::to_string(line) + ": unterminated quoted field");
    if (!at_record_start || !record.empty() || !field.empty()) {
        record.push_back(std::move(field));
        records.push_back(std::move(record));
    }
    return records;
}

namespace {

double parse_numeric_cell(const std::string& cell, const std::string& origin,
                          std::size_t line, const std::string& column) {
    double value = 0.0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last)
        throw DataError(origin + ":" + std::to_string(line) + ": cell '" + cell +
                        "' in column '" + column + "' is not numeric");
    return value;
}

bool is_missing_cell(const std::string& cell, const LoadOptions& options) {
    if (cell.empty()) return true;
    return std::find(options.missing_tokens.begin(), options.missing_tokens.end(), cell) !=
           options.missing_tokens.end();
}

} // namespace

LoadReport load_csv_text(const std::string& text, const Schema& schema,
                         const LoadOptions& options, const std::string& origin) {
    auto records = parse_csv_records(text, origin);
    if (records.empty()) throw DataError(origin + ": no header row");

    const auto& header = records[0];
    if (header.size() != schema.size())
        throw DataError(origin + ": header has " + std::to_string(header.size()) +
                        " columns, schema declares " + std::to_string(schema.size()));
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] != schema.at(i).name)
            throw DataError(origin + ": header column '" + header[i] +
                            "' does not match schema column '" + schema.at(i).name + "'");

    LoadReport report{Dataset::empty(schema), 0, {}};
    Dataset& ds = report.data;
    Schema& live = ds.mutable_schema();

    // Level lookup per categorical column; extended in lenient mode.
    std::vector<std::unordered_map<std::string, std::int32_t>> lookup(schema.size());
    std::vector<bool> had_declared_levels(schema.size(), false);
    for (std::size_t c = 0; c < schema.size(); ++c) {
        if (!schema.at(c).is_categorical()) continue;
        had_declared_levels[c] = !schema.at(c).levels.empty();
        for (std::size_t l = 0; l < schema.at(c).levels.size(); ++l)
            lookup[c].emplace(schema.at(c).levels[l], static_cast<std::int32_t>(l));
    }

    const std::size_t outcome = schema.outcome_index();
    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& rec = records[r];
        const std::size_t line = r + 1;
        if (rec.size() != schema.size())
            throw DataError(origin + ":" + std::to_string(line) + ": expected " +
                            std::to_string(schema.size()) + " fields, found " +
                            std::to_string(rec.size()));
        if (is_missing_cell(rec[outcome], options)) {
            ++report.dropped_missing_outcome;
            continue;
        }
        for (std::size_t c = 0; c < schema.size(); ++c) {
            const ColumnSpec& spec = live.at(c);
            const std::string& cell = rec[c];
            if (c != outcome && is_missing_cell(cell, options)) {
                if (spec.is_numeric())
                    ds.append_numeric_cell(c, std::numeric_limits<double>::quiet_NaN());
                else
                    ds.append_level_cell(c, kMissingLevel);
                continue;
            }
            if (spec.is_numeric()) {
                ds.append_numeric_cell(c, parse_numeric_cell(cell, origin, line, spec.name));
                continue;
            }
            auto it = lookup[c].find(cell);
            if (it != lookup[c].end()) {
                ds.append_level_cell(c, it->second);
                continue;
            }
            if (c == outcome)
                throw DataError(origin + ":" + std::to_string(line) + ": outcome value '" +
                                cell + "' is not one of the two declared levels");
            if (options.strict && had_declared_levels[c])
                throw DataError(origin + ":" + std::to_string(line) + ": value '" + cell +
                                "' is not a declared level of column '" + spec.name + "'");
            std::int32_t idx = live.add_level(c, cell);
            lookup[c].emplace(cell, idx);
            if (had_declared_levels[c])
                report.warnings.push_back(origin + ":" + std::to_string(line) +
                                          ": new level '" + cell + "' added to column '" +
                                          spec.name + "'");
            ds.append_level_cell(c, idx);
        }
        ds.finish_row();
    }

    if (ds.rows() == 0)
        throw DataError(origin + ": no usable rows (all rows missing the outcome?)");
    return report;
}

LoadReport load_csv(const std::filesystem::path& path, const Schema& schema,
                    const LoadOptions& options) {
    return load_csv_text(read_file(path), schema, options, path.string());
}

std::string format_double(double v) {
    if (std::isnan(v)) throw DataError("cannot format NaN cell");
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

namespace {

bool needs_quoting(const std::string& s) {
    return s.find_first_of(",\"\r\n") != std::string::npos;
}

std::string csv_escape(const std::string& s) {
    if (!needs_quoting(s)) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += "\"\"";
        else out.push_back(ch);
    }
    out.push_back('"');
    return out;
}

} // namespace

std::string csv_text(const Dataset& ds) {
    std::string out;
    const Schema& schema = ds.schema();
    for (std::size_t c = 0; c < schema.size(); ++c) {
        if (c) out.push_back(',');
        out += csv_escape(schema.at(c).name);
    }
    out.push_back('\n');
    for (std::size_t r = 0; r < ds.rows(); ++r) {
        for (std::size_t c = 0; c < schema.size(); ++c) {
            if (c) out.push_back(',');
            if (schema.at(c).is_numeric()) {
                double v = ds.numeric_at(r, c);
                if (!std::isnan(v)) out += format_double(v);
            } else {
                std::int32_t lv = ds.level_at(r, c);
                if (lv != kMissingLevel)
                    out += csv_escape(schema.at(c).levels[static_cast<std::size_t>(lv)]);
            }
        }
        out.push_back('\n');
    }
    return out;
}

void save_csv(const Dataset& ds, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write '" + path.string() + "'");
    out << csv_text(ds);
    if (!out) throw DataError("short write to '" + path.string() + "'");
}

} // namespace augmentor
