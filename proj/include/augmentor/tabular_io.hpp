#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "augmentor/tabular.hpp"

namespace augmentor {

struct LoadOptions {
    // Lenient (default): unseen categorical values become new levels, each
    // reported as a warning. Strict: they are errors.
    bool strict = false;
    // Cells equal to one of these (after CSV unquoting) are missing, as is the
    // empty cell.
    std::vector<std::string> missing_tokens = {"NA"};
};

struct LoadReport {
    Dataset data;
    std::size_t dropped_missing_outcome = 0;
    std::vector<std::string> warnings;
};

Schema schema_from_json_text(const std::string& text);
Schema load_schema(const std::filesystem::path& path);
std::string schema_to_json_text(const Schema& schema);
void save_schema(const Schema& schema, const std::filesystem::path& path);

// RFC 4180 CSV with a header row. Numeric parsing is strict; malformed cells
// report file:line. Categorical columns without declared levels get levels in
// order of first appearance.
LoadReport load_csv(const std::filesystem::path& path, const Schema& schema,
                    const LoadOptions& options = {});
LoadReport load_csv_text(const std::string& text, const Schema& schema,
                         const LoadOptions& options = {},
                         const std::string& origin = "<memory>");

// Writes the same dialect load_csv reads: header row, quoting only where
// needed, missing cells empty, doubles in shortest round-trip form.
void save_csv(const Dataset& ds, const std::filesystem::path& path);
std::string csv_text(const Dataset& ds);

std::string format_double(double v);  // shortest text that parses back bit-equal

// Split a CSV document into records of unquoted fields (shared with the
// permutation-test pair reader).
std::vector<std::vector<std::string>> parse_csv_records(const std::string& text,
                                                        const std::string& origin);

} // namespace augmentor
