#pragma once

// Run configuration: TOML (a practical subset) or JSON files with exactly
// one parameter table, `dimensionless` or `physical`, plus optional
// per-command tables. Inline overrides are applied to the parsed document
// before conversion, so they take precedence over the file.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "optodicke/model.hpp"

namespace optodicke::config {

using json = nlohmann::ordered_json;

// Tables, dotted keys, strings, numbers, booleans, arrays and inline
// tables. Throws ValidationError with the offending line number.
json parse_toml(std::string_view text);

// Single TOML value (used for inline overrides).
json parse_toml_value(std::string_view text);

// .json files are parsed as JSON, everything else as TOML.
json load_file(const std::filesystem::path& path);

// "table.key=value" with a TOML value; creates intermediate tables.
void apply_override(json& root, std::string_view assignment);

struct ParameterSet {
    enum class Kind { dimensionless, physical };
    Kind kind = Kind::dimensionless;
    DimensionlessParams dimensionless;
    PhysicalParams physical;
    double g = 0.0;     // rad/s, physical runs only
    double kappa = 0.0; // rad/s, physical runs only
    std::optional<double> P_over_Pc;

    // Dimensionless view of either kind (physical uses its pump power P).
    DimensionlessParams as_dimensionless() const;
};

// An empty document means default dimensionless parameters. Unknown keys,
// wrong types and both tables at once are validation errors.
ParameterSet parameters_from(const json& root);

DimensionlessParams dimensionless_from(const json& table);
PhysicalParams physical_from(const json& table, double* g, double* kappa, std::optional<double>* P_over_Pc);

// Typed lookups in an optional sub-table with a default.
double get_number(const json& root, std::string_view table, std::string_view key, double fallback);
long get_integer(const json& root, std::string_view table, std::string_view key, long fallback);
bool get_bool(const json& root, std::string_view table, std::string_view key, bool fallback);
std::string get_string(const json& root, std::string_view table, std::string_view key, std::string fallback);
std::vector<double> get_numbers(const json& root, std::string_view table, std::string_view key,
                                std::vector<double> fallback);

// Rejects keys in root[table] outside the allowed list.
void check_keys(const json& root, std::string_view table, const std::vector<std::string>& allowed);

} // namespace optodicke::config
