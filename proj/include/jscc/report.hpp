#pragma once

#include "jscc/experiments.hpp"

#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace jscc {

inline constexpr int kCsvSchemaVersion = 1;
inline constexpr std::string_view kToolVersion = "0.1.0";

/// 17 significant digits, '.' separator, independent of the C locale.
std::string format_number(double v);
std::string format_optional(const std::optional<double>& v);

/// Column names of a sweep table for a given n.
std::vector<std::string> sweep_columns(int n);

void write_sweep_csv(std::ostream& os, std::span<const SweepRow> rows, int n);
/// One JSON object per line with the sweep_columns field names; NA is null.
void write_sweep_json(std::ostream& os, std::span<const SweepRow> rows, int n);

std::string fit_summary_line(const ScalingFit& fit);

/// Bound table: snr_db,snr,n,eps,beta,opta,lemma4,lemma5,ziv,theorem_ref.
struct BoundRow {
    double snr_db = 0.0;
    double snr = 0.0;
    int n = 0;
    double eps = 0.0;
    double beta = 0.0;
    double opta = 0.0;
    std::optional<double> lemma4;
    std::optional<double> lemma5;
    std::optional<double> ziv;
    std::optional<double> theorem_ref;
};

std::vector<std::string> bound_columns();
void write_bounds_csv(std::ostream& os, std::span<const BoundRow> rows);
void write_bounds_json(std::ostream& os, std::span<const BoundRow> rows);

/// Provenance written next to every output file.
struct RunManifest {
    std::string command;
    std::map<std::string, std::string> config;
    std::uint64_t seed = 0;
    std::string tool_version{kToolVersion};
    std::string timestamp; // ISO-8601 UTC
    std::vector<std::string> outputs;

    [[nodiscard]] std::string to_json() const;
    static RunManifest from_json(const std::string& text);
};

std::string utc_timestamp();

} // namespace jscc
