#include "jscc/report.hpp"

#include <json.hpp>

#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>

namespace jscc {

using nlohmann::json;

std::string format_number(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

std::string format_optional(const std::optional<double>& v)
{
    return v ? format_number(*v) : "NA";
}

std::vector<std::string> sweep_columns(int n)
{
    std::vector<std::string> cols{"snr_db", "snr", "n", "eps", "beta", "samples", "mse", "ci"};
    for (int i = 1; i < n; ++i)
        cols.push_back("err_q_" + std::to_string(i));
    for (const char* c : {"err_e", "opta", "lemma4", "lemma5", "ziv", "theorem_ref"})
        cols.emplace_back(c);
    return cols;
}

namespace {

void write_header(std::ostream& os, const std::vector<std::string>& cols)
{
    for (std::size_t i = 0; i < cols.size(); ++i)
        os << (i ? "," : "") << cols[i];
    os << '\n';
}

// Cells in sweep_columns order; std::nullopt marks NA.
std::vector<std::optional<double>> sweep_cells(const SweepRow& r, int n)
{
    std::vector<std::optional<double>> cells{r.snr_db, r.snr, static_cast<double>(r.n), r.eps, r.beta,
                                             static_cast<double>(r.samples), r.mse, r.ci_halfwidth};
    for (int i = 0; i + 1 < n; ++i)
        cells.emplace_back(static_cast<std::size_t>(i) < r.err_q.size() ? std::optional<double>(r.err_q[i])
                                                                         : std::nullopt);
    cells.insert(cells.end(), {r.err_e, r.opta, r.lemma4, r.lemma5, r.ziv, r.theorem_ref});
    return cells;
}

std::vector<std::optional<double>> bound_cells(const BoundRow& r)
{
    return {r.snr_db, r.snr, static_cast<double>(r.n), r.eps, r.beta,
            r.opta,   r.lemma4, r.lemma5, r.ziv, r.theorem_ref};
}

bool is_integer_column(const std::string& name)
{
    return name == "n" || name == "samples";
}

void write_csv_row(std::ostream& os, const std::vector<std::string>& cols,
                   const std::vector<std::optional<double>>& cells)
{
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i)
            os << ',';
        if (cells[i] && is_integer_column(cols[i]))
            os << static_cast<long long>(*cells[i]);
        else
            os << format_optional(cells[i]);
    }
    os << '\n';
}

void write_json_row(std::ostream& os, const std::vector<std::string>& cols,
                    const std::vector<std::optional<double>>& cells)
{
    json obj = json::object();
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (!cells[i] || !std::isfinite(*cells[i]))
            obj[cols[i]] = nullptr;
        else if (is_integer_column(cols[i]))
            obj[cols[i]] = static_cast<long long>(*cells[i]);
        else
            obj[cols[i]] = *cells[i];
    }
    os << obj.dump() << '\n';
}

} // namespace

void write_sweep_csv(std::ostream& os, std::span<const SweepRow> rows, int n)
{
    const auto cols = sweep_columns(n);
    write_header(os, cols);
    for (const auto& r : rows)
        write_csv_row(os, cols, sweep_cells(r, n));
}

void write_sweep_json(std::ostream& os, std::span<const SweepRow> rows, int n)
{
    const auto cols = sweep_columns(n);
    for (const auto& r : rows)
        write_json_row(os, cols, sweep_cells(r, n));
}

std::string fit_summary_line(const ScalingFit& fit)
{
    return "# fit mode=" + std::string(fit_mode_name(fit.mode)) + " window=" + format_number(fit.window_lo_db) + ":"
           + format_number(fit.window_hi_db) + " points=" + std::to_string(fit.points)
           + " slope=" + format_number(fit.slope) + " intercept=" + format_number(fit.intercept)
           + " r2=" + format_number(fit.r2);
}

std::vector<std::string> bound_columns()
{
    return {"snr_db", "snr", "n", "eps", "beta", "opta", "lemma4", "lemma5", "ziv", "theorem_ref"};
}

void write_bounds_csv(std::ostream& os, std::span<const BoundRow> rows)
{
    const auto cols = bound_columns();
    write_header(os, cols);
    for (const auto& r : rows)
        write_csv_row(os, cols, bound_cells(r));
}

void write_bounds_json(std::ostream& os, std::span<const BoundRow> rows)
{
    const auto cols = bound_columns();
    for (const auto& r : rows)
        write_json_row(os, cols, bound_cells(r));
}

std::string RunManifest::to_json() const
{
    json j;
    j["command"] = command;
    j["config"] = config;
    j["seed"] = seed;
    j["tool_version"] = tool_version;
    j["csv_schema_version"] = kCsvSchemaVersion;
    j["timestamp"] = timestamp;
    j["outputs"] = outputs;
    return j.dump(2) + "\n";
}

RunManifest RunManifest::from_json(const std::string& text)
{
    const json j = json::parse(text);
    RunManifest m;
    m.command = j.at("command").get<std::string>();
    m.config = j.at("config").get<std::map<std::string, std::string>>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.tool_version = j.value("tool_version", std::string(kToolVersion));
    m.timestamp = j.value("timestamp", std::string());
    m.outputs = j.value("outputs", std::vector<std::string>{});
    return m;
}

std::string utc_timestamp()
{
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

} // namespace jscc
