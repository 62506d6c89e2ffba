#include "jscc/cli.hpp"

#include "jscc/report.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>

namespace jscc {

namespace {

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct CommonOptions {
    int n = 2;
    std::string source = "gaussian";
    double power = 1.0;
    double delta = 0.0; // 0: derived default
    double k = 0.0;     // 0: derived default
    std::uint64_t seed = 1;
    std::size_t pilot = kDefaultPilotSamples;
    std::string format = "csv";
    std::string out;
};

struct SimulateOptions {
    double snr_db = 40.0;
    std::string eps = "auto";
    std::optional<double> noise_var;
    std::size_t samples = 1'000'000;
    unsigned workers = 0;
    bool no_ziv = false;
    bool clamp_residual = false;
    std::string lmmse = "model";
};

struct SweepOptions {
    std::string range = "30:60:3";
    std::string policy = "achievability";
    double eps = 0.0;
    std::string fit_window;
    std::string fit_mode = "raw-loglog";
};

struct SolveOptions {
    std::optional<double> snr;
    std::optional<double> snr_db;
    std::string policy = "optimal";
};

std::uint64_t default_seed()
{
    if (const char* env = std::getenv("JSCC_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw UsageError(std::string("JSCC_SEED is not an unsigned integer: ") + env);
        }
    }
    return 1;
}

std::vector<double> parse_numbers(const std::string& text, char sep, std::size_t expected, const char* what)
{
    std::vector<double> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, sep)) {
        try {
            std::size_t used = 0;
            values.push_back(std::stod(item, &used));
            if (used != item.size())
                throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw UsageError(std::string("malformed ") + what + ": '" + text + "'");
        }
    }
    if (values.size() != expected)
        throw UsageError(std::string("malformed ") + what + ": '" + text + "'");
    return values;
}

std::vector<double> parse_range(const std::string& text)
{
    const auto v = parse_numbers(text, ':', 3, "range LO:HI:STEP");
    if (!(v[2] > 0.0) || v[1] < v[0])
        throw UsageError("range needs LO <= HI and STEP > 0");
    return db_grid(v[0], v[1], v[2]);
}

// Reads key=value lines (or a JSON run manifest) and appends "--key value"
// for every key the command line did not set itself.
std::vector<std::string> apply_config_file(std::vector<std::string> args)
{
    auto it = std::find(args.begin(), args.end(), "--config");
    if (it == args.end())
        return args;
    if (std::next(it) == args.end())
        throw UsageError("--config needs a file name");
    const std::string path = *std::next(it);
    args.erase(it, std::next(it, 2));

    std::ifstream in(path);
    if (!in)
        throw UsageError("cannot read config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();

    std::map<std::string, std::string> entries;
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        RunManifest manifest;
        try {
            manifest = RunManifest::from_json(text);
        } catch (const std::exception& e) {
            throw UsageError("invalid manifest '" + path + "': " + e.what());
        }
        if (!args.empty() && args.front() != manifest.command)
            throw UsageError("manifest was written by '" + manifest.command + "', not '" + args.front() + "'");
        entries = manifest.config;
        entries["seed"] = std::to_string(manifest.seed);
    } else {
        std::stringstream lines(text);
        std::string line;
        while (std::getline(lines, line)) {
            const auto hash = line.find('#');
            if (hash != std::string::npos)
                line.erase(hash);
            const auto eq = line.find('=');
            if (eq == std::string::npos) {
                if (line.find_first_not_of(" \t\r") != std::string::npos)
                    throw UsageError("config line without '=': " + line);
                continue;
            }
            auto trim = [](std::string s) {
                const auto a = s.find_first_not_of(" \t\r");
                const auto b = s.find_last_not_of(" \t\r");
                return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
            };
            entries[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
        }
    }

    std::set<std::string> given;
    for (const auto& a : args)
        if (a.rfind("--", 0) == 0)
            given.insert(a.substr(2, a.find('=') == std::string::npos ? std::string::npos : a.find('=') - 2));
    for (const auto& [key, value] : entries) {
        if (given.contains(key) || key == "out" || key == "config")
            continue;
        if (value == "false")
            continue;
        args.push_back("--" + key);
        if (value != "true")
            args.push_back(value);
    }
    return args;
}

void add_common(CLI::App* cmd, CommonOptions& o, bool with_out = true)
{
    cmd->add_option("--n", o.n, "channel uses per source letter (>= 2)");
    cmd->add_option("--source", o.source, "gaussian | uniform")->check(CLI::IsMember({"gaussian", "uniform"}));
    cmd->add_option("--power", o.power, "per-use transmit power P");
    cmd->add_option("--delta", o.delta, "power margin delta (default 0.1 * source variance)");
    cmd->add_option("--k", o.k, "decay constant (default derived from the source)");
    cmd->add_option("--seed", o.seed, "random seed (default $JSCC_SEED or 1)");
    cmd->add_option("--pilot", o.pilot, "pilot samples for sigma_E^2");
    cmd->add_option("--format", o.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
    if (with_out)
        cmd->add_option("--out", o.out, "also write the table to this file");
}

std::map<std::string, std::string> common_config(const CommonOptions& o)
{
    return {{"n", std::to_string(o.n)},       {"source", o.source},
            {"power", format_number(o.power)}, {"delta", format_number(o.delta)},
            {"k", format_number(o.k)},         {"pilot", std::to_string(o.pilot)},
            {"format", o.format}};
}

void check_common(const CommonOptions& o)
{
    if (o.n < 2)
        throw UsageError("n must be ≥ 2");
    if (!(o.power > 0.0))
        throw UsageError("power must be positive");
    if (o.delta < 0.0)
        throw UsageError("delta must be positive");
    if (o.k < 0.0)
        throw UsageError("k must be positive");
    if (o.pilot < kMinPilotSamples)
        throw UsageError("pilot must be at least 10000");
}

// Base configuration whose n, power, delta and k are resolved.
SchemeConfig base_config(const CommonOptions& o, const SourceSpec& src, double eps)
{
    SchemeConfig b;
    b.n = o.n;
    b.power = o.power;
    b.source_variance = src.variance;
    b.delta = o.delta > 0.0 ? o.delta : 0.1 * src.variance;
    b.k = o.k > 0.0 ? o.k : 1.0 / (8.0 * (src.variance + b.delta));
    b.epsilon = eps;
    return b;
}

void write_outputs(const std::string& command, const CommonOptions& common,
                   std::map<std::string, std::string> config, const std::string& table, std::ostream& out)
{
    out << table;
    if (common.out.empty())
        return;
    std::ofstream file(common.out, std::ios::binary);
    if (!file)
        throw std::runtime_error("cannot write '" + common.out + "'");
    file << table;
    if (!file)
        throw std::runtime_error("failed writing '" + common.out + "'");

    RunManifest manifest;
    manifest.command = command;
    manifest.config = std::move(config);
    manifest.seed = common.seed;
    manifest.timestamp = utc_timestamp();
    const std::string manifest_path = common.out + ".manifest.json";
    manifest.outputs = {common.out, manifest_path};
    std::ofstream mf(manifest_path, std::ios::binary);
    if (!mf)
        throw std::runtime_error("cannot write '" + manifest_path + "'");
    mf << manifest.to_json();
}

RunOptions run_options(const CommonOptions& c, const SimulateOptions& s)
{
    RunOptions opts;
    opts.workers = s.workers == 0 ? default_workers() : s.workers;
    opts.pilot_samples = c.pilot;
    opts.compute_ziv = !s.no_ziv;
    opts.decoder.clamp_residual = s.clamp_residual;
    opts.empirical_lmmse = s.lmmse == "empirical";
    return opts;
}

void add_run_flags(CLI::App* cmd, SimulateOptions& s)
{
    cmd->add_option("--samples", s.samples, "source letters per point (>= 1000)");
    cmd->add_option("--workers", s.workers, "worker threads (default: available parallelism)");
    cmd->add_flag("--no-ziv", s.no_ziv, "skip the numerical Ziv bound");
    cmd->add_flag("--clamp-residual", s.clamp_residual, "clamp the residual estimate to [-1/2, 1/2)");
    cmd->add_option("--lmmse", s.lmmse, "model | empirical LMMSE moments")
        ->check(CLI::IsMember({"model", "empirical"}));
}

void add_run_config(std::map<std::string, std::string>& cfg, const SimulateOptions& s)
{
    cfg["samples"] = std::to_string(s.samples);
    cfg["no-ziv"] = s.no_ziv ? "true" : "false";
    cfg["clamp-residual"] = s.clamp_residual ? "true" : "false";
    cfg["lmmse"] = s.lmmse;
}

int cmd_simulate(const CommonOptions& c, const SimulateOptions& s, std::ostream& out)
{
    check_common(c);
    if (s.samples < 1000)
        throw UsageError("samples must be at least 1000");
    const SourceSpec src = source_from_name(c.source);
    const double snr = std::pow(10.0, s.snr_db / 10.0);

    SchemeConfig base = base_config(c, src, 0.0);
    double eps = 0.0;
    if (s.eps == "auto") {
        if (!(snr > std::exp(1.0)))
            throw UsageError("--eps auto needs snr above e (4.34 dB)");
        eps = achievability_eps(snr, c.n, base.k);
    } else {
        eps = parse_numbers(s.eps, ',', 1, "--eps")[0];
    }

    RunOptions opts = run_options(c, s);
    SchemeConfig cfg;
    if (s.noise_var && *s.noise_var > 0.0) {
        const double actual_snr = c.power / *s.noise_var;
        cfg = SchemeConfig::with_epsilon(c.n, actual_snr, eps, src, c.power, base.delta, base.k);
    } else {
        if (s.noise_var && *s.noise_var < 0.0)
            throw UsageError("noise variance must be non-negative");
        opts.noiseless = s.noise_var.has_value();
        cfg = SchemeConfig::with_epsilon(c.n, snr, eps, src, c.power, base.delta, base.k);
    }

    const SweepRow row = run_point(cfg, src, s.samples, c.seed, opts);
    std::ostringstream table;
    const std::vector<SweepRow> rows{row};
    if (c.format == "json")
        write_sweep_json(table, rows, c.n);
    else
        write_sweep_csv(table, rows, c.n);

    auto config = common_config(c);
    add_run_config(config, s);
    config["snr-db"] = format_number(s.snr_db);
    config["eps"] = s.eps;
    if (s.noise_var)
        config["noise-var"] = format_number(*s.noise_var);
    write_outputs("simulate", c, config, table.str(), out);
    return kExitOk;
}

int cmd_sweep(const CommonOptions& c, const SimulateOptions& s, const SweepOptions& w, std::ostream& out,
              std::ostream& err)
{
    check_common(c);
    if (s.samples < 1000)
        throw UsageError("samples must be at least 1000");
    const SourceSpec src = source_from_name(c.source);
    const auto grid = parse_range(w.range);
    const EpsPolicy policy = eps_policy_from_name(w.policy);
    const FitMode mode = fit_mode_from_name(w.fit_mode);
    double lo = grid.front(), hi = grid.back();
    if (!w.fit_window.empty()) {
        const auto v = parse_numbers(w.fit_window, ':', 2, "fit window LO:HI");
        lo = v[0];
        hi = v[1];
    }
    if (policy == EpsPolicy::achievability && !(std::pow(10.0, grid.front() / 10.0) > std::exp(1.0)))
        throw UsageError("achievability policy needs every snr above e (4.34 dB)");
    if (policy == EpsPolicy::optimal && !(grid.front() > 0.0))
        throw UsageError("snr must exceed 1 for the optimal policy");

    const SchemeConfig base = base_config(c, src, w.eps);
    const auto rows = sweep(base, src, grid, policy, s.samples, c.seed, run_options(c, s));

    std::ostringstream table;
    std::optional<ScalingFit> fit;
    try {
        fit = fit_scaling(rows, lo, hi, mode);
    } catch (const std::invalid_argument& e) {
        err << "note: no fit line: " << e.what() << '\n';
    }
    if (c.format == "json") {
        write_sweep_json(table, rows, c.n);
        if (fit) {
            nlohmann::json j = {{"fit",
                                 {{"mode", fit_mode_name(fit->mode)},
                                  {"window_lo_db", fit->window_lo_db},
                                  {"window_hi_db", fit->window_hi_db},
                                  {"points", fit->points},
                                  {"slope", fit->slope},
                                  {"intercept", fit->intercept},
                                  {"r2", fit->r2}}}};
            table << j.dump() << '\n';
        }
    } else {
        write_sweep_csv(table, rows, c.n);
        if (fit)
            table << fit_summary_line(*fit) << '\n';
    }

    auto config = common_config(c);
    add_run_config(config, s);
    config["snr-db-range"] = w.range;
    config["eps-policy"] = w.policy;
    config["eps"] = format_number(w.eps);
    config["fit-mode"] = w.fit_mode;
    if (!w.fit_window.empty())
        config["fit-window"] = w.fit_window;
    write_outputs("sweep", c, config, table.str(), out);
    return kExitOk;
}

int cmd_bounds(const CommonOptions& c, const SweepOptions& w, bool no_ziv, std::size_t quad_points,
               std::ostream& out)
{
    check_common(c);
    const SourceSpec src = source_from_name(c.source);
    const auto grid = parse_range(w.range);
    const EpsPolicy policy = eps_policy_from_name(w.policy);
    if (policy == EpsPolicy::achievability && !(std::pow(10.0, grid.front() / 10.0) > std::exp(1.0)))
        throw UsageError("achievability policy needs every snr above e (4.34 dB)");
    if (policy == EpsPolicy::optimal && !(grid.front() > 0.0))
        throw UsageError("snr must exceed 1 for the optimal policy");
    const SchemeConfig base = base_config(c, src, w.eps);

    std::vector<BoundRow> rows;
    for (double db : grid) {
        const double snr = std::pow(10.0, db / 10.0);
        SchemeConfig cfg = SchemeConfig::with_epsilon(c.n, snr, policy_epsilon(policy, snr, base), src, c.power,
                                                      base.delta, base.k);
        cfg.sigma_e2 = estimate_sigma_e(cfg, src, c.pilot, c.seed);
        BoundRow r;
        r.snr_db = db;
        r.snr = snr;
        r.n = c.n;
        r.eps = cfg.epsilon;
        r.beta = cfg.beta;
        r.opta = opta_bound(snr, c.n, src);
        r.lemma4 = lemma4_bound(snr, c.n, cfg.epsilon, src, cfg.sigma_e2);
        r.lemma5 = lemma5_bound(snr, c.n, cfg.epsilon, src, cfg.delta, cfg.source_variance);
        if (snr > 1.0)
            r.theorem_ref = theorem_curve(snr, c.n);
        if (!no_ziv) {
            const double width = src.ziv_hi - src.ziv_lo;
            for (double d : {residual_delta(snr, c.n, cfg.epsilon), 1.0 / cfg.beta})
                if (d > 0.0 && d < width) {
                    const double v = scheme_ziv_bound(cfg, src, d, quad_points);
                    if (!r.ziv || v > *r.ziv)
                        r.ziv = v;
                }
        }
        rows.push_back(r);
    }

    std::ostringstream table;
    if (c.format == "json")
        write_bounds_json(table, rows);
    else
        write_bounds_csv(table, rows);

    auto config = common_config(c);
    config["snr-db-range"] = w.range;
    config["eps-policy"] = w.policy;
    config["eps"] = format_number(w.eps);
    config["no-ziv"] = no_ziv ? "true" : "false";
    config["quad-points"] = std::to_string(quad_points);
    write_outputs("bounds", c, config, table.str(), out);
    return kExitOk;
}

int cmd_solve_eps(const CommonOptions& c, const SolveOptions& o, std::ostream& out)
{
    if (c.n < 2)
        throw UsageError("n must be ≥ 2");
    if (o.snr && o.snr_db)
        throw UsageError("give either --snr or --snr-db, not both");
    if (!o.snr && !o.snr_db)
        throw UsageError("--snr or --snr-db is required");
    const double snr = o.snr ? *o.snr : std::pow(10.0, *o.snr_db / 10.0);
    const SourceSpec src = source_from_name(c.source);
    const double delta = c.delta > 0.0 ? c.delta : 0.1 * src.variance;
    if (c.k < 0.0)
        throw UsageError("k must be positive");

    std::ostringstream table;
    nlohmann::json j;
    if (o.policy == "achievability") {
        const double k = c.k > 0.0 ? c.k : 1.0 / (8.0 * (src.variance + delta));
        if (!(snr > std::exp(1.0)))
            throw UsageError("snr must exceed e for the achievability schedule");
        const double eps = achievability_eps(snr, c.n, k);
        j = {{"snr", snr}, {"n", c.n}, {"k", k}, {"eps", eps}, {"snr_pow_eps", std::pow(snr, eps)}};
        if (c.format == "csv")
            table << "snr,n,k,eps,snr_pow_eps\n"
                  << format_number(snr) << ',' << c.n << ',' << format_number(k) << ',' << format_number(eps)
                  << ',' << format_number(std::pow(snr, eps)) << '\n';
    } else {
        const double k = c.k > 0.0 ? c.k : lemma5_decay_constant(delta, src.variance);
        if (!(snr > 1.0))
            throw UsageError("snr must exceed 1");
        const EpsSolution sol = solve_eps_star(snr, c.n, k);
        j = {{"snr", snr},     {"n", c.n},           {"k", k},           {"eps_star", sol.eps_star},
             {"l1", sol.l1},   {"l2", sol.l2},       {"residual", sol.residual()},
             {"xi", sol.xi},   {"w_arg", sol.w_arg}, {"snr_pow_eps", sol.snr_pow_eps}};
        if (c.format == "csv")
            table << "snr,n,k,eps_star,l1,l2,residual,xi,w_arg,snr_pow_eps\n"
                  << format_number(snr) << ',' << c.n << ',' << format_number(k) << ','
                  << format_number(sol.eps_star) << ',' << format_number(sol.l1) << ',' << format_number(sol.l2)
                  << ',' << format_number(sol.residual()) << ',' << format_number(sol.xi) << ','
                  << format_number(sol.w_arg) << ',' << format_number(sol.snr_pow_eps) << '\n';
    }
    if (c.format == "json")
        table << j.dump() << '\n';
    out << table.str();
    return kExitOk;
}

} // namespace

int run_cli(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Recursive-quantization joint source-channel coding toolkit", "jscc"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kToolVersion));

    CommonOptions common;
    SimulateOptions sim;
    SweepOptions sw;
    SolveOptions solve;
    bool bounds_no_ziv = false;
    std::size_t quad_points = 64;

    auto* simulate = app.add_subcommand("simulate", "simulate one operating point");
    add_common(simulate, common);
    add_run_flags(simulate, sim);
    simulate->add_option("--snr-db", sim.snr_db, "SNR in dB");
    simulate->add_option("--eps", sim.eps, "epsilon, or 'auto' for the achievability schedule");
    simulate->add_option("--noise-var", sim.noise_var, "override the noise variance (0 = noiseless)");

    auto* sweep_cmd = app.add_subcommand("sweep", "simulate an SNR grid and fit the scaling");
    add_common(sweep_cmd, common);
    add_run_flags(sweep_cmd, sim);
    sweep_cmd->add_option("--snr-db-range", sw.range, "LO:HI:STEP in dB");
    sweep_cmd->add_option("--eps-policy", sw.policy, "fixed | achievability | optimal")
        ->check(CLI::IsMember({"fixed", "achievability", "optimal"}));
    sweep_cmd->add_option("--eps", sw.eps, "epsilon for the fixed policy");
    sweep_cmd->add_option("--fit-window", sw.fit_window, "LO:HI in dB (default: whole grid)");
    sweep_cmd->add_option("--fit-mode", sw.fit_mode, "raw-loglog | vs-theorem-curve")
        ->check(CLI::IsMember({"raw-loglog", "vs-theorem-curve"}));

    auto* bounds_cmd = app.add_subcommand("bounds", "evaluate the lower bounds on an SNR grid");
    add_common(bounds_cmd, common);
    bounds_cmd->add_option("--snr-db-range", sw.range, "LO:HI:STEP in dB");
    bounds_cmd->add_option("--eps-policy", sw.policy, "fixed | achievability | optimal")
        ->check(CLI::IsMember({"fixed", "achievability", "optimal"}));
    bounds_cmd->add_option("--eps", sw.eps, "epsilon for the fixed policy");
    bounds_cmd->add_flag("--no-ziv", bounds_no_ziv, "skip the numerical Ziv bound");
    bounds_cmd->add_option("--quad-points", quad_points, "initial quadrature panels for the Ziv bound");

    auto* solve_cmd = app.add_subcommand("solve-eps", "solve for the resolution exponent");
    add_common(solve_cmd, common, false);
    solve_cmd->add_option("--snr", solve.snr, "linear SNR");
    solve_cmd->add_option("--snr-db", solve.snr_db, "SNR in dB");
    solve_cmd->add_option("--policy", solve.policy, "optimal | achievability")
        ->check(CLI::IsMember({"optimal", "achievability"}));

    try {
        common.seed = default_seed();
        auto args = apply_config_file(raw_args);
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForVersion&) {
        out << kToolVersion << '\n';
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        if (*simulate)
            return cmd_simulate(common, sim, out);
        if (*sweep_cmd)
            return cmd_sweep(common, sim, sw, out, err);
        if (*bounds_cmd)
            return cmd_bounds(common, sw, bounds_no_ziv, quad_points, out);
        return cmd_solve_eps(common, solve, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
}

} // namespace jscc
