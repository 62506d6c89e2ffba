#include "jscc/experiments.hpp"

#include "jscc/rng.hpp"
#include "jscc/special.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <iostream>
#include <stdexcept>
#include <string>
#include <thread>

namespace jscc {

EpsPolicy eps_policy_from_name(std::string_view name)
{
    if (name == "fixed")
        return EpsPolicy::fixed;
    if (name == "achievability")
        return EpsPolicy::achievability;
    if (name == "optimal" || name == "theorem-optimal")
        return EpsPolicy::optimal;
    throw std::invalid_argument("unknown eps policy '" + std::string(name) + "'");
}

std::string_view eps_policy_name(EpsPolicy policy)
{
    switch (policy) {
    case EpsPolicy::fixed:
        return "fixed";
    case EpsPolicy::achievability:
        return "achievability";
    case EpsPolicy::optimal:
        return "optimal";
    }
    return "fixed";
}

FitMode fit_mode_from_name(std::string_view name)
{
    if (name == "raw-loglog")
        return FitMode::raw_loglog;
    if (name == "vs-theorem-curve")
        return FitMode::vs_theorem_curve;
    throw std::invalid_argument("unknown fit mode '" + std::string(name) + "'");
}

std::string_view fit_mode_name(FitMode mode)
{
    return mode == FitMode::raw_loglog ? "raw-loglog" : "vs-theorem-curve";
}

unsigned default_workers()
{
    return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

constexpr std::size_t kMinSamples = 1000;
constexpr std::uint64_t kCalibrationStream = ~0ULL;

std::uint64_t row_key(std::uint64_t seed, const SchemeConfig& cfg)
{
    return derive_stream(derive_stream(seed, std::bit_cast<std::uint64_t>(cfg.snr)),
                         static_cast<std::uint64_t>(cfg.n));
}

ErrorAccumulator simulate_batch(const SchemeConfig& cfg, const SourceSpec& src, std::size_t count,
                                RngStream& rng, const DecoderOptions& dec)
{
    ErrorAccumulator acc(cfg);
    for (std::size_t i = 0; i < count; ++i) {
        const double s = src.sample(rng);
        const Codeword cw = modulate(encode(s, cfg), cfg);
        const ChannelOutput out = transmit(cw.x, cfg.noise_var, rng);
        acc.add(s, cw, decode(out, cfg, dec));
    }
    return acc;
}

double calibrate_lmmse(const SchemeConfig& cfg, const SourceSpec& src, std::size_t count, std::uint64_t key)
{
    RngStream rng(key, kCalibrationStream);
    std::vector<double> e(count), y(count);
    for (std::size_t i = 0; i < count; ++i) {
        const Codeword cw = modulate(encode(src.sample(rng), cfg), cfg);
        e[i] = cw.e_final;
        y[i] = transmit(cw.x, cfg.noise_var, rng).y.back();
    }
    return lmmse_coefficient_empirical(e, y);
}

} // namespace

SweepRow run_point(SchemeConfig cfg, const SourceSpec& src, std::size_t samples, std::uint64_t seed,
                   const RunOptions& opts)
{
    if (samples < kMinSamples)
        throw std::invalid_argument("run_point needs at least 10^3 samples");
    cfg.validate();
    if (opts.noiseless)
        cfg.noise_var = 0.0;

    const std::uint64_t key = row_key(seed, cfg);
    if (!(cfg.sigma_e2 > 0.0)) {
        const auto moments = estimate_residual_moments(
            cfg, [&src](RngStream& rng) { return src.sample(rng); }, opts.pilot_samples, key);
        if (!moments.diagnostic.empty())
            std::cerr << "warning: " << moments.diagnostic << '\n';
        cfg.sigma_e2 = moments.variance;
    }
    cfg.validate(true);

    DecoderOptions dec = opts.decoder;
    if (opts.empirical_lmmse && !dec.lmmse_coefficient)
        dec.lmmse_coefficient = calibrate_lmmse(cfg, src, opts.pilot_samples, key);

    const std::size_t batch = std::max<std::size_t>(opts.batch_size, 1);
    const std::size_t batches = (samples + batch - 1) / batch;
    std::vector<ErrorAccumulator> partial(batches, ErrorAccumulator(cfg));
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};

    auto worker = [&] {
        try {
            for (std::size_t b = next++; b < batches && !failed; b = next++) {
                RngStream rng(key, b);
                const std::size_t count = std::min(batch, samples - b * batch);
                partial[b] = simulate_batch(cfg, src, count, rng, dec);
            }
        } catch (...) {
            if (!failed.exchange(true))
                failure = std::current_exception();
        }
    };

    const unsigned threads = std::clamp<unsigned>(opts.workers, 1, static_cast<unsigned>(batches));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t)
            pool.emplace_back(worker);
    }
    if (failure)
        std::rethrow_exception(failure);

    ErrorAccumulator total(cfg);
    for (const auto& p : partial)
        total.merge(p);
    const ErrorReport report = total.report();

    SweepRow row;
    row.snr = cfg.snr;
    row.snr_db = 10.0 * std::log10(cfg.snr);
    row.n = cfg.n;
    row.eps = cfg.epsilon;
    row.beta = cfg.beta;
    row.samples = report.samples;
    row.sigma_e2 = cfg.sigma_e2;
    row.mse = report.mse_direct;
    row.ci_halfwidth = report.ci_halfwidth;
    row.err_q = report.err_q;
    row.err_e = report.err_e;
    row.mse_components = report.mse_components;
    row.components_stderr = report.stderr_components;
    row.mse_stderr = report.stderr_direct;

    row.opta = opta_bound(cfg.snr, cfg.n, src);
    row.lemma4 = lemma4_bound(cfg.snr, cfg.n, cfg.epsilon, src, cfg.sigma_e2);
    row.lemma5 = lemma5_bound(cfg.snr, cfg.n, cfg.epsilon, src, cfg.delta, cfg.source_variance);
    if (cfg.snr > 1.0)
        row.theorem_ref = theorem_curve(cfg.snr, cfg.n);

    if (opts.compute_ziv) {
        // The bound describes the design channel, also for noiseless runs.
        SchemeConfig design = cfg;
        design.noise_var = cfg.power / cfg.snr;
        const double width = src.ziv_hi - src.ziv_lo;
        for (double delta : {residual_delta(cfg.snr, cfg.n, cfg.epsilon), 1.0 / cfg.beta}) {
            if (!(delta > 0.0 && delta < width))
                continue;
            const double v = scheme_ziv_bound(design, src, delta, opts.ziv_quad_points);
            if (!row.ziv || v > *row.ziv)
                row.ziv = v;
        }
    }
    return row;
}

double policy_epsilon(EpsPolicy policy, double snr, const SchemeConfig& base)
{
    switch (policy) {
    case EpsPolicy::fixed:
        return base.epsilon;
    case EpsPolicy::achievability:
        return achievability_eps(snr, base.n, base.k);
    case EpsPolicy::optimal:
        return std::max(0.0, solve_eps_star(snr, base.n, 1.0 / base.k).eps_star);
    }
    return base.epsilon;
}

std::vector<SweepRow> sweep(const SchemeConfig& base, const SourceSpec& src, std::span<const double> snr_db_grid,
                            EpsPolicy policy, std::size_t samples, std::uint64_t seed, const RunOptions& opts)
{
    for (std::size_t i = 1; i < snr_db_grid.size(); ++i)
        if (!(snr_db_grid[i] > snr_db_grid[i - 1]))
            throw std::invalid_argument("sweep: snr grid must be strictly increasing");

    std::vector<SweepRow> rows;
    rows.reserve(snr_db_grid.size());
    for (double db : snr_db_grid) {
        const double snr = std::pow(10.0, db / 10.0);
        SchemeConfig cfg = SchemeConfig::with_epsilon(base.n, snr, policy_epsilon(policy, snr, base), src,
                                                      base.power, base.delta, base.k);
        SweepRow row = run_point(cfg, src, samples, seed, opts);
        row.snr_db = db;
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<double> db_grid(double lo, double hi, double step)
{
    if (!(step > 0.0))
        throw std::invalid_argument("db_grid: step must be positive");
    if (hi < lo)
        throw std::invalid_argument("db_grid: hi must not be below lo");
    std::vector<double> grid;
    for (std::size_t i = 0;; ++i) {
        const double v = lo + static_cast<double>(i) * step;
        if (v > hi + 1e-9)
            break;
        grid.push_back(v);
    }
    return grid;
}

ScalingFit fit_scaling(std::span<const SweepRow> rows, double lo_db, double hi_db, FitMode mode)
{
    std::vector<double> x, y;
    for (const auto& r : rows) {
        if (r.snr_db < lo_db - 1e-9 || r.snr_db > hi_db + 1e-9)
            continue;
        if (!(r.mse > 0.0))
            throw std::invalid_argument("fit_scaling: mse must be positive");
        x.push_back(mode == FitMode::raw_loglog ? std::log(r.snr) : std::log(theorem_curve(r.snr, r.n)));
        y.push_back(std::log(r.mse));
    }
    if (x.size() < 4)
        throw std::invalid_argument("fit_scaling: need at least 4 rows in the window, got " + std::to_string(x.size()));
    const LineFit line = fit_line(x, y);
    ScalingFit fit;
    fit.slope = line.slope;
    fit.intercept = line.intercept;
    fit.r2 = line.r2;
    fit.window_lo_db = lo_db;
    fit.window_hi_db = hi_db;
    fit.mode = mode;
    fit.points = x.size();
    return fit;
}

LineFit fit_symbol_error_decay(std::span<const SweepRow> rows, std::size_t level)
{
    std::vector<double> x, y;
    for (const auto& r : rows) {
        if (level >= r.err_q.size() || !(r.err_q[level] > 0.0))
            continue;
        x.push_back(std::pow(r.snr, r.eps));
        y.push_back(std::log(r.err_q[level]));
    }
    return fit_line(x, y);
}

std::vector<std::string> dominance_violations(const SweepRow& row, double margin)
{
    std::vector<std::string> names;
    const double ceiling = row.mse + margin * row.ci_halfwidth;
    if (row.opta > ceiling)
        names.emplace_back("opta");
    if (row.lemma4 && *row.lemma4 > ceiling)
        names.emplace_back("lemma4");
    if (row.lemma5 && *row.lemma5 > ceiling)
        names.emplace_back("lemma5");
    if (row.ziv && *row.ziv > ceiling)
        names.emplace_back("ziv");
    return names;
}

BinarySignalingResult binary_signaling_check(double s, double delta, const SchemeConfig& cfg,
                                             const SourceSpec& src, std::size_t trials, std::uint64_t seed)
{
    if (trials < 10'000)
        throw std::invalid_argument("binary_signaling_check needs at least 10^4 trials");
    if (!(src.density(s) > 0.0) || !(src.density(s + delta) > 0.0))
        throw std::invalid_argument("binary_signaling_check: s and s + delta must lie in the source support");
    cfg.validate(true);

    const auto x0 = channel_inputs(s, cfg);
    const auto x1 = channel_inputs(s + delta, cfg);
    double d2 = 0.0;
    for (std::size_t i = 0; i < x0.size(); ++i)
        d2 += (x0[i] - x1[i]) * (x0[i] - x1[i]);

    BinarySignalingResult res;
    res.trials = trials;
    res.distance = std::sqrt(d2);
    const double sigma_z = std::sqrt(cfg.noise_var);
    if (sigma_z == 0.0)
        res.predicted = res.distance > 0.0 ? 0.0 : 0.5;
    else
        res.predicted = gaussian_q(res.distance / (2.0 * sigma_z));
    res.stderr_binomial = std::sqrt(res.predicted * (1.0 - res.predicted) / static_cast<double>(trials));

    RngStream rng(seed, 0x62696e617279ULL);
    std::size_t errors = 0;
    for (std::size_t t = 0; t < trials; ++t) {
        const bool sent_second = rng.coin();
        const auto out = transmit(sent_second ? x1 : x0, cfg.noise_var, rng);
        double to0 = 0.0, to1 = 0.0;
        for (std::size_t i = 0; i < x0.size(); ++i) {
            to0 += (out.y[i] - x0[i]) * (out.y[i] - x0[i]);
            to1 += (out.y[i] - x1[i]) * (out.y[i] - x1[i]);
        }
        const bool decide_second = to1 < to0;
        if (decide_second != sent_second)
            ++errors;
    }
    res.empirical = static_cast<double>(errors) / static_cast<double>(trials);
    return res;
}

} // namespace jscc
