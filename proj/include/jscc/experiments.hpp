#pragma once

#include "jscc/bounds.hpp"
#include "jscc/decoder.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace jscc {

/// One simulated operating point with the bounds evaluated at the same
/// (snr, epsilon). Bounds without a valid finite-snr form are empty.
struct SweepRow {
    double snr_db = 0.0;
    double snr = 0.0;
    int n = 0;
    double eps = 0.0;
    double beta = 0.0;
    std::size_t samples = 0;
    double sigma_e2 = 0.0;
    double mse = 0.0;
    double ci_halfwidth = 0.0;
    std::vector<double> err_q;
    double err_e = 0.0;
    double mse_components = 0.0;
    double components_stderr = 0.0;
    double mse_stderr = 0.0;
    double opta = 0.0;
    std::optional<double> lemma4;
    std::optional<double> lemma5;
    std::optional<double> ziv;
    std::optional<double> theorem_ref;
};

enum class EpsPolicy { fixed, achievability, optimal };

EpsPolicy eps_policy_from_name(std::string_view name);
std::string_view eps_policy_name(EpsPolicy policy);

struct RunOptions {
    unsigned workers = 1;
    std::size_t batch_size = 1u << 16;
    std::size_t pilot_samples = kDefaultPilotSamples;
    DecoderOptions decoder;
    /// Measure the LMMSE coefficient on a calibration batch of
    /// pilot_samples letters instead of using the model moments.
    bool empirical_lmmse = false;
    bool compute_ziv = true;
    std::size_t ziv_quad_points = 64;
    /// Run the channel without noise while keeping the design snr for beta.
    bool noiseless = false;
};

/// Number of worker threads the machine offers (at least 1).
unsigned default_workers();

/// Encode, transmit, decode and decompose `samples` letters at `cfg`.
/// A non-positive cfg.sigma_e2 is replaced by a pilot estimate. Samples are
/// split into fixed-size batches, each with its own stream derived from
/// (seed, snr, n, batch index), and reduced in batch order, so the result
/// does not depend on the worker count. Throws std::invalid_argument for
/// fewer than 10^3 samples and ConfigError for an invalid cfg.
SweepRow run_point(SchemeConfig cfg, const SourceSpec& src, std::size_t samples, std::uint64_t seed,
                   const RunOptions& opts = {});

/// Epsilon used by `policy` at `snr`. `base.epsilon` is the fixed value;
/// achievability uses base.k; optimal balances the two scheme bounds with
/// the l2 decay divisor 1 / base.k and is floored at zero.
double policy_epsilon(EpsPolicy policy, double snr, const SchemeConfig& base);

/// One run_point per grid entry (dB). Each row's streams depend only on the
/// seed and the row's own snr, so sweeping sub-grids and concatenating gives
/// the same rows. Throws std::invalid_argument unless the grid is strictly
/// increasing.
std::vector<SweepRow> sweep(const SchemeConfig& base, const SourceSpec& src, std::span<const double> snr_db_grid,
                            EpsPolicy policy, std::size_t samples, std::uint64_t seed, const RunOptions& opts = {});

/// Grid lo, lo+step, ..., up to hi inclusive (with 1e-9 slack).
std::vector<double> db_grid(double lo, double hi, double step);

enum class FitMode { raw_loglog, vs_theorem_curve };

FitMode fit_mode_from_name(std::string_view name);
std::string_view fit_mode_name(FitMode mode);

struct ScalingFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    double window_lo_db = 0.0;
    double window_hi_db = 0.0;
    FitMode mode = FitMode::raw_loglog;
    std::size_t points = 0;
};

/// Least squares of log(mse) on log(snr) or on log(theorem_curve) over the
/// rows with snr_db in [lo_db, hi_db]. Throws std::invalid_argument with
/// fewer than four rows in the window.
ScalingFit fit_scaling(std::span<const SweepRow> rows, double lo_db, double hi_db, FitMode mode);

/// Regression of ln(err_q[level]) on snr^eps across rows; rows with a zero
/// error energy are skipped. Throws std::invalid_argument with fewer than
/// two usable rows.
LineFit fit_symbol_error_decay(std::span<const SweepRow> rows, std::size_t level = 0);

/// Names of bounds exceeding mse + margin * ci_halfwidth.
std::vector<std::string> dominance_violations(const SweepRow& row, double margin = 4.0);

struct BinarySignalingResult {
    double empirical = 0.0; // minimum-distance error rate
    double predicted = 0.0; // Q(d / (2 sigma_z))
    double stderr_binomial = 0.0;
    double distance = 0.0;
    std::size_t trials = 0;
};

/// Equiprobable transmission of X(s) or X(s + delta) over n AWGN uses with a
/// minimum-distance decision (ties go to s). Throws std::invalid_argument
/// for fewer than 10^4 trials or points outside the source support.
BinarySignalingResult binary_signaling_check(double s, double delta, const SchemeConfig& cfg,
                                             const SourceSpec& src, std::size_t trials, std::uint64_t seed);

} // namespace jscc
