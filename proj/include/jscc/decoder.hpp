#pragma once

#include "jscc/channel.hpp"
#include "jscc/codec.hpp"
#include "jscc/stats.hpp"

#include <optional>
#include <span>
#include <vector>

namespace jscc {

struct DecodeResult {
    std::vector<std::int64_t> levels; // beta * Qhat_i
    std::vector<double> q_hat;
    double e_hat = 0.0; // unclamped unless DecoderOptions::clamp_residual
    double s_hat = 0.0;
};

struct DecoderOptions {
    /// Clamp Ehat_{n-1} into [-1/2, 1/2). Off by default: the analysed
    /// estimator is linear.
    bool clamp_residual = false;
    /// Overrides the model LMMSE coefficient, e.g. with one measured by
    /// lmmse_coefficient_empirical.
    std::optional<double> lmmse_coefficient;
};

/// Nearest lattice point: Int(beta y / gamma) / beta with gamma the lattice
/// gain. Midpoints resolve upward.
double ml_decode_q(double y, const SchemeConfig& cfg);
std::int64_t ml_decode_level(double y, const SchemeConfig& cfg);

/// E[E Y] / E[Y^2] under the zero-mean model: sqrt(P sigma_E^2) / (P + sigma_Z^2).
double lmmse_coefficient(const SchemeConfig& cfg);

/// sum(e * y) / sum(y * y) over a calibration batch.
double lmmse_coefficient_empirical(std::span<const double> e, std::span<const double> y);

double lmmse_decode_e(double y, const SchemeConfig& cfg);

/// Throws std::invalid_argument if y does not hold exactly n samples.
DecodeResult decode(std::span<const double> y, const SchemeConfig& cfg, const DecoderOptions& opts = {});
inline DecodeResult decode(const ChannelOutput& out, const SchemeConfig& cfg, const DecoderOptions& opts = {})
{
    return decode(out.y, cfg, opts);
}

/// Componentwise error energies of a batch and the direct MSE.
struct ErrorReport {
    std::vector<double> err_q;
    double err_e = 0.0;
    double mse_components = 0.0;
    double mse_direct = 0.0;
    double ci_halfwidth = 0.0; // 95 % two-sided, on mse_direct
    double stderr_components = 0.0;
    double stderr_direct = 0.0;
    std::size_t samples = 0;

    [[nodiscard]] double combined_stderr() const;
};

/// Streaming form of decompose_error, mergeable across partitions.
class ErrorAccumulator {
public:
    explicit ErrorAccumulator(const SchemeConfig& cfg);

    void add(double s, const Codeword& cw, const DecodeResult& est);
    void merge(const ErrorAccumulator& other);

    [[nodiscard]] std::size_t count() const noexcept { return direct_.count(); }
    [[nodiscard]] ErrorReport report() const;

private:
    std::vector<double> weights_; // beta^-2(i-1) for i = 1..n
    std::vector<MomentAccumulator> err_q_;
    MomentAccumulator err_e_;
    MomentAccumulator components_;
    MomentAccumulator direct_;
};

struct DecodedSample {
    double s = 0.0;
    Codeword cw;
    DecodeResult est;
};

/// Throws std::invalid_argument on an empty batch.
ErrorReport decompose_error(std::span<const DecodedSample> batch, const SchemeConfig& cfg);

} // namespace jscc
