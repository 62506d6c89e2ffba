#pragma once

#include "jscc/scheme_config.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace jscc {

class RngStream;

/// The unique integer i with x in [i - 1/2, i + 1/2). Throws
/// std::invalid_argument for non-finite input.
std::int64_t int_round(double x);

/// Quantization chain of one source letter and, once modulated, its n
/// channel inputs.
struct Codeword {
    std::vector<std::int64_t> levels; // beta * Q_i, i = 1..n-1
    std::vector<double> q;            // Q_i = levels[i] / beta
    double e_final = 0.0;             // E_{n-1}, in [-1/2, 1/2)
    std::vector<double> x;            // X_1..X_n, empty until modulated
};

/// Runs the recursion Q_i = Int(beta E_{i-1}) / beta, E_i = beta (E_{i-1} - Q_i)
/// with E_0 = s for i = 1..n-1.
Codeword encode(double s, const SchemeConfig& cfg);

/// Sum_i beta^-(i-1) Q_i + beta^-(n-1) E_{n-1}.
double reconstruct_exact(const Codeword& cw, const SchemeConfig& cfg);

/// Fills cw.x: X_i = sqrt(P / (sigma_S^2 + delta)) Q_i, X_n = sqrt(P / sigma_E^2) E_{n-1}.
/// Throws ConfigError when cfg.sigma_e2 is not positive.
Codeword modulate(Codeword cw, const SchemeConfig& cfg);

/// encode followed by modulate; the map s -> X(s).
std::vector<double> channel_inputs(double s, const SchemeConfig& cfg);

/// Half-open interval [lo, hi) of source values sharing every quantizer
/// level with s. On it X_1..X_{n-1} are constant and X_n is affine in s.
std::pair<double, double> cell_bounds(double s, const SchemeConfig& cfg);

/// Every quantizer-cell boundary strictly inside (lo, hi), ascending.
std::vector<double> cell_boundaries(double lo, double hi, const SchemeConfig& cfg);

/// Pilot statistics of E_{n-1}.
struct ResidualMoments {
    double variance = 0.0;      // unbiased sample variance
    double mean = 0.0;
    double mean_stderr = 0.0;
    std::size_t samples = 0;
    /// Empty when the mean is within 3 standard errors of zero.
    std::string diagnostic;
};

using SourceSampler = std::function<double(RngStream&)>;

inline constexpr std::size_t kMinPilotSamples = 10'000;
inline constexpr std::size_t kDefaultPilotSamples = 100'000;

/// Monte Carlo moments of E_{n-1} from `n_pilot` encodes of draws from
/// `sampler`. Deterministic in `seed`.
ResidualMoments estimate_residual_moments(const SchemeConfig& cfg, const SourceSampler& sampler,
                                          std::size_t n_pilot, std::uint64_t seed);

/// Sample variance of E_{n-1} under the given source.
double estimate_sigma_e(const SchemeConfig& cfg, const SourceSpec& src, std::size_t n_pilot,
                        std::uint64_t seed);

} // namespace jscc
