#pragma once

#include "jscc/source.hpp"

#include <stdexcept>

namespace jscc {

/// Thrown when a SchemeConfig violates one of its invariants.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Parameters of the recursive-quantization scheme, shared by the encoder,
/// decoder and bounds.
///
/// `snr` is the design SNR that fixes the resolution through
/// beta^2 = snr^(1 - epsilon). `noise_var` is the noise the channel actually
/// adds; the two agree (snr = power / noise_var) except for noiseless runs,
/// where noise_var is forced to zero while beta keeps its design value.
struct SchemeConfig {
    int n = 2;
    double power = 1.0;
    double noise_var = 1.0;
    double snr = 1.0;
    double beta = 2.0;
    double epsilon = 0.0;
    double delta = 0.1;
    double k = 1.0 / 8.8;
    double sigma_e2 = 0.0; // unset until estimated
    double source_variance = 1.0;

    /// beta derived from epsilon. delta defaults to 0.1 * variance and k to
    /// 1 / (8 (variance + delta)) when passed as non-positive.
    static SchemeConfig with_epsilon(int n, double snr, double epsilon, const SourceSpec& src,
                                     double power = 1.0, double delta = 0.0, double k = 0.0);

    /// epsilon derived from beta; requires snr > 1.
    static SchemeConfig with_beta(int n, double snr, double beta, const SourceSpec& src,
                                  double power = 1.0, double delta = 0.0, double k = 0.0);

    /// Amplitude scale of the quantizer symbols, sqrt(P / (sigma_S^2 + delta)).
    [[nodiscard]] double lattice_gain() const;

    /// Amplitude scale of the residual symbol, sqrt(P / sigma_E^2).
    [[nodiscard]] double residual_gain() const;

    [[nodiscard]] bool noiseless() const noexcept { return noise_var == 0.0; }

    /// Throws ConfigError on any broken invariant. sigma_e2 is only checked
    /// when `require_sigma_e` is set.
    void validate(bool require_sigma_e = false) const;
};

} // namespace jscc
