#pragma once

#include <string_view>

namespace jscc {

class RngStream;

enum class SourceKind { gaussian, uniform };

/// Continuous memoryless source together with the interval certificate
/// [A, B], p_min used by the Ziv-type bounds (density >= p_min on [A, B]).
struct SourceSpec {
    SourceKind kind = SourceKind::gaussian;
    double variance = 1.0;
    double diff_entropy = 0.0; // nats
    double ziv_lo = -1.0;      // A
    double ziv_hi = 1.0;       // B
    double p_min = 0.0;

    /// Zero-mean Gaussian; certificate [-sigma, sigma] with p_min = p(sigma).
    static SourceSpec gaussian(double variance = 1.0);

    /// Uniform on [-a, a]; defaults to a = sqrt(3), i.e. unit variance.
    static SourceSpec uniform(double half_width = 1.7320508075688772);

    [[nodiscard]] double density(double s) const;
    [[nodiscard]] double sample(RngStream& rng) const;
    [[nodiscard]] std::string_view name() const noexcept;

    /// Throws std::invalid_argument when the certificate is malformed or the
    /// density drops below p_min somewhere on a 1001-point grid over [A, B].
    void validate() const;
};

SourceSpec source_from_name(std::string_view name);

} // namespace jscc
