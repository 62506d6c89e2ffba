#pragma once

#include "jscc/codec.hpp"
#include "jscc/source.hpp"

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace jscc {

/// A lower-bound function sampled on an SNR grid.
struct BoundCurve {
    std::string name;
    std::vector<std::pair<double, double>> points; // (snr, distortion)
    std::map<std::string, double> meta;
};

/// Builds a curve from `f` over `snrs`, dropping points where f has no valid
/// value. Throws std::invalid_argument unless snrs is strictly increasing.
BoundCurve sample_curve(std::string name, std::span<const double> snrs,
                        const std::function<std::optional<double>(double)>& f);

/// Distortion implied by R(D) <= n C(P) with the Shannon lower bound on
/// R(D): exp(2 h(S)) / (2 pi e) * (1 + snr)^-n.
double opta_bound(double snr, int n, const SourceSpec& src);

using EncoderMap = std::function<std::vector<double>(double)>;

/// Ziv-type lower bound
///   p_min (delta/2)^2 * integral_A^{B-delta} Q(d(s, delta) / (2 sigma_z)) ds,
/// d(s, delta) = |X(s) - X(s + delta)|.
///
/// `breakpoints` lists the discontinuities of the map; the integral is split
/// at every breakpoint b and at b - delta, and each piece is integrated with
/// composite 5-point Gauss-Legendre. The panel count starts at `quad_points`
/// and doubles until successive estimates agree to 1e-8 relative.
/// Throws std::invalid_argument unless 0 <= delta < B - A.
double ziv_bound_numeric(const SourceSpec& src, const EncoderMap& encoder_map, double delta, double sigma_z,
                         std::size_t quad_points, std::span<const double> breakpoints = {});

/// ziv_bound_numeric for the scheme's own encoder (cfg.sigma_e2 must be set),
/// with cell boundaries taken as breakpoints.
double scheme_ziv_bound(const SchemeConfig& cfg, const SourceSpec& src, double delta,
                        std::size_t quad_points = 64);

struct ZivSearchResult {
    double delta = 0.0;
    double value = 0.0;
};

/// Largest scheme_ziv_bound over the candidate deltas that lie in [0, B - A).
/// No optimality over all deltas is implied.
ZivSearchResult ziv_grid_search(const SchemeConfig& cfg, const SourceSpec& src, std::span<const double> deltas,
                                std::size_t quad_points = 64);

/// delta at which the Ziv bound collapses onto the residual channel use,
/// 1 / (sqrt(snr) beta^(n-1)).
double residual_delta(double snr, int n, double epsilon);

/// Explicit finite-snr bound
///   (p_min/4) snr^(-n+(n-1)eps) Q(1/(2 sigma_E)) (B-A-delta)(1 - beta^(n-1) delta)
/// with delta = residual_delta and beta^2 = snr^(1-eps). Empty when the
/// trailing product is not positive yet.
std::optional<double> lemma4_bound(double snr, int n, double epsilon, const SourceSpec& src, double sigma_e2);

/// Explicit finite-snr bound from the first-level shift
///   (p_min/4) beta^-2 Q(sqrt(snr/(sigma_S^2+delta)) / (2 beta)) (B-A-1/beta).
/// Empty when 1/beta >= B - A. `n` does not enter the expression.
std::optional<double> lemma5_bound(double snr, int n, double epsilon, const SourceSpec& src, double delta,
                                   double source_variance);

/// Tail-equivalent form c snr^(-1+eps/2) exp(-snr^eps / k5) of lemma5_bound,
/// with k5 = 8 (sigma_S^2 + delta) and c from lemma5_asymptotic_constant.
double lemma5_asymptotic(double snr, double epsilon, const SourceSpec& src, double delta, double source_variance);
double lemma5_asymptotic_constant(const SourceSpec& src, double delta, double source_variance);
double lemma5_decay_constant(double delta, double source_variance);

/// Balance point of the two scheme bounds
///   l1 = snr^(-n+(n-1)eps),  l2 = snr^(-1+eps/2) exp(-snr^eps / k).
struct EpsSolution {
    double snr = 0.0;
    int n = 0;
    double k = 0.0;
    double eps_star = 0.0;
    double a = 0.0;     // -(n-1)
    double b = 0.0;     // n - 3/2
    double xi = 0.0;    // log(k/2) / log(snr), where l2 turns over
    double l1 = 0.0;
    double l2 = 0.0;
    double w_arg = 0.0; // snr^(-a/b) / (b k); may be +inf when only its log fits
    double log_w_arg = 0.0;
    double snr_pow_eps = 0.0; // snr^eps* = b k W(w_arg)

    [[nodiscard]] double residual() const;
};

/// Closed-form solution of snr^(a + b eps) = exp(-snr^eps / k) via
/// snr^eps = b k W(snr^(-a/b) / (b k)). Throws std::domain_error unless
/// snr > 1, n >= 2 and k > 0.
EpsSolution solve_eps_star(double snr, int n, double k);

/// eps(snr) = log((n/k) log snr) / log snr, natural logs; k here is the
/// exponent constant of the symbol error decay exp(-k snr^eps).
/// Throws std::domain_error unless snr > e.
double achievability_eps(double snr, int n, double k);

/// snr^-n (log snr)^(n-1). Throws std::domain_error unless snr > 1.
double theorem_curve(double snr, int n);

} // namespace jscc
