#include "jscc/bounds.hpp"

#include "jscc/special.hpp"
#include "jscc/stats.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace jscc {

BoundCurve sample_curve(std::string name, std::span<const double> snrs,
                        const std::function<std::optional<double>(double)>& f)
{
    for (std::size_t i = 1; i < snrs.size(); ++i)
        if (!(snrs[i] > snrs[i - 1]))
            throw std::invalid_argument("sample_curve: snr grid must be strictly increasing");
    BoundCurve curve;
    curve.name = std::move(name);
    for (double snr : snrs)
        if (auto v = f(snr); v && *v > 0.0)
            curve.points.emplace_back(snr, *v);
    return curve;
}

double opta_bound(double snr, int n, const SourceSpec& src)
{
    if (!(snr >= 0.0))
        throw std::domain_error("opta_bound: snr must be non-negative");
    const double c = std::exp(2.0 * src.diff_entropy) / (2.0 * std::numbers::pi * std::numbers::e);
    return c * std::pow(1.0 + snr, -n);
}

namespace {

// 5-point Gauss-Legendre on [-1, 1].
constexpr std::array<double, 5> kGlNodes = {-0.9061798459386640, -0.5384693101056831, 0.0,
                                            0.5384693101056831, 0.9061798459386640};
constexpr std::array<double, 5> kGlWeights = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                                              0.4786286704993665, 0.2369268850561891};

constexpr double kZivRelTol = 1e-8;
constexpr int kMaxRefinements = 16;

double pair_error_probability(const EncoderMap& map, double s, double delta, double sigma_z)
{
    const auto x0 = map(s);
    const auto x1 = map(s + delta);
    if (x0.size() != x1.size())
        throw std::invalid_argument("encoder map returned vectors of different length");
    double d2 = 0.0;
    for (std::size_t i = 0; i < x0.size(); ++i)
        d2 += (x0[i] - x1[i]) * (x0[i] - x1[i]);
    const double d = std::sqrt(d2);
    if (sigma_z == 0.0)
        return d > 0.0 ? 0.0 : 0.5;
    return gaussian_q(d / (2.0 * sigma_z));
}

} // namespace

double ziv_bound_numeric(const SourceSpec& src, const EncoderMap& encoder_map, double delta, double sigma_z,
                         std::size_t quad_points, std::span<const double> breakpoints)
{
    const double lo = src.ziv_lo;
    const double hi = src.ziv_hi - delta;
    if (!(delta >= 0.0) || !(delta < src.ziv_hi - src.ziv_lo))
        throw std::invalid_argument("ziv_bound_numeric: delta must lie in [0, B - A)");
    if (!(sigma_z >= 0.0))
        throw std::invalid_argument("ziv_bound_numeric: sigma_z must be non-negative");
    if (delta == 0.0)
        return 0.0;

    std::vector<double> edges{lo, hi};
    for (double b : breakpoints) {
        if (b > lo && b < hi)
            edges.push_back(b);
        if (b - delta > lo && b - delta < hi)
            edges.push_back(b - delta);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    const double length = hi - lo;
    auto integrate = [&](std::size_t panels) {
        CompensatedSum total;
        for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
            const double a = edges[p];
            const double b = edges[p + 1];
            const auto pieces = std::max<std::size_t>(
                1, static_cast<std::size_t>(std::ceil(static_cast<double>(panels) * (b - a) / length)));
            const double h = (b - a) / static_cast<double>(pieces);
            for (std::size_t j = 0; j < pieces; ++j) {
                const double mid = a + (static_cast<double>(j) + 0.5) * h;
                for (std::size_t g = 0; g < kGlNodes.size(); ++g)
                    total.add(0.5 * h * kGlWeights[g]
                              * pair_error_probability(encoder_map, mid + 0.5 * h * kGlNodes[g], delta, sigma_z));
            }
        }
        return total.value();
    };

    std::size_t panels = std::max<std::size_t>(quad_points, 1);
    double previous = integrate(panels);
    for (int it = 0; it < kMaxRefinements; ++it) {
        panels *= 2;
        const double current = integrate(panels);
        const bool converged = std::abs(current - previous) <= kZivRelTol * std::abs(current);
        previous = current;
        if (converged)
            break;
    }
    return src.p_min * 0.25 * delta * delta * previous;
}

double scheme_ziv_bound(const SchemeConfig& cfg, const SourceSpec& src, double delta, std::size_t quad_points)
{
    cfg.validate(true);
    const auto edges = cell_boundaries(src.ziv_lo, src.ziv_hi, cfg);
    return ziv_bound_numeric(
        src, [&cfg](double s) { return channel_inputs(s, cfg); }, delta, std::sqrt(cfg.noise_var), quad_points,
        edges);
}

ZivSearchResult ziv_grid_search(const SchemeConfig& cfg, const SourceSpec& src, std::span<const double> deltas,
                                std::size_t quad_points)
{
    ZivSearchResult best;
    for (double delta : deltas) {
        if (!(delta >= 0.0 && delta < src.ziv_hi - src.ziv_lo))
            continue;
        const double v = scheme_ziv_bound(cfg, src, delta, quad_points);
        if (v > best.value)
            best = {delta, v};
    }
    return best;
}

double residual_delta(double snr, int n, double epsilon)
{
    // beta^(n-1) = snr^((n-1)(1-eps)/2)
    return std::pow(snr, -0.5 - 0.5 * (n - 1) * (1.0 - epsilon));
}

std::optional<double> lemma4_bound(double snr, int n, double epsilon, const SourceSpec& src, double sigma_e2)
{
    if (!(snr > 0.0) || !(sigma_e2 > 0.0))
        return std::nullopt;
    const double delta = residual_delta(snr, n, epsilon);
    const double beta_pow = std::pow(snr, 0.5 * (n - 1) * (1.0 - epsilon));
    const double span = (src.ziv_hi - src.ziv_lo - delta) * (1.0 - beta_pow * delta);
    if (!(span > 0.0) || !(src.ziv_hi - src.ziv_lo - delta > 0.0))
        return std::nullopt;
    return 0.25 * src.p_min * std::pow(snr, -n + (n - 1) * epsilon)
           * gaussian_q(1.0 / (2.0 * std::sqrt(sigma_e2))) * span;
}

std::optional<double> lemma5_bound(double snr, int /*n*/, double epsilon, const SourceSpec& src, double delta,
                                   double source_variance)
{
    if (!(snr > 0.0))
        return std::nullopt;
    const double beta = std::pow(snr, 0.5 * (1.0 - epsilon));
    const double step = 1.0 / beta;
    if (!(step < src.ziv_hi - src.ziv_lo))
        return std::nullopt;
    const double arg = std::sqrt(snr / (source_variance + delta)) * step / 2.0;
    return 0.25 * src.p_min * step * step * gaussian_q(arg) * (src.ziv_hi - src.ziv_lo - step);
}

double lemma5_decay_constant(double delta, double source_variance)
{
    return 8.0 * (source_variance + delta);
}

double lemma5_asymptotic_constant(const SourceSpec& src, double delta, double source_variance)
{
    return 0.25 * src.p_min * (src.ziv_hi - src.ziv_lo) * 2.0 * std::sqrt(source_variance + delta)
           / std::sqrt(2.0 * std::numbers::pi);
}

double lemma5_asymptotic(double snr, double epsilon, const SourceSpec& src, double delta, double source_variance)
{
    return lemma5_asymptotic_constant(src, delta, source_variance) * std::pow(snr, -1.0 + epsilon / 2.0)
           * std::exp(-std::pow(snr, epsilon) / lemma5_decay_constant(delta, source_variance));
}

double EpsSolution::residual() const
{
    // Compare in the log domain so that deep tails do not underflow.
    const double log_l1 = (-n + (n - 1) * eps_star) * std::log(snr);
    const double log_l2 = (-1.0 + eps_star / 2.0) * std::log(snr) - snr_pow_eps / k;
    return std::abs(std::expm1(-std::abs(log_l1 - log_l2)));
}

EpsSolution solve_eps_star(double snr, int n, double k)
{
    if (!(snr > 1.0) || !std::isfinite(snr))
        throw std::domain_error("snr must exceed 1");
    if (n < 2)
        throw std::domain_error("n must be ≥ 2");
    if (!(k > 0.0))
        throw std::domain_error("k must be positive");

    EpsSolution sol;
    sol.snr = snr;
    sol.n = n;
    sol.k = k;
    sol.a = -(n - 1.0);
    sol.b = n - 1.5;
    const double log_snr = std::log(snr);
    const double bk = sol.b * k;
    sol.log_w_arg = (-sol.a / sol.b) * log_snr - std::log(bk);
    sol.w_arg = std::exp(sol.log_w_arg);
    sol.snr_pow_eps = bk * lambert_w_of_exp(sol.log_w_arg);
    sol.eps_star = std::log(sol.snr_pow_eps) / log_snr;
    sol.xi = std::log(k / 2.0) / log_snr;
    sol.l1 = std::pow(snr, -n + (n - 1) * sol.eps_star);
    sol.l2 = std::pow(snr, -1.0 + sol.eps_star / 2.0) * std::exp(-sol.snr_pow_eps / k);
    return sol;
}

double achievability_eps(double snr, int n, double k)
{
    if (!(snr > std::numbers::e) || !std::isfinite(snr))
        throw std::domain_error("achievability schedule needs snr > e");
    if (!(k > 0.0))
        throw std::domain_error("k must be positive");
    const double log_snr = std::log(snr);
    return std::log((n / k) * log_snr) / log_snr;
}

double theorem_curve(double snr, int n)
{
    if (!(snr > 1.0))
        throw std::domain_error("theorem_curve needs snr > 1");
    const double log_snr = std::log(snr);
    return std::pow(snr, -n) * std::pow(log_snr, n - 1);
}

} // namespace jscc
