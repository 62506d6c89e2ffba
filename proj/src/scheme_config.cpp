#include "jscc/scheme_config.hpp"

#include <cmath>
#include <string>

namespace jscc {

namespace {

void fill_defaults(SchemeConfig& cfg, const SourceSpec& src, double power, double delta, double k)
{
    cfg.source_variance = src.variance;
    cfg.power = power;
    cfg.delta = delta > 0.0 ? delta : 0.1 * src.variance;
    cfg.k = k > 0.0 ? k : 1.0 / (8.0 * (src.variance + cfg.delta));
    cfg.noise_var = power / cfg.snr;
}

} // namespace

SchemeConfig SchemeConfig::with_epsilon(int n, double snr, double epsilon, const SourceSpec& src,
                                        double power, double delta, double k)
{
    if (!(snr > 0.0) || !std::isfinite(snr))
        throw ConfigError("snr must be positive and finite");
    SchemeConfig cfg;
    cfg.n = n;
    cfg.snr = snr;
    cfg.epsilon = epsilon;
    cfg.beta = std::pow(snr, 0.5 * (1.0 - epsilon));
    fill_defaults(cfg, src, power, delta, k);
    cfg.validate();
    return cfg;
}

SchemeConfig SchemeConfig::with_beta(int n, double snr, double beta, const SourceSpec& src,
                                     double power, double delta, double k)
{
    if (!(snr > 1.0) || !std::isfinite(snr))
        throw ConfigError("deriving epsilon from beta requires snr > 1");
    if (!(beta > 1.0))
        throw ConfigError("beta must exceed 1");
    SchemeConfig cfg;
    cfg.n = n;
    cfg.snr = snr;
    cfg.beta = beta;
    cfg.epsilon = 1.0 - 2.0 * std::log(beta) / std::log(snr);
    fill_defaults(cfg, src, power, delta, k);
    cfg.validate();
    return cfg;
}

double SchemeConfig::lattice_gain() const
{
    return std::sqrt(power / (source_variance + delta));
}

double SchemeConfig::residual_gain() const
{
    if (!(sigma_e2 > 0.0))
        throw ConfigError("sigma_e2 must be positive before modulating the residual");
    return std::sqrt(power / sigma_e2);
}

void SchemeConfig::validate(bool require_sigma_e) const
{
    if (n < 2)
        throw ConfigError("n must be ≥ 2");
    if (!(beta > 1.0) || !std::isfinite(beta))
        throw ConfigError("beta must be finite and exceed 1");
    if (!(power > 0.0))
        throw ConfigError("power must be positive");
    if (!(noise_var >= 0.0))
        throw ConfigError("noise variance must be non-negative");
    if (!(snr > 0.0))
        throw ConfigError("snr must be positive");
    if (!(delta > 0.0))
        throw ConfigError("delta must be positive");
    if (!(k > 0.0))
        throw ConfigError("k must be positive");
    if (!(source_variance > 0.0))
        throw ConfigError("source variance must be positive");
    if (!(epsilon >= 0.0))
        throw ConfigError("epsilon must be non-negative");

    const double expected = std::pow(snr, 1.0 - epsilon);
    if (std::abs(beta * beta - expected) > 1e-12 * expected)
        throw ConfigError("beta^2 = snr^(1 - epsilon) does not hold");
    if (noise_var > 0.0 && std::abs(snr - power / noise_var) > 1e-12 * snr)
        throw ConfigError("snr must equal power / noise_var");

    if (require_sigma_e && !(sigma_e2 > 0.0 && sigma_e2 <= 0.25))
        throw ConfigError("sigma_e2 must lie in (0, 1/4], got " + std::to_string(sigma_e2));
}

} // namespace jscc
