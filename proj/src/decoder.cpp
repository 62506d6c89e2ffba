#include "jscc/decoder.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <stdexcept>

namespace jscc {

std::int64_t ml_decode_level(double y, const SchemeConfig& cfg)
{
    return int_round(cfg.beta * y / cfg.lattice_gain());
}

double ml_decode_q(double y, const SchemeConfig& cfg)
{
    return static_cast<double>(ml_decode_level(y, cfg)) / cfg.beta;
}

double lmmse_coefficient(const SchemeConfig& cfg)
{
    if (!(cfg.sigma_e2 > 0.0))
        throw ConfigError("sigma_e2 must be positive for LMMSE decoding");
    return std::sqrt(cfg.power * cfg.sigma_e2) / (cfg.power + cfg.noise_var);
}

double lmmse_coefficient_empirical(std::span<const double> e, std::span<const double> y)
{
    if (e.size() != y.size() || e.empty())
        throw std::invalid_argument("lmmse_coefficient_empirical: need equally sized, non-empty batches");
    CompensatedSum ey, yy;
    for (std::size_t i = 0; i < e.size(); ++i) {
        ey.add(e[i] * y[i]);
        yy.add(y[i] * y[i]);
    }
    if (yy.value() == 0.0)
        throw std::invalid_argument("lmmse_coefficient_empirical: zero output energy");
    return ey.value() / yy.value();
}

double lmmse_decode_e(double y, const SchemeConfig& cfg)
{
    return lmmse_coefficient(cfg) * y;
}

DecodeResult decode(std::span<const double> y, const SchemeConfig& cfg, const DecoderOptions& opts)
{
    if (y.size() != static_cast<std::size_t>(cfg.n))
        throw std::invalid_argument("decode: expected " + std::to_string(cfg.n) + " channel outputs, got "
                                    + std::to_string(y.size()));
    DecodeResult r;
    const auto uses = y.size() - 1;
    r.levels.reserve(uses);
    r.q_hat.reserve(uses);
    for (std::size_t i = 0; i < uses; ++i) {
        const auto level = ml_decode_level(y[i], cfg);
        r.levels.push_back(level);
        r.q_hat.push_back(static_cast<double>(level) / cfg.beta);
    }

    const double coeff = opts.lmmse_coefficient ? *opts.lmmse_coefficient : lmmse_coefficient(cfg);
    r.e_hat = coeff * y.back();
    if (opts.clamp_residual)
        r.e_hat = std::clamp(r.e_hat, -0.5, std::nextafter(0.5, 0.0));

    double s = 0.0;
    double scale = 1.0;
    for (double q : r.q_hat) {
        s += scale * q;
        scale /= cfg.beta;
    }
    r.s_hat = s + scale * r.e_hat;
    return r;
}

double ErrorReport::combined_stderr() const
{
    return std::hypot(stderr_components, stderr_direct);
}

ErrorAccumulator::ErrorAccumulator(const SchemeConfig& cfg)
    : err_q_(static_cast<std::size_t>(cfg.n - 1))
{
    double w = 1.0;
    for (int i = 0; i < cfg.n; ++i) {
        weights_.push_back(w);
        w /= cfg.beta * cfg.beta;
    }
}

void ErrorAccumulator::add(double s, const Codeword& cw, const DecodeResult& est)
{
    double components = 0.0;
    for (std::size_t i = 0; i < err_q_.size(); ++i) {
        const double d = cw.q[i] - est.q_hat[i];
        err_q_[i].add(d * d);
        components += weights_[i] * d * d;
    }
    const double de = cw.e_final - est.e_hat;
    err_e_.add(de * de);
    components += weights_.back() * de * de;
    components_.add(components);
    const double ds = s - est.s_hat;
    direct_.add(ds * ds);
}

void ErrorAccumulator::merge(const ErrorAccumulator& other)
{
    if (other.err_q_.size() != err_q_.size())
        throw std::invalid_argument("ErrorAccumulator::merge: mismatched n");
    for (std::size_t i = 0; i < err_q_.size(); ++i)
        err_q_[i].merge(other.err_q_[i]);
    err_e_.merge(other.err_e_);
    components_.merge(other.components_);
    direct_.merge(other.direct_);
}

ErrorReport ErrorAccumulator::report() const
{
    ErrorReport r;
    r.samples = direct_.count();
    double total = 0.0;
    for (std::size_t i = 0; i < err_q_.size(); ++i) {
        r.err_q.push_back(err_q_[i].mean());
        total += weights_[i] * r.err_q.back();
    }
    r.err_e = err_e_.mean();
    r.mse_components = total + weights_.back() * r.err_e;
    r.mse_direct = direct_.mean();
    r.stderr_components = components_.standard_error();
    r.stderr_direct = direct_.standard_error();
    r.ci_halfwidth = 1.959963984540054 * r.stderr_direct;
    return r;
}

ErrorReport decompose_error(std::span<const DecodedSample> batch, const SchemeConfig& cfg)
{
    if (batch.empty())
        throw std::invalid_argument("decompose_error: empty batch");
    ErrorAccumulator acc(cfg);
    for (const auto& item : batch)
        acc.add(item.s, item.cw, item.est);
    return acc.report();
}

} // namespace jscc
