#include "jscc/codec.hpp"

#include "jscc/rng.hpp"
#include "jscc/stats.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace jscc {

namespace {

constexpr std::uint64_t kPilotStream = 0x70696c6f74ULL;

} // namespace

std::int64_t int_round(double x)
{
    if (!std::isfinite(x))
        throw std::invalid_argument("int_round: non-finite input");
    double i = std::floor(x + 0.5);
    // x + 0.5 may round across a cell edge; i -/+ 0.5 is exact, so compare
    // against the half-open cell directly.
    if (x < i - 0.5)
        i -= 1.0;
    else if (x >= i + 0.5)
        i += 1.0;
    return static_cast<std::int64_t>(i);
}

Codeword encode(double s, const SchemeConfig& cfg)
{
    if (!(cfg.beta > 1.0))
        throw ConfigError("beta must exceed 1");
    if (cfg.n < 2)
        throw ConfigError("n must be ≥ 2");

    Codeword cw;
    const auto uses = static_cast<std::size_t>(cfg.n - 1);
    cw.levels.reserve(uses);
    cw.q.reserve(uses);
    double e = s;
    for (std::size_t i = 0; i < uses; ++i) {
        const double scaled = cfg.beta * e;
        const std::int64_t level = int_round(scaled);
        cw.levels.push_back(level);
        cw.q.push_back(static_cast<double>(level) / cfg.beta);
        e = scaled - static_cast<double>(level);
    }
    cw.e_final = e;
    return cw;
}

double reconstruct_exact(const Codeword& cw, const SchemeConfig& cfg)
{
    double s = 0.0;
    double scale = 1.0;
    for (double q : cw.q) {
        s += scale * q;
        scale /= cfg.beta;
    }
    return s + scale * cw.e_final;
}

Codeword modulate(Codeword cw, const SchemeConfig& cfg)
{
    const double residual_gain = cfg.residual_gain();
    const double gain = cfg.lattice_gain();
    cw.x.clear();
    cw.x.reserve(cw.q.size() + 1);
    for (double q : cw.q)
        cw.x.push_back(gain * q);
    cw.x.push_back(residual_gain * cw.e_final);
    return cw;
}

std::vector<double> channel_inputs(double s, const SchemeConfig& cfg)
{
    return modulate(encode(s, cfg), cfg).x;
}

std::pair<double, double> cell_bounds(double s, const SchemeConfig& cfg)
{
    const Codeword cw = encode(s, cfg);
    // E_i = beta^i (s - c_i) with c_i the partial reconstruction; every E_i
    // must stay in [-1/2, 1/2).
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    double centre = 0.0;
    double scale = 1.0;
    for (double q : cw.q) {
        centre += scale * q;
        scale /= cfg.beta;
        lo = std::max(lo, centre - 0.5 * scale);
        hi = std::min(hi, centre + 0.5 * scale);
    }
    return {lo, hi};
}

std::vector<double> cell_boundaries(double lo, double hi, const SchemeConfig& cfg)
{
    std::vector<double> edges;
    if (!(hi > lo))
        return edges;
    double s = lo;
    while (true) {
        double edge = cell_bounds(s, cfg).second;
        // A computed edge can land one ulp short of where encode() switches
        // cells; step forward until the walk makes progress.
        while (!(edge > s)) {
            s = std::nextafter(s, hi);
            edge = cell_bounds(s, cfg).second;
        }
        if (!(edge < hi))
            break;
        edges.push_back(edge);
        s = edge;
    }
    return edges;
}

ResidualMoments estimate_residual_moments(const SchemeConfig& cfg, const SourceSampler& sampler,
                                          std::size_t n_pilot, std::uint64_t seed)
{
    if (n_pilot < kMinPilotSamples)
        throw std::invalid_argument("pilot estimation needs at least 10^4 samples");
    RngStream rng(seed, kPilotStream);
    MomentAccumulator acc;
    for (std::size_t i = 0; i < n_pilot; ++i)
        acc.add(encode(sampler(rng), cfg).e_final);

    ResidualMoments m;
    m.samples = acc.count();
    m.variance = acc.variance();
    m.mean = acc.mean();
    m.mean_stderr = acc.standard_error();
    if (std::abs(m.mean) > 3.0 * m.mean_stderr && m.mean != 0.0)
        m.diagnostic = "pilot mean of E_{n-1} is " + std::to_string(m.mean) + ", more than 3 standard errors ("
                       + std::to_string(m.mean_stderr) + ") from zero";
    return m;
}

double estimate_sigma_e(const SchemeConfig& cfg, const SourceSpec& src, std::size_t n_pilot,
                        std::uint64_t seed)
{
    return estimate_residual_moments(
               cfg, [&src](RngStream& rng) { return src.sample(rng); }, n_pilot, seed)
        .variance;
}

} // namespace jscc
