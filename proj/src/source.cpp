#include "jscc/source.hpp"

#include "jscc/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace jscc {

SourceSpec SourceSpec::gaussian(double variance)
{
    if (!(variance > 0.0))
        throw std::invalid_argument("gaussian source: variance must be positive");
    SourceSpec src;
    src.kind = SourceKind::gaussian;
    src.variance = variance;
    src.diff_entropy = 0.5 * std::log(2.0 * std::numbers::pi * std::numbers::e * variance);
    const double sigma = std::sqrt(variance);
    src.ziv_lo = -sigma;
    src.ziv_hi = sigma;
    src.p_min = src.density(sigma);
    return src;
}

SourceSpec SourceSpec::uniform(double half_width)
{
    if (!(half_width > 0.0))
        throw std::invalid_argument("uniform source: half width must be positive");
    SourceSpec src;
    src.kind = SourceKind::uniform;
    src.variance = half_width * half_width / 3.0;
    src.diff_entropy = std::log(2.0 * half_width);
    src.ziv_lo = -half_width;
    src.ziv_hi = half_width;
    src.p_min = 1.0 / (2.0 * half_width);
    return src;
}

double SourceSpec::density(double s) const
{
    switch (kind) {
    case SourceKind::gaussian:
        return std::exp(-0.5 * s * s / variance) / std::sqrt(2.0 * std::numbers::pi * variance);
    case SourceKind::uniform: {
        const double a = std::sqrt(3.0 * variance);
        return (s >= -a && s <= a) ? 1.0 / (2.0 * a) : 0.0;
    }
    }
    return 0.0;
}

double SourceSpec::sample(RngStream& rng) const
{
    switch (kind) {
    case SourceKind::gaussian:
        return std::sqrt(variance) * rng.normal();
    case SourceKind::uniform: {
        const double a = std::sqrt(3.0 * variance);
        return a * (2.0 * rng.uniform() - 1.0);
    }
    }
    return 0.0;
}

std::string_view SourceSpec::name() const noexcept
{
    return kind == SourceKind::gaussian ? "gaussian" : "uniform";
}

void SourceSpec::validate() const
{
    if (!(variance > 0.0))
        throw std::invalid_argument("source variance must be positive");
    if (!(ziv_hi > ziv_lo))
        throw std::invalid_argument("source certificate requires B > A");
    if (!(p_min > 0.0))
        throw std::invalid_argument("source certificate requires p_min > 0");
    constexpr int grid = 1001;
    for (int i = 0; i < grid; ++i) {
        const double s = ziv_lo + (ziv_hi - ziv_lo) * i / (grid - 1);
        // one ulp of slack at the endpoint where p_min is attained
        if (density(s) < p_min * (1.0 - 1e-15))
            throw std::invalid_argument("source density falls below p_min at s = " + std::to_string(s));
    }
}

SourceSpec source_from_name(std::string_view name)
{
    if (name == "gaussian")
        return SourceSpec::gaussian();
    if (name == "uniform")
        return SourceSpec::uniform();
    throw std::invalid_argument("unknown source '" + std::string(name) + "' (expected gaussian|uniform)");
}

} // namespace jscc
