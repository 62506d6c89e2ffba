#include "jscc/special.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace jscc {

double gaussian_q(double x)
{
    return 0.5 * std::erfc(x / std::numbers::sqrt2);
}

double gaussian_q_tail(double x)
{
    return std::exp(-0.5 * x * x) / (std::sqrt(2.0 * std::numbers::pi) * x);
}

namespace {

constexpr int kMaxIterations = 50;
constexpr double kStepTolerance = 1e-15;

} // namespace

double lambert_w(double x)
{
    if (!(x > 0.0) || !std::isfinite(x))
        throw std::domain_error("lambert_w: argument must be positive and finite");

    double w = std::log1p(x);
    for (int it = 0; it < kMaxIterations; ++it) {
        const double ew = std::exp(w);
        const double f = w * ew - x;
        const double wp1 = w + 1.0;
        const double step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
        w -= step;
        if (std::abs(step) <= kStepTolerance * std::abs(w))
            break;
    }
    return w;
}

double lambert_w_of_exp(double log_x)
{
    if (!std::isfinite(log_x))
        throw std::domain_error("lambert_w_of_exp: argument must be finite");
    if (log_x < 700.0)
        return lambert_w(std::exp(log_x));

    // Newton on g(w) = w + ln w - log_x; g is increasing and concave.
    double w = log_x - std::log(log_x);
    for (int it = 0; it < kMaxIterations; ++it) {
        const double step = (w + std::log(w) - log_x) / (1.0 + 1.0 / w);
        w -= step;
        if (std::abs(step) <= kStepTolerance * w)
            break;
    }
    return w;
}

} // namespace jscc
