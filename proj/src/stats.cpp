#include "jscc/stats.hpp"

#include <stdexcept>

namespace jscc {

LineFit fit_line(std::span<const double> x, std::span<const double> y)
{
    if (x.size() != y.size())
        throw std::invalid_argument("fit_line: size mismatch");
    if (x.size() < 2)
        throw std::invalid_argument("fit_line: need at least two points");

    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;

    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx == 0.0)
        throw std::invalid_argument("fit_line: abscissae are all equal");

    LineFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    // A perfectly flat response is explained exactly by the fit.
    fit.r2 = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
    if (fit.r2 > 1.0)
        fit.r2 = 1.0;
    return fit;
}

} // namespace jscc
