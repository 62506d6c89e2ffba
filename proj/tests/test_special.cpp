#include "jscc/special.hpp"

#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <numbers>

using namespace jscc;

namespace {

// Oracle: bisection on w e^w - x, independent of the Halley iteration.
double lambert_w_bisection(double x)
{
    double lo = 0.0, hi = std::max(1.0, std::log(x) + 1.0);
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (mid * std::exp(mid) < x ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

TEST_CASE("gaussian tail against 40-digit reference values")
{
    // mpmath: erfc(x / sqrt(2)) / 2 at 40 digits
    const std::pair<double, double> table[] = {
        {0.0, 0.5},
        {0.5, 0.30853753872598689636},
        {1.0, 0.15865525393145705141},
        {1.7, 0.044565462758543043664},
        {2.0, 0.0227501319481792072},
        {3.0, 0.0013498980316300945267},
        {5.0, 2.8665157187919391167e-7},
        {8.0, 6.2209605742717841235e-16},
        {10.0, 7.619853024160526066e-24},
        {15.0, 3.6709661993127508858e-51},
        {20.0, 2.7536241186062336951e-89},
        {30.0, 4.9067139271481870595e-198},
        {37.0, 5.7255712225245768227e-300},
    };
    for (const auto& [x, q] : table) {
        INFO("x = " << x);
        CHECK(std::abs(gaussian_q(x) - q) <= 1e-12 * q);
    }
    CHECK(gaussian_q(-1.7) == doctest::Approx(1.0 - gaussian_q(1.7)).epsilon(1e-15));
}

TEST_CASE("tail equivalent brackets Q")
{
    for (double x : {1.5, 3.0, 4.5, 8.0, 20.0}) {
        const double tail = gaussian_q_tail(x);
        CHECK(gaussian_q(x) <= tail);
        CHECK(gaussian_q(x) >= (1.0 - 1.0 / (x * x)) * tail);
    }
}

TEST_CASE("lambert W")
{
    CHECK(std::abs(lambert_w(std::numbers::e) - 1.0) <= 1e-12);
    CHECK(lambert_w(1.0) == doctest::Approx(lambert_w_bisection(1.0)).epsilon(1e-13));
    CHECK(lambert_w(1.0) == doctest::Approx(0.5671432904097838).epsilon(1e-14));

    for (double x : {1e-6, 1.0, 1e3, 1e9}) {
        const double w = lambert_w(x);
        CHECK(std::abs(w * std::exp(w) - x) / x <= 1e-12);
        CHECK(std::abs(w / x - std::exp(-w)) <= 1e-12 * std::exp(-w));
        CHECK(w == doctest::Approx(lambert_w_bisection(x)).epsilon(1e-12));
    }

    CHECK_THROWS_AS(lambert_w(0.0), std::domain_error);
    CHECK_THROWS_AS(lambert_w(-0.1), std::domain_error);
    CHECK_THROWS_AS(lambert_w(std::nan("")), std::domain_error);
}

TEST_CASE("lambert W of an exponential")
{
    for (double log_x : {-5.0, 0.0, 10.0, 600.0}) {
        CHECK(lambert_w_of_exp(log_x) == doctest::Approx(lambert_w(std::exp(log_x))).epsilon(1e-14));
    }
    for (double log_x : {701.0, 1e4, 1e8}) {
        const double w = lambert_w_of_exp(log_x);
        CHECK(std::abs(w + std::log(w) - log_x) <= 1e-13 * log_x);
    }
}
