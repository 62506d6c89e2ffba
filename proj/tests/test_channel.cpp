#include "jscc/channel.hpp"
#include "jscc/stats.hpp"

#include <doctest.h>

#include <stdexcept>

#include <cmath>

using namespace jscc;

TEST_CASE("noiseless channel is the identity")
{
    RngStream rng(1, 0);
    const std::vector<double> x{0.5, -1.25, 3.0};
    const auto out = transmit(x, 0.0, rng, true);
    CHECK(out.y == x);
    CHECK(out.z == std::vector<double>(3, 0.0));
    CHECK_THROWS_AS(transmit(x, -1.0, rng), std::invalid_argument);
}

TEST_CASE("retained noise reproduces the output exactly")
{
    RngStream rng(2, 0);
    const std::vector<double> x{0.1, 0.2, 0.3, 0.4};
    const auto out = transmit(x, 0.7, rng, true);
    for (std::size_t i = 0; i < x.size(); ++i)
        CHECK(out.y[i] == x[i] + out.z[i]);
}

TEST_CASE("same seed and stream give identical outputs")
{
    const std::vector<double> x{1.0, 2.0};
    RngStream a(42, 7), b(42, 7), c(42, 8);
    const auto ya = transmit(x, 1.0, a).y;
    CHECK(ya == transmit(x, 1.0, b).y);
    CHECK(ya != transmit(x, 1.0, c).y);
}

TEST_CASE("noise statistics over 10^6 uses")
{
    constexpr int n = 3;
    constexpr std::size_t draws = 1'000'000;
    const double var = 2.5;
    RngStream rng(3, 0);
    const std::vector<double> x(n, 0.0);

    std::vector<MomentAccumulator> second(n), fourth(n);
    MomentAccumulator cross01, cross12;
    for (std::size_t t = 0; t < draws; ++t) {
        const auto y = transmit(x, var, rng).y;
        for (int i = 0; i < n; ++i) {
            second[i].add(y[i] * y[i]);
            fourth[i].add(y[i] * y[i] * y[i] * y[i]);
        }
        cross01.add(y[0] * y[1]);
        cross12.add(y[1] * y[2]);
    }
    for (int i = 0; i < n; ++i) {
        // chi-square concentration: relative sd of the mean is sqrt(2/N) = 0.14 %
        CHECK(second[i].mean() == doctest::Approx(var).epsilon(0.01));
        CHECK(std::abs(fourth[i].mean() - 3.0 * var * var) <= 3.0 * fourth[i].standard_error());
    }
    CHECK(std::abs(cross01.mean()) <= 3.0 * cross01.standard_error());
    CHECK(std::abs(cross12.mean()) <= 3.0 * cross12.standard_error());
}
