#include "jscc/decoder.hpp"
#include "jscc/experiments.hpp"
#include "jscc/rng.hpp"

#include <doctest.h>

#include <stdexcept>

#include <algorithm>
#include <cmath>

using namespace jscc;

namespace {

SchemeConfig make_cfg(int n, double snr, double eps)
{
    auto cfg = SchemeConfig::with_epsilon(n, snr, eps, SourceSpec::gaussian());
    cfg.sigma_e2 = estimate_sigma_e(cfg, SourceSpec::gaussian(), kDefaultPilotSamples, 3);
    return cfg;
}

} // namespace

TEST_CASE("minimum-distance level decoding")
{
    const auto cfg = make_cfg(2, 1e4, 0.3);
    const double gamma = cfg.lattice_gain();
    CHECK(ml_decode_q(gamma * 7.0 / cfg.beta, cfg) == doctest::Approx(7.0 / cfg.beta));
    CHECK(ml_decode_level(gamma * 7.500001 / cfg.beta, cfg) == 8);
    CHECK(ml_decode_level(gamma * -7.499999 / cfg.beta, cfg) == -7);
    CHECK(ml_decode_level(gamma * 7.49 / cfg.beta, cfg) == 7);

    RngStream rng(4, 0);
    for (int i = 0; i < 10'000; ++i) {
        const Codeword cw = modulate(encode(rng.normal(), cfg), cfg);
        CHECK(ml_decode_level(cw.x[0], cfg) == cw.levels[0]);
    }
}

TEST_CASE("LMMSE residual estimate")
{
    auto cfg = make_cfg(2, 1e4, 0.3);
    CHECK(lmmse_decode_e(0.0, cfg) == 0.0);

    cfg.power = 1.0;
    cfg.noise_var = 1.0;
    cfg.sigma_e2 = 1.0 / 12.0;
    CHECK(lmmse_coefficient(cfg) == doctest::Approx(0.14433756729740643).epsilon(1e-14));

    cfg.noise_var = 0.0;
    for (double e : {-0.5, -0.1, 0.0, 0.37}) {
        const double y = cfg.residual_gain() * e;
        CHECK(lmmse_decode_e(y, cfg) == doctest::Approx(e).epsilon(1e-14).scale(1.0));
    }

    cfg.sigma_e2 = 0.0;
    CHECK_THROWS_AS(lmmse_coefficient(cfg), ConfigError);

    const std::vector<double> e{0.1, -0.2, 0.3};
    const std::vector<double> y{1.0, -2.0, 3.0};
    CHECK(lmmse_coefficient_empirical(e, y) == doctest::Approx(0.1));
    CHECK_THROWS_AS(lmmse_coefficient_empirical(e, std::vector<double>{1.0}), std::invalid_argument);
}

TEST_CASE("noiseless end-to-end decoding is exact")
{
    RngStream rng(5, 0);
    for (int n : {2, 3, 4}) {
        auto cfg = make_cfg(n, 1e5, 0.3);
        cfg.noise_var = 0.0;
        for (int i = 0; i < 10'000; ++i) {
            const double s = rng.normal();
            const Codeword cw = modulate(encode(s, cfg), cfg);
            CHECK(std::abs(decode(cw.x, cfg).s_hat - s) <= 1e-9);
        }
    }
    auto cfg = make_cfg(3, 1e5, 0.3);
    const auto zero = decode(std::vector<double>(3, 0.0), cfg);
    CHECK(zero.s_hat == 0.0);
    CHECK_THROWS_AS(decode(std::vector<double>(2, 0.0), cfg), std::invalid_argument);
}

TEST_CASE("hand chase at n = 2, beta = 10")
{
    auto cfg = SchemeConfig::with_beta(2, 1e4, 10.0, SourceSpec::gaussian());
    cfg.sigma_e2 = 1.0 / 12.0;
    cfg.noise_var = 0.0;
    // Q_1 = 0.3, E_1 = -0.4; X = (gamma 0.3, -0.4 sqrt(12)); Qhat = 0.3, Ehat = -0.4
    const Codeword cw = modulate(encode(0.26, cfg), cfg);
    CHECK(cw.x[0] == doctest::Approx(cfg.lattice_gain() * 0.3));
    CHECK(cw.x[1] == doctest::Approx(-0.4 * std::sqrt(12.0)));
    const auto r = decode(cw.x, cfg);
    CHECK(r.q_hat[0] == doctest::Approx(0.3));
    CHECK(r.e_hat == doctest::Approx(-0.4));
    CHECK(r.s_hat == doctest::Approx(0.26).epsilon(1e-14));
    CHECK(r.s_hat == doctest::Approx(r.q_hat[0] + r.e_hat / cfg.beta).epsilon(1e-15));
}

TEST_CASE("residual estimate is unclamped unless asked")
{
    auto cfg = make_cfg(2, 1e4, 0.3);
    const double y_big = 10.0 * cfg.residual_gain();
    const std::vector<double> y{0.0, y_big};
    CHECK(decode(y, cfg).e_hat > 0.5);
    DecoderOptions opts;
    opts.clamp_residual = true;
    CHECK(decode(y, cfg, opts).e_hat < 0.5);
    opts.clamp_residual = false;
    opts.lmmse_coefficient = 0.0;
    CHECK(decode(y, cfg, opts).e_hat == 0.0);
}

TEST_CASE("level estimates depend only on their own channel use")
{
    auto cfg = make_cfg(3, 1e4, 0.3);
    RngStream rng(6, 0);
    std::vector<std::vector<double>> ys;
    for (int i = 0; i < 200; ++i) {
        const auto cw = modulate(encode(rng.normal(), cfg), cfg);
        ys.push_back(transmit(cw.x, cfg.noise_var, rng).y);
    }
    for (std::size_t i = 0; i + 1 < ys.size(); ++i) {
        auto mixed = ys[i];
        mixed[1] = ys[i + 1][1];
        mixed[2] = ys[i + 1][2];
        CHECK(decode(mixed, cfg).levels[0] == decode(ys[i], cfg).levels[0]);
    }
    auto permuted = ys;
    std::reverse(permuted.begin(), permuted.end());
    for (std::size_t i = 0; i < ys.size(); ++i)
        CHECK(decode(permuted[i], cfg).s_hat == decode(ys[ys.size() - 1 - i], cfg).s_hat);
}

TEST_CASE("error decomposition")
{
    auto cfg = make_cfg(2, 1e4, 0.3);

    SUBCASE("noiseless batch has no error")
    {
        auto quiet = cfg;
        quiet.noise_var = 0.0;
        std::vector<DecodedSample> batch;
        RngStream rng(7, 0);
        for (int i = 0; i < 100; ++i) {
            const double s = rng.normal();
            const auto cw = modulate(encode(s, quiet), quiet);
            batch.push_back({s, cw, decode(cw.x, quiet)});
        }
        const auto rep = decompose_error(batch, quiet);
        CHECK(rep.err_q[0] == 0.0);
        CHECK(rep.err_e < 1e-28);
        CHECK(rep.mse_direct < 1e-28);
    }

    SUBCASE("single sample")
    {
        RngStream rng(8, 0);
        const double s = 0.7;
        const auto cw = modulate(encode(s, cfg), cfg);
        const auto est = decode(transmit(cw.x, cfg.noise_var, rng), cfg);
        const DecodedSample one{s, cw, est};
        const auto rep = decompose_error(std::span(&one, 1), cfg);
        CHECK(rep.mse_direct == (s - est.s_hat) * (s - est.s_hat));
        CHECK(rep.samples == 1);
    }

    CHECK_THROWS_AS(decompose_error(std::span<const DecodedSample>{}, cfg), std::invalid_argument);
}

TEST_CASE("componentwise and direct MSE agree at 40 dB")
{
    RunOptions opts;
    opts.compute_ziv = false;
    SchemeConfig cfg = SchemeConfig::with_epsilon(2, 1e4, achievability_eps(1e4, 2, 1.0 / 8.8),
                                                  SourceSpec::gaussian());
    const auto row = run_point(cfg, SourceSpec::gaussian(), 1'000'000, 21, opts);
    const double combined = std::hypot(row.components_stderr, row.mse_stderr);
    CHECK(std::abs(row.mse_components - row.mse) <= 4.0 * combined);
}

TEST_CASE("partitioned reduction matches a single pass")
{
    auto cfg = make_cfg(3, 1e3, 0.2);
    RngStream rng(9, 0);
    ErrorAccumulator whole(cfg), left(cfg), right(cfg);
    for (int i = 0; i < 50'000; ++i) {
        const double s = rng.normal();
        const auto cw = modulate(encode(s, cfg), cfg);
        const auto est = decode(transmit(cw.x, cfg.noise_var, rng), cfg);
        whole.add(s, cw, est);
        (i < 17'171 ? left : right).add(s, cw, est);
    }
    left.merge(right);
    const auto a = whole.report();
    const auto b = left.report();
    CHECK(std::abs(a.mse_direct - b.mse_direct) <= 1e-12 * a.mse_direct);
    CHECK(std::abs(a.mse_components - b.mse_components) <= 1e-12 * a.mse_components);
    CHECK(std::abs(a.err_e - b.err_e) <= 1e-12 * a.err_e);
}

TEST_CASE("symbol and residual errors scale as expected")
{
    // residual error times snr stays bounded; symbol errors fall with snr
    RunOptions opts;
    opts.compute_ziv = false;
    const auto src = SourceSpec::gaussian();
    SchemeConfig base;
    base.n = 2;
    base.epsilon = 0.3;
    base.delta = 0.1;
    base.k = 1.0 / 8.8;
    const auto grid = db_grid(20.0, 50.0, 5.0);
    const auto rows = sweep(base, src, grid, EpsPolicy::fixed, 200'000, 31, opts);
    double max_scaled = 0.0, min_scaled = 1e300;
    for (const auto& r : rows) {
        max_scaled = std::max(max_scaled, r.err_e * r.snr);
        min_scaled = std::min(min_scaled, r.err_e * r.snr);
    }
    CHECK(max_scaled < 1.0);
    CHECK(max_scaled / min_scaled < 2.0);
    for (std::size_t i = 1; i < rows.size(); ++i)
        CHECK(rows[i].err_q[0] < rows[i - 1].err_q[0]);
}
