#include <catch2/catch_amalgamated.hpp>

#include "fraceuler/limit_constants.hpp"
#include "fraceuler/mc.hpp"
#include "fraceuler/stats.hpp"
#include "fraceuler/zeta.hpp"

using namespace fraceuler;

TEST_CASE("phi and its evenness", "[constants]") {
    const HurstParam h(0.75);
    CHECK(phi(0.0, h) == 0.0);
    CHECK(phi(1.0, h) == Catch::Approx(4.0 / 3.0).epsilon(1e-14));
    GaussianRng rng(5);
    for (int i = 0; i < 20; ++i) {
        const double x = 3.0 * rng.normal();
        CHECK(phi(x, h) == phi(-x, h));
    }
}

TEST_CASE("rectangle kernel integral closed form", "[constants]") {
    const HurstParam h34(0.75);
    CHECK(rect_kernel_integral(0.3, 0.3, 1.0, 2.0, h34) == 0.0);
    CHECK(rect_kernel_integral(0.0, 1.0, 0.0, 1.0, h34) ==
          Catch::Approx(8.0 / 3.0).epsilon(1e-14));
    CHECK_THROWS_AS(rect_kernel_integral(1.0, 0.0, 0.0, 1.0, h34), std::invalid_argument);

    // independent numeric route: tensor Gauss-Legendre on the raw kernel
    const HurstParam h(0.6);
    const double closed = rect_kernel_integral(0.0, 1.0, 2.0, 3.0, h);
    const double direct = detail::integrate_gl(
        [&](double u) {
            return detail::integrate_gl(
                [&](double v) { return std::pow(std::abs(u - v), h.two_h() - 2.0); }, 2.0, 3.0,
                48);
        },
        0.0, 1.0, 48);
    CHECK(closed == Catch::Approx(direct).epsilon(1e-8));
}

TEST_CASE("lag blocks: determinism, symmetry, decay", "[constants]") {
    const HurstParam h(0.6);
    CHECK(qp(3, h) == qp(3, h));  // bit-identical reruns

    for (std::int64_t p = 1; p <= 8; ++p) {
        CHECK(qp(p, h) == Catch::Approx(qp(-p, h)).epsilon(1e-9));
        CHECK(rp(p, h) == Catch::Approx(rp(-p, h)).epsilon(1e-9));
    }

    // qp(2p)/qp(p) -> 2^{4H-4}
    const double ratio = qp(512, h) / qp(256, h);
    CHECK(std::abs(ratio - std::pow(2.0, 2.0 * h.two_h() - 4.0)) < 0.05 * ratio);

    // T scaling: Q(p) carries T^{4H}
    CHECK(qp(2, h, 2.0) ==
          Catch::Approx(std::pow(2.0, 2.0 * h.two_h()) * qp(2, h, 1.0)).epsilon(1e-12));

    // nonnegative lag values (inner products of indicator kernels)
    for (std::int64_t p : {-5L, -1L, 0L, 1L, 5L}) {
        CHECK(qp(p, h) > -1e-12);
        CHECK(rp(p, h) > -1e-12);
    }
}

TEST_CASE("lag blocks match the Monte Carlo covariance oracle", "[constants][mc]") {
    // E[zeta^{12}_{k,n} zeta^{12}_{k+p,n}] = alpha_H^2 n^{-4H} Q(p) at T = 1.
    const HurstParam h(0.65);
    const std::int64_t n = 32, sub = 64, paths = 20000;
    const CirculantFbmSampler sampler(UniformGrid(n * sub, 1.0), h, 2);
    const std::int64_t k0 = 8;
    const std::vector<std::int64_t> lags = {0, 1, 5};

    std::vector<double> prods(static_cast<std::size_t>(paths) * lags.size());
    std::vector<double> rprods(static_cast<std::size_t>(paths) * lags.size());
    for_each_path(paths, [&](std::int64_t pi) {
        const FbmPath fine = sampler.sample(derive_seed(24601, pi));
        const std::vector<double> z = zeta_blocks_cross(fine, 0, 1, sub);
        const std::vector<double> zr = zeta_blocks_cross(fine, 1, 0, sub);
        for (std::size_t li = 0; li < lags.size(); ++li) {
            prods[static_cast<std::size_t>(pi) * lags.size() + li] =
                z[static_cast<std::size_t>(k0)] * z[static_cast<std::size_t>(k0 + lags[li])];
            rprods[static_cast<std::size_t>(pi) * lags.size() + li] =
                z[static_cast<std::size_t>(k0)] * zr[static_cast<std::size_t>(k0 + lags[li])];
        }
    });

    const double scale = h.alpha() * h.alpha() * std::pow(static_cast<double>(n), -2.0 * h.two_h());
    for (std::size_t li = 0; li < lags.size(); ++li) {
        std::vector<double> sample(paths);
        for (std::int64_t pi = 0; pi < paths; ++pi)
            sample[static_cast<std::size_t>(pi)] =
                prods[static_cast<std::size_t>(pi) * lags.size() + li];
        const double target = scale * qp(lags[li], h);
        INFO("Q lag " << lags[li]);
        CHECK(std::abs(mean(sample) - target) < 4.5 * stderr_of_mean(sample));

        // swapping the roles of the components probes R(p):
        // E[zeta^{12}_k zeta^{21}_{k+p}] = alpha^2 n^{-4H} R(p)
        for (std::int64_t pi = 0; pi < paths; ++pi)
            sample[static_cast<std::size_t>(pi)] =
                rprods[static_cast<std::size_t>(pi) * lags.size() + li];
        const double r_target = scale * rp(lags[li], h);
        INFO("R lag " << lags[li]);
        CHECK(std::abs(mean(sample) - r_target) < 4.5 * stderr_of_mean(sample));
    }
}

TEST_CASE("limit constants: closed form at H = 3/4 and Table anchor", "[constants]") {
    const LimitConstants closed = limit_constants(HurstParam(0.75), 1.0);
    CHECK(closed.mode == ConstantsMode::LogLimit);
    CHECK(closed.big_q == 0.5);
    CHECK(closed.big_r == 0.5);
    CHECK(limit_constants(HurstParam(0.75), 2.0).big_q == Catch::Approx(4.0));

    const LimitConstants lc = limit_constants(HurstParam(0.601), 1.0, 512, 1e-4);
    CHECK(lc.mode == ConstantsMode::SeriesSum);
    CHECK(lc.q == Catch::Approx(0.4369).margin(0.01));
    CHECK(lc.r == Catch::Approx(0.1053).margin(0.01));
    CHECK(lc.big_r <= lc.big_q);
    CHECK(lc.big_q > 0.0);

    // corrected constants are stable under doubling the truncation
    const LimitConstants twice = limit_constants(HurstParam(0.601), 1.0, 1024, 1e-4);
    CHECK(twice.q == Catch::Approx(lc.q).margin(1e-5));
    CHECK(twice.r == Catch::Approx(lc.r).margin(1e-5));
}

TEST_CASE("limit constants near the endpoints of the regime", "[constants]") {
    // trend toward (1/2, 0) as H decreases to 1/2
    const LimitConstants low = limit_constants(HurstParam(0.501), 1.0, 256, 1e-3);
    CHECK(std::abs(low.q - 0.5) < 0.01);
    CHECK(low.r < 0.01);

    // r <= q along a probe grid
    for (double hv : {0.55, 0.7}) {
        const LimitConstants lc = limit_constants(HurstParam(hv), 1.0, 256, 5e-3);
        CHECK(lc.r <= lc.q + 1e-6);
    }

    // tail uncertainty honestly reported and enforced
    CHECK_THROWS_AS(limit_constants(HurstParam(0.74), 1.0, 64, 1e-10, {}, 128), ToleranceError);
    CHECK_THROWS_AS(limit_constants(HurstParam(0.8), 1.0), std::invalid_argument);
}

TEST_CASE("gamma_n and c_h constants", "[constants]") {
    CHECK(c_h(HurstParam(0.8), 1.0) == Catch::Approx(0.48).epsilon(1e-12));
    CHECK(c_h(HurstParam(0.8), 2.0) == Catch::Approx(1.92).epsilon(1e-12));
    CHECK_THROWS_AS(c_h(HurstParam(0.75), 1.0), std::domain_error);
    CHECK_THROWS_AS(c_h(HurstParam(0.6), 1.0), std::domain_error);
    // pole approach from above: value grows as H decreases to 3/4
    CHECK(c_h(HurstParam(0.751), 1.0) > c_h(HurstParam(0.76), 1.0));
    CHECK(c_h(HurstParam(0.76), 1.0) > c_h(HurstParam(0.8), 1.0));
}
