#include <catch2/catch_amalgamated.hpp>

#include <cstdio>

#include "fraceuler/fbm.hpp"
#include "fraceuler/fbm_io.hpp"
#include "fraceuler/mc.hpp"
#include "fraceuler/stats.hpp"

using namespace fraceuler;

TEST_CASE("fbm covariance closed form", "[fbm]") {
    const HurstParam h(0.7);
    CHECK(fbm_covariance(1.0, 1.0, h) == 1.0);
    CHECK(fbm_covariance(3.7, 0.0, h) == 0.0);
    CHECK(fbm_covariance(2.0, 1.0, h) == Catch::Approx(1.31950791077289).epsilon(1e-12));
    CHECK_THROWS_AS(fbm_covariance(-1.0, 1.0, h), std::invalid_argument);
}

TEST_CASE("increment correlation values and asymptotics", "[fbm]") {
    CHECK(increment_correlation(0, HurstParam(0.62)) == 1.0);
    CHECK(increment_correlation(1, HurstParam(0.75)) ==
          Catch::Approx(0.41421356237309515).epsilon(1e-12));
    CHECK(increment_correlation(5, HurstParam(0.8)) ==
          increment_correlation(-5, HurstParam(0.8)));

    const HurstParam h(0.6);
    const double exact = increment_correlation(10000, h);
    const double asym = h.alpha() * std::pow(1e4, h.two_h() - 2.0);
    CHECK(std::abs(exact - asym) / asym < 0.01);
}

TEST_CASE("increments positively correlated for H > 1/2", "[fbm]") {
    for (double hv : {0.51, 0.6, 0.75, 0.9, 0.99}) {
        const HurstParam h(hv);
        for (std::int64_t p = 0; p <= 1000000; p = p == 0 ? 1 : p * 7)
            CHECK(increment_correlation(p, h) >= 0.0);
    }
}

TEST_CASE("cholesky sampler: one-step variance and determinism", "[fbm][mc]") {
    const UniformGrid grid(1, 1.0);
    const HurstParam h(0.8);
    const CholeskyFbmSampler sampler(grid, h, 1);
    const std::int64_t paths = 100000;
    std::vector<double> bationt(paths);
    for_each_path(paths, [&](std::int64_t i) {
        bationt[static_cast<std::size_t>(i)] = sampler.sample(derive_seed(99, i)).value(0, 1);
    });
    const double var = variance(bationt);
    CHECK(std::abs(var - 1.0) < 3.0 * std::sqrt(2.0 / static_cast<double>(paths)));

    const FbmPath p1 = sampler.sample(777);
    const FbmPath p2 = sampler.sample(777);
    CHECK(p1.raw() == p2.raw());
    CHECK(p1.value(0, 0) == 0.0);
}

TEST_CASE("cholesky covariance against the analytic kernel", "[fbm][mc]") {
    const std::int64_t n = 64;
    const UniformGrid grid(n, 1.0);
    const HurstParam h(0.7);
    const CholeskyFbmSampler sampler(grid, h, 2);
    const std::int64_t paths = 10000;

    const std::vector<std::pair<int, int>> probes = {{8, 8}, {8, 32}, {16, 64}, {64, 64}};
    std::vector<double> prod(static_cast<std::size_t>(paths) * probes.size());
    std::vector<double> cross(static_cast<std::size_t>(paths));
    std::vector<double> b_t(static_cast<std::size_t>(paths));
    for_each_path(paths, [&](std::int64_t pi) {
        const FbmPath path = sampler.sample(derive_seed(31337, pi));
        for (std::size_t q = 0; q < probes.size(); ++q)
            prod[static_cast<std::size_t>(pi) * probes.size() + q] =
                path.value(0, probes[q].first) * path.value(0, probes[q].second);
        cross[static_cast<std::size_t>(pi)] = path.value(0, n) * path.value(1, n);
        b_t[static_cast<std::size_t>(pi)] = path.value(0, n);
    });

    for (std::size_t q = 0; q < probes.size(); ++q) {
        std::vector<double> sample(paths);
        for (std::int64_t pi = 0; pi < paths; ++pi)
            sample[static_cast<std::size_t>(pi)] =
                prod[static_cast<std::size_t>(pi) * probes.size() + q];
        const double target =
            fbm_covariance(grid.node(probes[q].first), grid.node(probes[q].second), h);
        CHECK(std::abs(mean(sample) - target) < 4.0 * stderr_of_mean(sample));
    }
    // independent components
    CHECK(std::abs(mean(cross)) < 4.0 * stderr_of_mean(cross));
    // marginal law sanity at the 1% level
    const KsResult ks = ks_one_sample(b_t, [](double x) { return normal_cdf(x); });
    CHECK(ks.p_value > 0.01);
}

TEST_CASE("circulant sampler: increment autocorrelation", "[fbm][mc]") {
    const std::int64_t n = 4096;
    const UniformGrid grid(n, 1.0);
    const HurstParam h(0.55);
    const CirculantFbmSampler sampler(grid, h, 1);
    const std::int64_t paths = 800;
    const int max_lag = 8;

    std::vector<double> acc(static_cast<std::size_t>(paths) * (max_lag + 1));
    const double dt_var = std::pow(grid.step(), h.two_h());
    for_each_path(paths, [&](std::int64_t pi) {
        const FbmPath path = sampler.sample(derive_seed(5150, pi));
        for (int lag = 0; lag <= max_lag; ++lag) {
            double s = 0.0;
            for (std::int64_t k = 0; k + lag < n; ++k)
                s += path.increment(0, k) * path.increment(0, k + lag);
            acc[static_cast<std::size_t>(pi) * (max_lag + 1) + lag] =
                s / (static_cast<double>(n - lag) * dt_var);
        }
    });
    for (int lag = 0; lag <= max_lag; ++lag) {
        std::vector<double> sample(paths);
        for (std::int64_t pi = 0; pi < paths; ++pi)
            sample[static_cast<std::size_t>(pi)] =
                acc[static_cast<std::size_t>(pi) * (max_lag + 1) + lag];
        const double target = increment_correlation(lag, h);
        CHECK(std::abs(mean(sample) - target) < 4.0 * stderr_of_mean(sample));
    }

    const FbmPath p1 = sampler.sample(123);
    const FbmPath p2 = sampler.sample(123);
    CHECK(p1.raw() == p2.raw());
}

TEST_CASE("cholesky and circulant sampler laws agree", "[fbm][mc]") {
    const std::int64_t n = 256;
    const UniformGrid grid(n, 1.0);
    const HurstParam h(0.65);
    const CholeskyFbmSampler chol(grid, h, 1);
    const CirculantFbmSampler circ(grid, h, 1);
    const std::int64_t paths = 4000;
    std::vector<double> a(paths), b(paths);
    for_each_path(paths, [&](std::int64_t i) {
        a[static_cast<std::size_t>(i)] = chol.sample(derive_seed(1, i)).value(0, n);
        b[static_cast<std::size_t>(i)] = circ.sample(derive_seed(2, i)).value(0, n);
    });
    CHECK(ks_two_sample(a, b).p_value > 0.01);
}

TEST_CASE("cholesky cap and circulant fallback", "[fbm]") {
    const UniformGrid grid(64, 1.0);
    CHECK_THROWS_AS(CholeskyFbmSampler(grid, HurstParam(0.7), 1, 32), std::invalid_argument);
}

TEST_CASE("coarsen subsamples bit-exactly", "[fbm]") {
    const UniformGrid grid(16, 2.0);
    const FbmPath fine = sample_fbm_circulant(grid, HurstParam(0.7), 2, 99);

    const FbmPath same = coarsen(fine, 1);
    CHECK(same.raw() == fine.raw());

    const FbmPath half = coarsen(fine, 2);
    CHECK(half.grid().n() == 8);
    for (int c = 0; c < 2; ++c)
        for (std::int64_t i = 0; i <= 8; ++i) CHECK(half.value(c, i) == fine.value(c, 2 * i));
    // coarse increments telescope
    CHECK(half.increment(0, 0) == Catch::Approx(fine.increment(0, 0) + fine.increment(0, 1))
                                     .margin(1e-15));

    const FbmPath quarter_direct = coarsen(fine, 4);
    const FbmPath quarter_composed = coarsen(coarsen(fine, 2), 2);
    CHECK(quarter_direct.raw() == quarter_composed.raw());

    CHECK_THROWS_AS(coarsen(fine, 3), std::invalid_argument);
}

TEST_CASE("binary path dump round-trips", "[fbm][io]") {
    const UniformGrid grid(8, 1.5);
    const FbmPath path = sample_fbm_circulant(grid, HurstParam(0.8), 2, 4242);
    const std::string file = "fbm_dump_test.bin";
    write_fbm_dump(path, file);
    const FbmPath back = read_fbm_dump(file);
    CHECK(back.grid().n() == path.grid().n());
    CHECK(back.grid().t_horizon() == path.grid().t_horizon());
    CHECK(back.hurst().value() == path.hurst().value());
    CHECK(back.m() == path.m());
    CHECK(back.seed_tag() == path.seed_tag());
    CHECK(back.raw() == path.raw());
    std::remove(file.c_str());
}
