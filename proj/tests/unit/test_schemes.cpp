#include <catch2/catch_amalgamated.hpp>

#include <algorithm>

#include "fraceuler/mc.hpp"
#include "fraceuler/schemes.hpp"

using namespace fraceuler;

namespace {

// Driver with hand-set values, for single-step arithmetic checks.
FbmPath manual_path(std::int64_t n, double t_horizon, double h, std::vector<double> values) {
    return FbmPath(UniformGrid(n, t_horizon), HurstParam(h), 1, 0, std::move(values));
}

}  // namespace

TEST_CASE("naive euler reproduces the recursion", "[schemes]") {
    const CoefficientSystem geo = coefficient_system("geometric");

    // one multiplicative step: x0 = 1, dB = 0.2
    const FbmPath driver = manual_path(1, 1.0, 0.7, {0.0, 0.2});
    const SolutionPath one = naive_euler(geo, driver, {1.0});
    CHECK(one.value(1, 0) == Catch::Approx(1.2).margin(1e-15));

    // constant drift, zero noise: Euler is exact, states[n] = c T
    CoefficientSystem drift;
    drift.d = drift.m = 1;
    drift.name = "const_drift";
    drift.drift = [](const Vec&) { return Vec{0.7}; };
    drift.drift_grad = [](const Vec&) { return Mat(1, 1); };
    drift.diffusion = [](const Vec&) { return Mat(1, 1); };
    drift.diffusion_grad = [](const Vec&, int) { return Mat(1, 1); };
    drift.grad_sigma_sigma = [](const Vec&, int) { return Vec{0.0}; };
    const FbmPath zero = manual_path(4, 1.0, 0.7, {0.0, 0.0, 0.0, 0.0, 0.0});
    const SolutionPath det = naive_euler(drift, zero, {0.0});
    CHECK(det.value(4, 0) == Catch::Approx(0.7).margin(1e-15));

    // dimension mismatch
    const FbmPath two_comp = sample_fbm_circulant(UniformGrid(4, 1.0), HurstParam(0.7), 2, 9);
    CHECK_THROWS_AS(naive_euler(geo, two_comp, {1.0}), std::invalid_argument);
    CHECK_THROWS_AS(naive_euler(geo, driver, {1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("modified euler adds exactly the step correction", "[schemes]") {
    const CoefficientSystem geo = coefficient_system("geometric");
    const FbmPath driver = manual_path(1, 1.0, 0.6, {0.0, 0.2});
    const SolutionPath mod = modified_euler(geo, driver, {1.0});
    CHECK(mod.value(1, 0) == Catch::Approx(1.7).margin(1e-15));

    // after one step: modified - naive = (1/2) (T/n)^{2H} sum_j gss(x0)
    const UniformGrid grid(8, 2.0);
    const FbmPath rnd = sample_fbm_circulant(grid, HurstParam(0.7), 1, 123);
    const SolutionPath a = naive_euler(geo, rnd, {1.3});
    const SolutionPath b = modified_euler(geo, rnd, {1.3});
    const double corr = 0.5 * std::pow(grid.step(), 1.4) * 1.3;
    CHECK(b.value(1, 0) - a.value(1, 0) == Catch::Approx(corr).margin(1e-16));
}

TEST_CASE("vanishing gradient correction makes the schemes identical", "[schemes]") {
    const CoefficientSystem levy = coefficient_system("levy_area");
    validate_consistency(levy);
    const FbmPath driver = sample_fbm_circulant(UniformGrid(64, 1.0), HurstParam(0.7), 2, 321);
    const SolutionPath a = naive_euler(levy, driver, levy.default_x0);
    const SolutionPath b = modified_euler(levy, driver, levy.default_x0);
    for (std::int64_t i = 0; i <= 64; ++i)
        for (int c = 0; c < 2; ++c) CHECK(a.value(i, c) == b.value(i, c));
}

TEST_CASE("exact geometric oracle", "[schemes]") {
    const FbmPath zero = manual_path(3, 1.0, 0.8, {0.0, 0.0, 0.0, 0.0});
    const SolutionPath constant = exact_geometric(zero, 2.5);
    for (std::int64_t i = 0; i <= 3; ++i) CHECK(constant.value(i, 0) == 2.5);

    const FbmPath jump = manual_path(1, 1.0, 0.8, {0.0, 0.2});
    CHECK(exact_geometric(jump, 1.0).value(1, 0) ==
          Catch::Approx(1.2214027581601699).epsilon(1e-14));

    // multiplicativity in x0
    const FbmPath rnd = sample_fbm_circulant(UniformGrid(16, 1.0), HurstParam(0.7), 1, 5);
    const SolutionPath ab = exact_geometric(rnd, 0.7 * 1.9);
    const SolutionPath b = exact_geometric(rnd, 1.9);
    for (std::int64_t i = 0; i <= 16; ++i)
        CHECK(ab.value(i, 0) == Catch::Approx(0.7 * b.value(i, 0)).epsilon(1e-14));

    // positivity of the oracle
    for (std::int64_t i = 0; i <= 16; ++i) CHECK(b.value(i, 0) > 0.0);
}

TEST_CASE("geometric positivity under positive step multipliers", "[schemes]") {
    const CoefficientSystem geo = coefficient_system("geometric");
    const UniformGrid grid(64, 1.0);
    const HurstParam h(0.7);
    const double corr = 0.5 * std::pow(grid.step(), h.two_h());
    const CirculantFbmSampler sampler(grid, h, 1);
    int conditional_checks = 0;
    for (int path = 0; path < 40; ++path) {
        const FbmPath driver = sampler.sample(derive_seed(2712, path));
        bool multipliers_positive = true;
        for (std::int64_t k = 0; k < 64; ++k)
            multipliers_positive &= 1.0 + driver.increment(0, k) + corr > 0.0;
        if (!multipliers_positive) continue;
        ++conditional_checks;
        const SolutionPath mod = modified_euler(geo, driver, {1.0});
        for (std::int64_t i = 0; i <= 64; ++i) CHECK(mod.value(i, 0) > 0.0);
    }
    CHECK(conditional_checks > 0);
}

TEST_CASE("modified scheme beats the naive scheme pathwise in the median", "[schemes][mc]") {
    const CoefficientSystem geo = coefficient_system("geometric");
    const HurstParam h(0.7);
    const std::int64_t fine_n = 1024, paths = 300;
    const CirculantFbmSampler sampler(UniformGrid(fine_n, 1.0), h, 1);
    for (std::int64_t n : {64, 256, 1024}) {
        std::vector<double> err_naive(paths), err_mod(paths);
        for_each_path(paths, [&](std::int64_t pi) {
            const FbmPath fine = sampler.sample(derive_seed(888, pi));
            const FbmPath driver = coarsen(fine, fine_n / n);
            const SolutionPath exact = exact_geometric(driver, 1.0);
            const SolutionPath nav = naive_euler(geo, driver, {1.0});
            const SolutionPath mod = modified_euler(geo, driver, {1.0});
            double worst_nav = 0.0, worst_mod = 0.0;
            for (std::int64_t i = 0; i <= n; ++i) {
                worst_nav = std::max(worst_nav, std::abs(exact.value(i, 0) - nav.value(i, 0)));
                worst_mod = std::max(worst_mod, std::abs(exact.value(i, 0) - mod.value(i, 0)));
            }
            err_naive[static_cast<std::size_t>(pi)] = worst_nav;
            err_mod[static_cast<std::size_t>(pi)] = worst_mod;
        });
        std::nth_element(err_naive.begin(), err_naive.begin() + paths / 2, err_naive.end());
        std::nth_element(err_mod.begin(), err_mod.begin() + paths / 2, err_mod.end());
        INFO("n = " << n);
        CHECK(err_mod[static_cast<std::size_t>(paths / 2)] <=
              err_naive[static_cast<std::size_t>(paths / 2)]);
    }
}

TEST_CASE("bit-reproducibility of scheme runs", "[schemes]") {
    const CoefficientSystem sys = coefficient_system("linear_2d");
    validate_consistency(sys);
    const FbmPath driver = sample_fbm_circulant(UniformGrid(128, 1.0), HurstParam(0.6), 2, 99);
    const SolutionPath a = modified_euler(sys, driver, sys.default_x0);
    const SolutionPath b = modified_euler(sys, driver, sys.default_x0);
    for (std::int64_t i = 0; i <= 128; ++i)
        for (int c = 0; c < 2; ++c) CHECK(a.value(i, c) == b.value(i, c));
}

TEST_CASE("reference solution subsamples the fine modified scheme", "[schemes]") {
    const CoefficientSystem geo = coefficient_system("geometric");
    const HurstParam h(0.7);
    const FbmPath fine = sample_fbm_circulant(UniformGrid(256, 1.0), h, 1, 2024);

    // refinement factor 1: identical to the modified scheme on the same grid
    const SolutionPath direct = modified_euler(geo, fine, {1.0});
    const SolutionPath ref_same = reference_solution(geo, fine, {1.0}, 256);
    for (std::int64_t i = 0; i <= 256; ++i) CHECK(ref_same.value(i, 0) == direct.value(i, 0));
    CHECK(ref_same.kind() == SchemeKind::FineReference);

    // increasing the refinement brings the reference closer to the oracle
    double gap4 = 0.0, gap64 = 0.0;
    for (int path = 0; path < 16; ++path) {
        const FbmPath f = sample_fbm_circulant(UniformGrid(256, 1.0), h, 1, 10 + path);
        const SolutionPath exact = exact_geometric(coarsen(f, 64), 1.0);
        const SolutionPath r4 = reference_solution(geo, coarsen(f, 16), {1.0}, 4);
        const SolutionPath r64 = reference_solution(geo, f, {1.0}, 4);
        for (std::int64_t i = 0; i <= 4; ++i) {
            gap4 += std::abs(r4.value(i, 0) - exact.value(i, 0));
            gap64 += std::abs(r64.value(i, 0) - exact.value(i, 0));
        }
    }
    CHECK(gap64 < gap4);

    CHECK_THROWS_AS(reference_solution(geo, fine, {1.0}, 100), std::invalid_argument);
}

TEST_CASE("coefficient consistency validation catches bad fields", "[schemes]") {
    CoefficientSystem bad = coefficient_system("geometric");
    bad.grad_sigma_sigma = [](const Vec& x, int) { return Vec{x[0] + 1e-6}; };
    CHECK_THROWS_AS(validate_consistency(bad), std::invalid_argument);

    CoefficientSystem bad_grad = coefficient_system("geometric");
    bad_grad.drift_grad = [](const Vec&) {
        Mat g(1, 1);
        g(0, 0) = 0.5;
        return g;
    };
    CHECK_THROWS_AS(validate_consistency(bad_grad), std::invalid_argument);

    for (const char* name : {"geometric", "linear_2d", "drift_only", "levy_area"})
        CHECK_NOTHROW(validate_consistency(coefficient_system(name)));
    CHECK_THROWS_AS(coefficient_system("nope"), std::invalid_argument);
}
