#include <catch2/catch_amalgamated.hpp>

#include "fraceuler/mc.hpp"
#include "fraceuler/variational.hpp"

using namespace fraceuler;

TEST_CASE("variational pair is the identity for constant coefficients", "[variational]") {
    CoefficientSystem additive;
    additive.d = additive.m = 1;
    additive.name = "additive";
    additive.drift = [](const Vec&) { return Vec{0.3}; };
    additive.drift_grad = [](const Vec&) { return Mat(1, 1); };
    additive.diffusion = [](const Vec&) {
        Mat s(1, 1);
        s(0, 0) = 0.8;
        return s;
    };
    additive.diffusion_grad = [](const Vec&, int) { return Mat(1, 1); };
    additive.grad_sigma_sigma = [](const Vec&, int) { return Vec{0.0}; };

    const FbmPath driver = sample_fbm_circulant(UniformGrid(32, 1.0), HurstParam(0.7), 1, 1);
    const SolutionPath x = naive_euler(additive, driver, {0.0});
    const VariationalPair vp = solve_variational(additive, driver, x);
    for (std::int64_t k = 0; k <= 32; ++k) {
        CHECK(vp.lambda[k](0, 0) == 1.0);
        CHECK(vp.gamma[k](0, 0) == 1.0);
    }
}

TEST_CASE("lambda gamma product stays within inversion tolerance", "[variational]") {
    const CoefficientSystem sys = coefficient_system("linear_2d");
    const FbmPath driver = sample_fbm_circulant(UniformGrid(256, 1.0), HurstParam(0.6), 2, 17);
    const SolutionPath x = modified_euler(sys, driver, sys.default_x0);
    const VariationalPair vp = solve_variational(sys, driver, x);
    for (std::int64_t k = 0; k <= 256; ++k) {
        Mat prod = vp.lambda[k] * vp.gamma[k];
        prod += Mat::identity(2) *= -1.0;
        CHECK(prod.max_abs() < 1e-8);
    }
    CHECK(vp.lambda[0].max_abs() == 1.0);
}

TEST_CASE("variational flow of the geometric system approximates exp(B)", "[variational][mc]") {
    const CoefficientSystem geo = coefficient_system("geometric");
    const std::int64_t n = 4096;
    const HurstParam h(0.7);
    const CirculantFbmSampler sampler(UniformGrid(n, 1.0), h, 1);
    const std::int64_t paths = 100;
    std::vector<int> ok(paths, 0);
    for_each_path(paths, [&](std::int64_t pi) {
        const FbmPath driver = sampler.sample(derive_seed(808, pi));
        const SolutionPath x = naive_euler(geo, driver, {1.0});
        const VariationalPair vp = solve_variational(geo, driver, x);
        double worst = 0.0;
        for (std::int64_t k = 0; k <= n; ++k) {
            const double target = std::exp(driver.value(0, k));
            worst = std::max(worst, std::abs(vp.lambda[k](0, 0) - target) / target);
        }
        ok[static_cast<std::size_t>(pi)] = worst < 0.02 ? 1 : 0;
    });
    int passed = 0;
    for (int v : ok) passed += v;
    CHECK(passed >= 95);
}

TEST_CASE("singular flow is reported", "[variational]") {
    CoefficientSystem sys = coefficient_system("linear_2d");
    // drift gradient crafted so the one-step matrix annihilates the first axis
    sys.drift_grad = [](const Vec&) {
        Mat g(2, 2);
        g(0, 0) = -4.0;  // with dt = 1/4: I + grad_b dt has a zero pivot
        return g;
    };
    const FbmPath zero = FbmPath(UniformGrid(4, 1.0), HurstParam(0.7), 2, 0,
                                 std::vector<double>(2 * 5, 0.0));
    const SolutionPath x = naive_euler(sys, zero, sys.default_x0);
    CHECK_THROWS_AS(solve_variational(sys, zero, x), SingularMatrixError);
}
