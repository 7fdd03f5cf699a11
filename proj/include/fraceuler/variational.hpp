#pragma once

#include <vector>

#include "fraceuler/schemes.hpp"

namespace fraceuler {

struct SingularMatrixError : std::runtime_error {
    explicit SingularMatrixError(const std::string& what) : std::runtime_error(what) {}
};

/// Euler discretization of the variational flow Lambda along a solution path,
/// together with its inverse Gamma. Gamma is the direct numerical inverse at
/// each node, so Lambda * Gamma = I holds to machine precision.
struct VariationalPair {
    std::vector<Mat> lambda;
    std::vector<Mat> gamma;
};

inline VariationalPair solve_variational(const CoefficientSystem& sys, const FbmPath& driver,
                                         const SolutionPath& x_path,
                                         double cond_limit = 1e12) {
    if (!(x_path.grid() == driver.grid()))
        throw std::invalid_argument("solve_variational: x_path and driver grids differ");
    const std::int64_t n = driver.grid().n();
    const double dt = driver.grid().step();
    VariationalPair vp;
    vp.lambda.reserve(n + 1);
    vp.gamma.reserve(n + 1);
    Mat lam = Mat::identity(sys.d);
    vp.lambda.push_back(lam);
    vp.gamma.push_back(Mat::identity(sys.d));
    for (std::int64_t k = 0; k < n; ++k) {
        const Vec x = x_path.state(k);
        Mat step = Mat::identity(sys.d);
        Mat gb = sys.drift_grad(x);
        gb *= dt;
        step += gb;
        for (int j = 0; j < sys.m; ++j) {
            Mat gs = sys.diffusion_grad(x, j);
            gs *= driver.increment(j, k);
            step += gs;
        }
        lam = step * lam;
        Mat gam;
        try {
            gam = lam.inverse();
        } catch (const std::runtime_error& err) {
            throw SingularMatrixError("solve_variational: Lambda singular at node " +
                                      std::to_string(k + 1) + " (" + err.what() + ")");
        }
        const double cond = lam.norm_inf() * gam.norm_inf();
        if (!(cond < cond_limit))
            throw SingularMatrixError("solve_variational: cond(Lambda) = " +
                                      std::to_string(cond) + " at node " + std::to_string(k + 1) +
                                      "; step too coarse or flow blew up");
        vp.lambda.push_back(lam);
        vp.gamma.push_back(std::move(gam));
    }
    return vp;
}

}  // namespace fraceuler
