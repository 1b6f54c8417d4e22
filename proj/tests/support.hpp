#ifndef IRKA_LAB_TESTS_SUPPORT_HPP
#define IRKA_LAB_TESTS_SUPPORT_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "irka_lab/lti_core.hpp"

namespace irka_lab::testing {

inline double rel_err(Complex a, Complex b) { return std::abs(a - b) / (1.0 + std::abs(b)); }

// Symmetric A with eigenvalues spread in [lo, hi] (both negative), b = c.
inline StateSpaceSystem random_sss_spread(Index n, std::mt19937_64& rng, double lo = -10.0,
                                          double hi = -0.1) {
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    MatrixXd g(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) g(i, j) = normal(rng);
    Eigen::HouseholderQR<MatrixXd> qr(g);
    const MatrixXd q = qr.householderQ();
    VectorXd eig(n);
    for (Index i = 0; i < n; ++i) eig(i) = -std::exp(std::log(-hi) + unit(rng) * (std::log(-lo) - std::log(-hi)));
    MatrixXd a = q * eig.asDiagonal() * q.transpose();
    a = 0.5 * (a + a.transpose()).eval();
    VectorXd b(n);
    for (Index i = 0; i < n; ++i) b(i) = 0.5 + unit(rng);
    return StateSpaceSystem(a, b, b);
}

// Nonsymmetric stable A = -(s I + G G^T/n) + skew, generic b, c.
inline StateSpaceSystem random_general(Index n, std::mt19937_64& rng) {
    std::normal_distribution<double> normal;
    MatrixXd g(n, n);
    MatrixXd k(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) {
            g(i, j) = normal(rng);
            k(i, j) = normal(rng);
        }
    MatrixXd a = -(g * g.transpose()) / static_cast<double>(n) + 0.5 * (k - k.transpose());
    a.diagonal().array() -= 0.2;
    VectorXd b(n);
    VectorXd c(n);
    for (Index i = 0; i < n; ++i) {
        b(i) = normal(rng);
        c(i) = normal(rng);
    }
    return StateSpaceSystem(a, b, c);
}

inline std::vector<Complex> log_grid_points(int count, double lo, double hi) {
    std::vector<Complex> out;
    for (int k = 0; k < count; ++k) {
        const double t = count == 1 ? 0.0 : static_cast<double>(k) / (count - 1);
        out.emplace_back(std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo))), 0.0);
    }
    return out;
}

struct CostMinimum {
    double value = 0.0;
    double mirrored_pole = 0.0;  // x = -lambda~
    double residue = 0.0;
};

// ||H - H_r||^2 for H = 1/(s+1) + 1/(s+2) and H_r = y/(s+x), in closed form
// from the double sum over poles.
inline double two_pole_cost(double x, double y) {
    return 17.0 / 12.0 - 2.0 * y * (1.0 / (1.0 + x) + 1.0 / (2.0 + x)) + y * y / (2.0 * x);
}

// Brute-force minimum of two_pole_cost: 400 x 400 log grid over
// (x, y) in [0.05, 20]^2, then Newton polish from the best grid point.
inline CostMinimum two_pole_cost_minimum() {
    const int points = 400;
    const double lo = std::log(0.05);
    const double hi = std::log(20.0);
    CostMinimum best{std::numeric_limits<double>::infinity(), 0.0, 0.0};
    for (int i = 0; i < points; ++i) {
        const double x = std::exp(lo + (hi - lo) * i / (points - 1));
        for (int j = 0; j < points; ++j) {
            const double y = std::exp(lo + (hi - lo) * j / (points - 1));
            const double f = two_pole_cost(x, y);
            if (f < best.value) best = {f, x, y};
        }
    }
    double x = best.mirrored_pole;
    double y = best.residue;
    for (int it = 0; it < 50; ++it) {
        const double a = 1.0 / (1.0 + x);
        const double b = 1.0 / (2.0 + x);
        const double g1 = 2.0 * y * (a * a + b * b) - y * y / (2.0 * x * x);
        const double g2 = -2.0 * (a + b) + y / x;
        const double h11 = -4.0 * y * (a * a * a + b * b * b) + y * y / (x * x * x);
        const double h12 = 2.0 * (a * a + b * b) - y / (x * x);
        const double h22 = 1.0 / x;
        const double det = h11 * h22 - h12 * h12;
        const double dx = (h22 * g1 - h12 * g2) / det;
        const double dy = (h11 * g2 - h12 * g1) / det;
        x -= dx;
        y -= dy;
        if (std::abs(dx) + std::abs(dy) < 1e-15 * (x + y)) break;
    }
    return {two_pole_cost(x, y), x, y};
}

}  // namespace irka_lab::testing

#endif  // IRKA_LAB_TESTS_SUPPORT_HPP
