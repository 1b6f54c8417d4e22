#include "irka_lab/error_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "irka_lab/h2.hpp"

namespace irka_lab {

namespace {

constexpr double kBoundary = 1e-9;
constexpr double kClusterRadius = 1e-6;
constexpr double kDegenerate = 1e-13;
// evaluation uncertainty of E in units of eps (|H| + |H_r|)
constexpr double kRoundingUlps = 64.0;
// split radius never exceeds this fraction of |m|
constexpr double kMaxSplit = 1e-2;

}  // namespace

std::vector<Complex> transmission_zeros(const StateSpaceSystem& sys) {
    const Index n = sys.order();
    MatrixXd pencil_a = MatrixXd::Zero(n + 1, n + 1);
    pencil_a.topLeftCorner(n, n) = sys.a();
    pencil_a.topRightCorner(n, 1) = sys.b();
    pencil_a.bottomLeftCorner(1, n) = sys.c().transpose();
    MatrixXd pencil_e = MatrixXd::Zero(n + 1, n + 1);
    pencil_e.topLeftCorner(n, n).setIdentity();

    Eigen::GeneralizedEigenSolver<MatrixXd> ges(pencil_a, pencil_e, false);
    const double scale = 1.0 + pencil_a.cwiseAbs().maxCoeff();
    std::vector<Complex> zeros;
    for (Index i = 0; i < n + 1; ++i) {
        const Complex alpha = ges.alphas()(i);
        const double beta = ges.betas()(i);
        if (beta == 0.0) continue;
        const Complex z = alpha / beta;
        // infinite eigenvalues surface with tiny beta and huge quotient
        if (!(std::abs(z) < 1e10 * scale)) continue;
        zeros.push_back(z);
    }
    sort_canonical(zeros);
    return zeros;
}

std::pair<double, double> error_grid_minimum(const StateSpaceSystem& full,
                                             const StateSpaceSystem& reduced) {
    auto gap = [&](double s) {
        return (eval_transfer(full, Complex(s, 0.0)) - eval_transfer(reduced, Complex(s, 0.0))).real();
    };
    double best = gap(0.0);
    double where = 0.0;
    const double log_lo = std::log10(error_grid::kLow);
    const double log_hi = std::log10(error_grid::kHigh);
    for (int k = 0; k < error_grid::kPoints; ++k) {
        const double t = static_cast<double>(k) / (error_grid::kPoints - 1);
        double s = std::pow(10.0, log_lo + t * (log_hi - log_lo));
        if (k == 0) s = error_grid::kLow;
        if (k == error_grid::kPoints - 1) s = error_grid::kHigh;
        const double value = gap(s);
        if (value < best) {
            best = value;
            where = s;
        }
    }
    return {best, where};
}

ErrorZeroReport error_zeros(const StateSpaceSystem& full, const StateSpaceSystem& reduced) {
    const double norm = h2_error_norm(full, reduced);
    bool degenerate = norm < kDegenerate;
    if (!degenerate && reduced.order() >= full.order()) {
        // r = n reproductions are not bit-identical; probe the transfer gap instead
        double worst = 0.0;
        for (double s : {0.1, 1.0, 10.0}) {
            const Complex h = eval_transfer(full, Complex(s, 0.0));
            const Complex hr = eval_transfer(reduced, Complex(s, 0.0));
            worst = std::max(worst, std::abs(h - hr) / (1.0 + std::abs(h)));
        }
        degenerate = worst < 1e-12;
    }
    if (degenerate) {
        throw Error(ErrorCode::DegenerateError, "error system is numerically zero");
    }

    ErrorZeroReport report;
    report.zeros = transmission_zeros(error_system(full, reduced));
    for (const auto& z : report.zeros) {
        if (std::abs(z.real()) < kBoundary * (1.0 + std::abs(z))) {
            report.boundary_count += 1;
            report.rhp_count += 1;
        } else if (z.real() > 0.0) {
            report.rhp_count += 1;
        } else {
            report.lhp_count += 1;
        }
    }

    for (const auto& p : reduced.eigenvalues()) report.mirrored_poles.push_back(-p);
    sort_canonical(report.mirrored_poles);
    std::vector<bool> used(report.zeros.size(), false);
    for (const auto& m : report.mirrored_poles) {
        const double scale = std::abs(m);
        for (const auto& z : report.zeros) {
            if (std::abs(z - m) <= kClusterRadius * scale) report.strict_matched += 1;
        }
        // rounding in E(m) of size tau moves a double zero by sqrt(2 tau / |E''|)
        const auto h = eval_transfer_derivatives(full, m, 2);
        const auto hr = eval_transfer_derivatives(reduced, m, 2);
        const double tau = kRoundingUlps * std::numeric_limits<double>::epsilon() *
                           (std::abs(h[0]) + std::abs(hr[0]));
        const double curvature = std::abs(h[2] - hr[2]);
        double radius = kMaxSplit * scale;
        if (curvature > 0.0) radius = std::min(radius, std::sqrt(2.0 * tau / curvature));
        radius = std::max(radius, kClusterRadius * scale);

        std::vector<std::size_t> near;
        for (std::size_t k = 0; k < report.zeros.size(); ++k) {
            if (!used[k] && std::abs(report.zeros[k] - m) <= radius) near.push_back(k);
        }
        std::sort(near.begin(), near.end(), [&](std::size_t a, std::size_t b) {
            return std::abs(report.zeros[a] - m) < std::abs(report.zeros[b] - m);
        });
        int count = 0;
        double spread = 0.0;
        if (near.size() >= 2) {
            const Complex centroid = 0.5 * (report.zeros[near[0]] + report.zeros[near[1]]);
            if (std::abs(centroid - m) <= kClusterRadius * scale) count = 2;
        }
        if (count == 0) {
            for (std::size_t k : near) {
                if (std::abs(report.zeros[k] - m) <= kClusterRadius * scale && count < 2) ++count;
            }
        }
        for (int k = 0; k < count; ++k) {
            used[near[static_cast<std::size_t>(k)]] = true;
            spread = std::max(spread, std::abs(report.zeros[near[static_cast<std::size_t>(k)]] - m) / scale);
        }
        report.matched_multiplicity.push_back(count);
        report.cluster_spread.push_back(spread);
        report.interpolation_matched += count;
    }

    const auto [minimum, argmin] = error_grid_minimum(full, reduced);
    report.min_error_on_grid = minimum;
    report.grid_argmin = argmin;
    return report;
}

}  // namespace irka_lab
