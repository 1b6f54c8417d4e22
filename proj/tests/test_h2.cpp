#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss.hpp>
#include <unsupported/Eigen/MatrixFunctions>

#include "irka_lab/generators.hpp"
#include "irka_lab/h2.hpp"
#include "irka_lab/projection.hpp"
#include "support.hpp"

namespace irka_lab {
namespace {

TEST(Lyapunov, ClosedForms) {
    const MatrixXd p1 = lyapunov_solve(MatrixXd::Constant(1, 1, -1.0), MatrixXd::Ones(1, 1));
    EXPECT_NEAR(p1(0, 0), 0.5, 1e-15);

    MatrixXd a = MatrixXd::Zero(2, 2);
    a(0, 0) = -1.0;
    a(1, 1) = -2.0;
    const MatrixXd p2 = lyapunov_solve(a, MatrixXd::Ones(2, 2));
    EXPECT_NEAR(p2(0, 0), 0.5, 1e-15);
    EXPECT_NEAR(p2(0, 1), 1.0 / 3.0, 1e-15);
    EXPECT_NEAR(p2(1, 0), 1.0 / 3.0, 1e-15);
    EXPECT_NEAR(p2(1, 1), 0.25, 1e-15);
}

TEST(Lyapunov, MatchesQuadratureOfImpulseResponse) {
    std::mt19937_64 rng(7);
    const auto sys = testing::random_sss_spread(10, rng, -10.0, -0.5);
    const MatrixXd& a = sys.a();
    const MatrixXd bb = sys.b() * sys.b().transpose();
    const MatrixXd p = lyapunov_solve(a, bb);
    EXPECT_LT((a * p + p * a.transpose() + bb).cwiseAbs().maxCoeff(), 1e-10 * (1.0 + bb.cwiseAbs().maxCoeff()));

    // composite 20-point Gauss rule on [0, 50] with expm at every node
    using Rule = boost::math::quadrature::gauss<double, 20>;
    const auto& nodes = Rule::abscissa();
    const auto& weights = Rule::weights();
    const double horizon = 50.0;
    const int pieces = 200;
    const double width = horizon / pieces;
    MatrixXd integral = MatrixXd::Zero(10, 10);
    auto add_node = [&](double t, double w) {
        const MatrixXd e = (a * t).exp();
        integral += w * e * bb * e.transpose();
    };
    for (int k = 0; k < pieces; ++k) {
        const double mid = (k + 0.5) * width;
        const double half = 0.5 * width;
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            if (nodes[i] == 0.0) {
                add_node(mid, half * weights[i]);
            } else {
                add_node(mid + half * nodes[i], half * weights[i]);
                add_node(mid - half * nodes[i], half * weights[i]);
            }
        }
    }
    EXPECT_LT((integral - p).norm() / p.norm(), 1e-5);
}

TEST(Lyapunov, RejectsUnstable) {
    try {
        lyapunov_solve(MatrixXd::Constant(1, 1, 0.1), MatrixXd::Ones(1, 1));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::UnstableMatrix);
    }
}

TEST(Sylvester, GeneralStableBlocks) {
    std::mt19937_64 rng(41);
    const auto s1 = testing::random_general(7, rng);
    const auto s2 = testing::random_general(4, rng);
    const MatrixXd rhs = s1.b() * s2.c().transpose();
    const MatrixXd x = sylvester_solve(s1.a(), s2.a(), rhs);
    EXPECT_LT((s1.a() * x + x * s2.a().transpose() + rhs).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(H2Norm, ClosedForms) {
    const StateSpaceSystem one(MatrixXd::Constant(1, 1, -1.0), VectorXd::Ones(1), VectorXd::Ones(1));
    EXPECT_NEAR(h2_norm(one), std::sqrt(0.5), 1e-15);
    const auto two = generators::diagonal({-1.0, -2.0}, {1.0, 1.0});
    EXPECT_NEAR(h2_norm(two), std::sqrt(17.0 / 12.0), 1e-14);
}

TEST(H2Norm, MatchesPoleResidueDoubleSum) {
    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<double> poles;
        std::vector<double> residues;
        for (int i = 0; i < 8; ++i) {
            poles.push_back(-0.1 * std::exp(unit(rng) * std::log(1000.0)));
            residues.push_back(0.1 + 2.0 * unit(rng));
        }
        // scrambled nonsymmetric realization of a ZIP system
        PoleResidueForm form;
        for (int i = 0; i < 8; ++i) {
            form.poles.emplace_back(poles[static_cast<std::size_t>(i)], 0.0);
            form.residues.emplace_back(residues[static_cast<std::size_t>(i)], 0.0);
        }
        const auto base = realize(form);
        MatrixXd t = MatrixXd::Identity(8, 8);
        for (Index i = 0; i < 8; ++i)
            for (Index j = 0; j < 8; ++j) t(i, j) += 0.2 * (unit(rng) - 0.5);
        const StateSpaceSystem sys(t * base.a() * t.inverse(), t * base.b(), t.inverse().transpose() * base.c());
        double sum = 0.0;
        for (std::size_t i = 0; i < 8; ++i)
            for (std::size_t j = 0; j < 8; ++j) sum += residues[i] * residues[j] / (-poles[i] - poles[j]);
        EXPECT_LT(std::abs(h2_norm(sys) - std::sqrt(sum)) / std::sqrt(sum), 1e-9);
    }
}

TEST(H2Error, ExactCopyIsZero) {
    const auto sys = generators::random_sss(9, 1);
    EXPECT_LE(h2_error_norm(sys, sys), 1e-10);
    const auto report = h2_error(sys, sys);
    EXPECT_LE(report.error_norm_gramian, 1e-10);
    EXPECT_TRUE(report.pole_collision);
    EXPECT_FALSE(report.error_norm_pole_residue.has_value());
}

TEST(H2Error, RoutesAgreeOnTwoPoleSystem) {
    const auto full = generators::diagonal({-1.0, -2.0}, {1.0, 1.0});
    for (const double lt : {-0.3, -1.4, -2.9, -6.0}) {
        for (const double pt : {0.2, 1.0, 3.5}) {
            const auto red = generators::diagonal({lt}, {pt});
            const auto report = h2_error(full, red);
            const double closed = testing::two_pole_cost(-lt, pt);
            ASSERT_TRUE(report.error_norm_pole_residue.has_value());
            EXPECT_LT(std::abs(report.cost_J - closed) / closed, 1e-9);
            EXPECT_LT(std::abs(report.error_norm_gramian * report.error_norm_gramian - closed) / closed, 1e-9);
            EXPECT_LT(*report.route_discrepancy, 1e-9);
        }
    }
}

TEST(H2Error, RoutesAgreeOnRandomPairs) {
    std::mt19937_64 rng(47);
    for (int trial = 0; trial < 20; ++trial) {
        const auto full = testing::random_sss_spread(6 + trial % 10, rng);
        const auto red = testing::random_sss_spread(1 + trial % 4, rng, -12.0, -0.05);
        const auto report = h2_error(full, red);
        if (report.pole_collision) continue;
        EXPECT_LT(*report.route_discrepancy, 1e-7);
        EXPECT_GE(report.cost_J, -1e-10);
        EXPECT_LE(report.error_norm_gramian, h2_norm(full) + h2_norm(red) + 1e-9);
        EXPECT_NEAR(report.relative_h2_error, report.error_norm_gramian / h2_norm(full), 1e-15);
    }
}

TEST(H2Error, NestedSymmetricProjectionsAreMonotone) {
    const auto sys = generators::random_sss(14, 5);
    const auto basis = build_bases(sys, ShiftSet::real({0.05, 0.2, 0.7, 2.0, 6.0}));
    double previous = h2_norm(sys);
    for (Index r = 1; r <= 5; ++r) {
        ProjectionBasis nested;
        nested.q = basis.q.leftCols(r);
        const auto red = reduce(sys, nested, ProjectionMode::symmetric);
        const double err = h2_error_norm(sys, red);
        EXPECT_LE(err, previous + 1e-10);
        previous = err;
    }
}

TEST(H2Error, NearReproductionIsAccurate) {
    // r = n projection reproduces H up to rounding
    const auto sys = generators::diagonal({-1.0, -2.0}, {1.0, 1.0});
    const auto red = reduce(sys, build_bases(sys, ShiftSet::real({0.3, 7.0})), ProjectionMode::symmetric);
    EXPECT_LT(h2_error_norm(sys, red), 1e-9);
}

TEST(H2Error, CollisionFallsBackToGramian) {
    const auto full = generators::diagonal({-1.0, -2.0, -5.0}, {1.0, 1.0, 1.0});
    const auto red = generators::diagonal({-2.0}, {1.5});
    const auto report = h2_error(full, red);
    EXPECT_TRUE(report.pole_collision);
    EXPECT_FALSE(report.route_discrepancy.has_value());
    // H - H_r = 1/(s+1) - 0.5/(s+2) + 1/(s+5)
    const double p[] = {-1.0, -2.0, -5.0};
    const double f[] = {1.0, -0.5, 1.0};
    double sum = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) sum += f[i] * f[j] / (-p[i] - p[j]);
    EXPECT_NEAR(report.cost_J, sum, 1e-12);
}

}  // namespace
}  // namespace irka_lab
