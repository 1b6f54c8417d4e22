#include "irka_lab/h2.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace irka_lab {

namespace {

constexpr double kCollision = 1e-8;
constexpr double kNormFloor = 1e-14;

struct SchurForm {
    Eigen::MatrixXcd u;
    Eigen::MatrixXcd t;
};

SchurForm complex_schur(const MatrixXd& a) {
    Eigen::ComplexSchur<Eigen::MatrixXcd> schur(a.cast<Complex>());
    if (schur.info() != Eigen::Success) {
        throw Error(ErrorCode::UnstableMatrix, "Schur decomposition did not converge");
    }
    for (Index i = 0; i < a.rows(); ++i) {
        if (!(schur.matrixT()(i, i).real() < 0.0)) {
            std::ostringstream msg;
            msg << "eigenvalue " << schur.matrixT()(i, i) << " is not in the open left half-plane";
            throw Error(ErrorCode::UnstableMatrix, msg.str());
        }
    }
    return {schur.matrixU(), schur.matrixT()};
}

}  // namespace

MatrixXd sylvester_solve(const MatrixXd& a, const MatrixXd& b, const MatrixXd& rhs) {
    if (a.rows() != a.cols() || b.rows() != b.cols() || rhs.rows() != a.rows() ||
        rhs.cols() != b.rows()) {
        throw Error(ErrorCode::InvalidArgument, "sylvester: dimension mismatch");
    }
    const SchurForm sa = complex_schur(a);
    const SchurForm sb = complex_schur(b);
    const Index m = a.rows();
    const Index n = b.rows();

    // With a = Ua Ta Ua^*, b = Ub Tb Ub^* the equation becomes
    // Ta Y + Y Tb^T = -Ua^* rhs conj(Ub), X = Ua Y Ub^T.
    const Eigen::MatrixXcd& tb = sb.t;
    const Eigen::MatrixXcd f = -(sa.u.adjoint() * rhs.cast<Complex>() * sb.u.conjugate());
    Eigen::MatrixXcd y(m, n);
    // (Y Tb^T)(:, j) = sum_{k >= j} Y(:, k) Tb(j, k): sweep columns backwards
    for (Index j = n - 1; j >= 0; --j) {
        Eigen::VectorXcd col = f.col(j);
        for (Index k = j + 1; k < n; ++k) col -= tb(j, k) * y.col(k);
        Eigen::MatrixXcd lhs = sa.t;
        lhs.diagonal().array() += tb(j, j);
        y.col(j) = lhs.triangularView<Eigen::Upper>().solve(col);
    }
    const Eigen::MatrixXcd x = sa.u * y * sb.u.transpose();
    return x.real();
}

MatrixXd lyapunov_solve(const MatrixXd& a, const MatrixXd& rhs) {
    if (rhs.rows() != a.rows() || rhs.cols() != a.cols()) {
        throw Error(ErrorCode::InvalidArgument, "lyapunov: dimension mismatch");
    }
    MatrixXd p = sylvester_solve(a, a, rhs);
    p = 0.5 * (p + p.transpose()).eval();
    const double residual = (a * p + p * a.transpose() + rhs).cwiseAbs().maxCoeff();
    const double bound = 1e-10 * (1.0 + rhs.cwiseAbs().maxCoeff());
    if (!(residual < bound)) {
        std::ostringstream msg;
        msg << "Lyapunov residual " << residual << " exceeds " << bound;
        throw Error(ErrorCode::ResidualTooLarge, msg.str());
    }
    return p;
}

double h2_norm(const StateSpaceSystem& sys) {
    const MatrixXd p = lyapunov_solve(sys.a(), sys.b() * sys.b().transpose());
    return std::sqrt(std::max(0.0, sys.c().dot(p * sys.c())));
}

StateSpaceSystem error_system(const StateSpaceSystem& full, const StateSpaceSystem& reduced) {
    const Index n = full.order();
    const Index r = reduced.order();
    MatrixXd a = MatrixXd::Zero(n + r, n + r);
    a.topLeftCorner(n, n) = full.a();
    a.bottomRightCorner(r, r) = reduced.a();
    VectorXd b(n + r);
    b << full.b(), reduced.b();
    VectorXd c(n + r);
    c << full.c(), -reduced.c();
    return StateSpaceSystem(std::move(a), std::move(b), std::move(c));
}

namespace {

// Gramian of the block-diagonal error realization, solved block by block so
// that identical blocks cancel exactly.
double error_norm_squared(const StateSpaceSystem& full, const StateSpaceSystem& reduced) {
    const MatrixXd p11 = sylvester_solve(full.a(), full.a(), full.b() * full.b().transpose());
    const MatrixXd p12 =
        sylvester_solve(full.a(), reduced.a(), full.b() * reduced.b().transpose());
    const MatrixXd p22 =
        sylvester_solve(reduced.a(), reduced.a(), reduced.b() * reduced.b().transpose());
    const double t11 = full.c().dot(p11 * full.c());
    const double t12 = full.c().dot(p12 * reduced.c());
    const double t22 = reduced.c().dot(p22 * reduced.c());
    return (t11 - 2.0 * t12) + t22;
}

bool all_real(const PoleResidueForm& form) {
    for (std::size_t i = 0; i < form.size(); ++i) {
        if (form.poles[i].imag() != 0.0 || form.residues[i].imag() != 0.0) return false;
    }
    return true;
}

bool collides(Complex a, Complex b) { return std::abs(a - b) < kCollision * (1.0 + std::abs(a)); }

// Realization of H - H_r in which every colliding pole pair (l, phi), (l~, phi~)
// appears as (phi - phi~)/(s - l) + phi~ (l - l~)/((s - l)(s - l~)). The small
// differences then sit in c instead of cancelling inside the Gramian, which
// keeps ||H - H_r|| accurate when H_r nearly reproduces part of H.
std::optional<StateSpaceSystem> merged_error_realization(const PoleResidueForm& full,
                                                         const PoleResidueForm& red) {
    if (!all_real(full) || !all_real(red)) return std::nullopt;
    std::vector<int> partner(red.size(), -1);
    std::vector<bool> taken(full.size(), false);
    for (std::size_t j = 0; j < red.size(); ++j) {
        int best = -1;
        for (std::size_t i = 0; i < full.size(); ++i) {
            if (taken[i] || !collides(full.poles[i], red.poles[j])) continue;
            if (best < 0 || std::abs(full.poles[i] - red.poles[j]) <
                                std::abs(full.poles[static_cast<std::size_t>(best)] - red.poles[j])) {
                best = static_cast<int>(i);
            }
        }
        if (best >= 0) {
            partner[j] = best;
            taken[static_cast<std::size_t>(best)] = true;
        }
    }

    const auto order = static_cast<Index>(full.size() + red.size());
    MatrixXd a = MatrixXd::Zero(order, order);
    VectorXd b = VectorXd::Zero(order);
    VectorXd c = VectorXd::Zero(order);
    Index k = 0;
    for (std::size_t j = 0; j < red.size(); ++j) {
        const double lr = red.poles[j].real();
        const double pr = red.residues[j].real();
        if (partner[j] < 0) {
            a(k, k) = lr;
            b(k) = 1.0;
            c(k) = -pr;
            ++k;
            continue;
        }
        const auto i = static_cast<std::size_t>(partner[j]);
        const double lf = full.poles[i].real();
        const double pf = full.residues[i].real();
        a(k, k) = lf;
        a(k + 1, k) = 1.0;
        a(k + 1, k + 1) = lr;
        b(k) = 1.0;
        c(k) = pf - pr;
        c(k + 1) = pr * (lf - lr);
        k += 2;
    }
    for (std::size_t i = 0; i < full.size(); ++i) {
        if (taken[i]) continue;
        a(k, k) = full.poles[i].real();
        b(k) = 1.0;
        c(k) = full.residues[i].real();
        ++k;
    }
    return StateSpaceSystem(std::move(a), std::move(b), std::move(c));
}

struct Forms {
    std::optional<PoleResidueForm> full;
    std::optional<PoleResidueForm> reduced;
    bool collision = false;
};

Forms pole_residue_forms(const StateSpaceSystem& full, const StateSpaceSystem& reduced) {
    Forms out;
    try {
        out.full = to_pole_residue(full);
        out.reduced = to_pole_residue(reduced);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::RepeatedPoles) throw;
        out.full.reset();
        out.reduced.reset();
        return out;
    }
    for (const auto& lf : out.full->poles) {
        for (const auto& lr : out.reduced->poles) {
            if (collides(lf, lr)) out.collision = true;
        }
    }
    return out;
}

double gramian_route(const StateSpaceSystem& full, const StateSpaceSystem& reduced,
                     const Forms& forms) {
    if (forms.collision) {
        if (auto merged = merged_error_realization(*forms.full, *forms.reduced)) {
            const MatrixXd p = lyapunov_solve(merged->a(), merged->b() * merged->b().transpose());
            return merged->c().dot(p * merged->c());
        }
    }
    return error_norm_squared(full, reduced);
}

}  // namespace

double h2_error_norm(const StateSpaceSystem& full, const StateSpaceSystem& reduced) {
    const Forms forms = pole_residue_forms(full, reduced);
    return std::sqrt(std::max(0.0, gramian_route(full, reduced, forms)));
}

double pole_residue_cost(const StateSpaceSystem& full, const PoleResidueForm& full_form,
                         const StateSpaceSystem& reduced, const PoleResidueForm& reduced_form) {
    auto gap = [&](Complex s) { return eval_transfer(full, s) - eval_transfer(reduced, s); };
    Complex cost{0.0, 0.0};
    for (std::size_t i = 0; i < full_form.size(); ++i) {
        cost += full_form.residues[i] * gap(-full_form.poles[i]);
    }
    for (std::size_t j = 0; j < reduced_form.size(); ++j) {
        cost -= reduced_form.residues[j] * gap(-reduced_form.poles[j]);
    }
    return cost.real();
}

H2ErrorReport h2_error(const StateSpaceSystem& full, const StateSpaceSystem& reduced) {
    H2ErrorReport report;
    report.full_norm = h2_norm(full);
    // stability of the reduced model is checked by the Schur step
    const Forms forms = pole_residue_forms(full, reduced);
    const double squared = gramian_route(full, reduced, forms);
    report.error_norm_gramian = std::sqrt(std::max(0.0, squared));
    report.pole_collision = forms.collision;

    if (report.pole_collision || !forms.full) {
        report.cost_J = squared;
    } else {
        report.cost_J = pole_residue_cost(full, *forms.full, reduced, *forms.reduced);
        report.error_norm_pole_residue = std::sqrt(std::max(0.0, report.cost_J));
        report.route_discrepancy =
            std::abs(report.error_norm_gramian - *report.error_norm_pole_residue) /
            (report.error_norm_gramian + 1e-300);
    }

    if (report.full_norm < kNormFloor) {
        report.relative_h2_error = report.error_norm_gramian;
        report.relative_is_absolute = true;
    } else {
        report.relative_h2_error = report.error_norm_gramian / report.full_norm;
    }
    return report;
}

}  // namespace irka_lab
