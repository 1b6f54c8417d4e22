#include "irka_lab/fixpoint.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "irka_lab/projection.hpp"

namespace irka_lab {

std::string_view to_string(Verdict v) {
    switch (v) {
        case Verdict::ATTRACTIVE_LOCAL_MIN: return "ATTRACTIVE_LOCAL_MIN";
        case Verdict::REPELLENT_OR_SADDLE: return "REPELLENT_OR_SADDLE";
        case Verdict::INDETERMINATE: return "INDETERMINATE";
    }
    return "INDETERMINATE";
}

MatrixXd AnalysisMatrices::s_tilde() const {
    const Index r = s11.rows();
    MatrixXd out(2 * r, 2 * r);
    out << s11, s12, s12, s22;
    return out;
}

void fill_s_blocks(const VectorXd& reduced_poles, MatrixXd& s11, MatrixXd& s12, MatrixXd& s22) {
    const Index r = reduced_poles.size();
    s11.resize(r, r);
    s12.resize(r, r);
    s22.resize(r, r);
    for (Index i = 0; i < r; ++i) {
        for (Index j = 0; j < r; ++j) {
            const double sum = reduced_poles(i) + reduced_poles(j);
            s11(i, j) = -1.0 / sum;
            s12(i, j) = -1.0 / (sum * sum);
            s22(i, j) = -2.0 / (sum * sum * sum);
        }
    }
}

bool is_positive_definite(const MatrixXd& m) {
    const MatrixXd sym = 0.5 * (m + m.transpose());
    Eigen::LLT<MatrixXd> llt(sym);
    return llt.info() == Eigen::Success;
}

AnalysisMatrices assemble(const StateSpaceSystem& full, const StateSpaceSystem& reduced) {
    PoleResidueForm form;
    try {
        form = to_pole_residue(reduced);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::RepeatedPoles) {
            throw Error(ErrorCode::NonZipReduced, "reduced model has repeated poles");
        }
        throw;
    }
    const auto r = static_cast<Index>(form.size());
    AnalysisMatrices out;
    out.reduced_poles.resize(r);
    out.reduced_residues.resize(r);
    // to_pole_residue sorts ascending; reverse so that -lambda~ ascends
    for (Index i = 0; i < r; ++i) {
        const auto k = static_cast<std::size_t>(r - 1 - i);
        const Complex p = form.poles[k];
        const Complex phi = form.residues[k];
        if (p.imag() != 0.0 || !(p.real() < 0.0) || phi.imag() != 0.0 || !(phi.real() > 0.0)) {
            std::ostringstream msg;
            msg << "pole " << p << " with residue " << phi << " violates the ZIP residue test";
            throw Error(ErrorCode::NonZipReduced, msg.str());
        }
        out.reduced_poles(i) = p.real();
        out.reduced_residues(i) = phi.real();
    }

    std::vector<double> mirrored(static_cast<std::size_t>(r));
    for (Index i = 0; i < r; ++i) mirrored[static_cast<std::size_t>(i)] = -out.reduced_poles(i);
    const ShiftSet fixed = ShiftSet::real(mirrored);
    const double residual = max_residual(check_hermite(full, reduced, fixed));
    if (residual > certification::kFixedPointResidual) {
        std::ostringstream msg;
        msg << "optimality residual " << residual << " exceeds "
            << certification::kFixedPointResidual;
        throw Error(ErrorCode::NotAFixedPoint, msg.str());
    }

    fill_s_blocks(out.reduced_poles, out.s11, out.s12, out.s22);
    out.r_mat = out.reduced_residues.asDiagonal();
    out.e_mat = MatrixXd::Zero(r, r);
    for (Index i = 0; i < r; ++i) {
        const Complex s = fixed[static_cast<std::size_t>(i)];
        out.e_mat(i, i) = (eval_transfer(full, s, 2) - eval_transfer(reduced, s, 2)).real();
    }
    out.k_mat = out.e_mat * out.r_mat.inverse();

    Eigen::PartialPivLU<MatrixXd> s11_lu(out.s11);
    const MatrixXd coupling = out.s12 * s11_lu.solve(out.s12);
    out.s_c = out.s22 - coupling;
    out.phi = -out.s22 + out.k_mat + coupling;
    out.m_mat.resize(2 * r, 2 * r);
    out.m_mat << out.s11, out.s12, out.s12, out.s22 - out.k_mat;
    return out;
}

namespace {

// reduced-pole map s -> lambda~(s) in the canonical index order
VectorXd pole_map(const StateSpaceSystem& full, const VectorXd& shifts) {
    std::vector<double> values(shifts.data(), shifts.data() + shifts.size());
    const ShiftMapStep step = shift_map_step(full, ShiftSet::real(values), true);
    VectorXd out(shifts.size());
    for (Index i = 0; i < shifts.size(); ++i) out(i) = -step.next[static_cast<std::size_t>(i)].real();
    return out;
}

}  // namespace

FixedPointCertificate certify(const StateSpaceSystem& full, const StateSpaceSystem& reduced) {
    if (!is_sss(full)) {
        throw Error(ErrorCode::InvalidArgument, "certification requires an SSS full-order system");
    }
    FixedPointCertificate cert;
    cert.matrices = assemble(full, reduced);
    const AnalysisMatrices& m = cert.matrices;
    const Index r = m.s11.rows();

    Eigen::PartialPivLU<MatrixXd> sc_lu(m.s_c);
    const MatrixXd sc_inv_k = sc_lu.solve(m.k_mat);
    cert.jacobian = -sc_inv_k;

    cert.e_positive = (m.e_mat.diagonal().array() > 0.0).all();
    cert.s_tilde_positive = is_positive_definite(m.s_tilde());
    cert.neg_phi_positive = is_positive_definite(-m.phi);

    Eigen::EigenSolver<MatrixXd> plain(sc_inv_k, false);
    for (Index i = 0; i < r; ++i) {
        const Complex mu = plain.eigenvalues()(i);
        cert.jacobian_eig_max_imag = std::max(cert.jacobian_eig_max_imag, std::abs(mu.imag()));
    }
    const MatrixXd k_sym = 0.5 * (m.k_mat + m.k_mat.transpose());
    const MatrixXd sc_sym = 0.5 * (m.s_c + m.s_c.transpose());
    if (is_positive_definite(sc_sym)) {
        Eigen::GeneralizedSelfAdjointEigenSolver<MatrixXd> pencil(k_sym, sc_sym,
                                                                  Eigen::EigenvaluesOnly);
        for (Index i = 0; i < r; ++i) cert.jacobian_eigs.push_back(pencil.eigenvalues()(i));
    } else {
        cert.warnings.push_back("S_c is not positive definite; eigenvalues from unsymmetric solve");
        for (Index i = 0; i < r; ++i) cert.jacobian_eigs.push_back(plain.eigenvalues()(i).real());
        std::sort(cert.jacobian_eigs.begin(), cert.jacobian_eigs.end());
    }
    for (double mu : cert.jacobian_eigs) {
        cert.spectral_radius = std::max(cert.spectral_radius, std::abs(mu));
    }

    // finite differences of the reduced-pole map around s* = -lambda~
    const VectorXd center = -m.reduced_poles;
    MatrixXd pole_jacobian = MatrixXd::Zero(r, r);
    try {
        for (Index j = 0; j < r; ++j) {
            const double h = certification::kFdRelativeStep * center(j);
            VectorXd plus = center;
            VectorXd minus = center;
            plus(j) += h;
            minus(j) -= h;
            pole_jacobian.col(j) = (pole_map(full, plus) - pole_map(full, minus)) / (2.0 * h);
        }
        const VectorXd& phi = m.reduced_residues;
        cert.fd_jacobian = phi.asDiagonal() * pole_jacobian * phi.cwiseInverse().asDiagonal();
        cert.fd_shift_map_jacobian = -pole_jacobian;
        cert.fd_jacobian_maxdiff = (cert.fd_jacobian - cert.jacobian).cwiseAbs().maxCoeff();

        Eigen::EigenSolver<MatrixXd> fd_solver(cert.fd_shift_map_jacobian, false);
        std::vector<double> fd_eigs;
        for (Index i = 0; i < r; ++i) fd_eigs.push_back(fd_solver.eigenvalues()(i).real());
        std::sort(fd_eigs.begin(), fd_eigs.end());
        std::vector<double> mus = cert.jacobian_eigs;
        std::sort(mus.begin(), mus.end());
        for (std::size_t i = 0; i < mus.size(); ++i) {
            cert.fd_eig_maxdiff = std::max(cert.fd_eig_maxdiff, std::abs(fd_eigs[i] - mus[i]));
        }
    } catch (const Error& e) {
        cert.fd_jacobian = MatrixXd::Zero(r, r);
        cert.fd_shift_map_jacobian = MatrixXd::Zero(r, r);
        cert.fd_jacobian_maxdiff = std::numeric_limits<double>::infinity();
        cert.fd_eig_maxdiff = std::numeric_limits<double>::infinity();
        cert.warnings.push_back(std::string("finite-difference Jacobian failed: ") + e.what());
    }
    if (!(cert.fd_jacobian_maxdiff <= certification::kFdWarning)) {
        cert.fd_mismatch = true;
        std::ostringstream msg;
        msg << "FdMismatch: analytic and finite-difference Jacobians differ by "
            << cert.fd_jacobian_maxdiff;
        cert.warnings.push_back(msg.str());
    }

    const double margin = certification::kVerdictMargin;
    if (std::abs(cert.spectral_radius - 1.0) <= margin) {
        cert.verdict = Verdict::INDETERMINATE;
    } else if (cert.neg_phi_positive && cert.spectral_radius < 1.0 - margin) {
        cert.verdict = Verdict::ATTRACTIVE_LOCAL_MIN;
    } else {
        cert.verdict = Verdict::REPELLENT_OR_SADDLE;
    }
    return cert;
}

FixedPointCertificate certify(const StateSpaceSystem& full, const StateSpaceSystem& reduced,
                              const IterationTrace& trace) {
    if (!trace.converged) {
        throw Error(ErrorCode::NotAFixedPoint, "trace did not converge");
    }
    return certify(full, reduced);
}

std::pair<double, double> verify_s_tilde_integral(const std::vector<double>& lambdas,
                                                  const std::vector<double>& z) {
    const auto r = static_cast<Index>(lambdas.size());
    if (r < 1 || z.size() != 2 * lambdas.size()) {
        throw Error(ErrorCode::InvalidArgument, "z must have twice as many entries as lambdas");
    }
    double slowest = std::numeric_limits<double>::infinity();
    for (double l : lambdas) {
        if (!(l < 0.0)) throw Error(ErrorCode::InvalidArgument, "lambdas must be negative");
        slowest = std::min(slowest, -l);
    }

    VectorXd poles = Eigen::Map<const VectorXd>(lambdas.data(), r);
    MatrixXd s11, s12, s22;
    fill_s_blocks(poles, s11, s12, s22);
    MatrixXd s_tilde(2 * r, 2 * r);
    s_tilde << s11, s12, s12, s22;
    const VectorXd zv = Eigen::Map<const VectorXd>(z.data(), 2 * r);
    const double quadratic = zv.dot(s_tilde * zv);

    auto integrand = [&](double t) {
        double head = 0.0;
        double tail = 0.0;
        for (Index i = 0; i < r; ++i) {
            const double e = std::exp(poles(i) * t);
            head += zv(i) * e;
            tail += zv(r + i) * e;
        }
        const double v = head - t * tail;
        return v * v;
    };

    double head_mass = 0.0;
    double tail_mass = 0.0;
    for (Index i = 0; i < r; ++i) {
        head_mass += std::abs(zv(i));
        tail_mass += std::abs(zv(r + i));
    }
    if (head_mass == 0.0 && tail_mass == 0.0) return {quadratic, 0.0};
    // envelope of the integrand; extend T until the envelope and its tail are negligible
    auto envelope = [&](double t) {
        const double a = head_mass + t * tail_mass;
        return a * a * std::exp(-2.0 * slowest * t);
    };
    double peak = 0.0;
    for (int k = 0; k <= 200; ++k) peak = std::max(peak, envelope(k * 0.1 / slowest));
    double horizon = 1.0 / slowest;
    while (envelope(horizon) * (1.0 + 0.5 / slowest) >= 1e-14 * peak) horizon *= 1.25;

    // geometric breakpoints resolve the fastest and slowest decay scales
    using Quadrature = boost::math::quadrature::gauss_kronrod<double, 31>;
    double integral = 0.0;
    double upper = horizon;
    for (int piece = 0; piece < 60; ++piece) {
        const double lower = piece == 59 ? 0.0 : upper * 0.5;
        integral += Quadrature::integrate(integrand, lower, upper, 8, 1e-11);
        upper = lower;
        if (upper == 0.0) break;
    }
    return {quadratic, integral};
}

}  // namespace irka_lab
