#include "irka_lab/projection.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/LU>
#include <Eigen/QR>

#include "internal/lu.hpp"

namespace irka_lab {

namespace {

constexpr double kRankTolerance = 1e-10;
constexpr double kGramianRcond = 1e-13;
constexpr double kConjugateMatch = 1e-12;

// (sI - A)^{-1} b and (sI - A)^{-T} c from one factorization
template <typename Scalar>
auto shifted_solves(const StateSpaceSystem& sys, Scalar s) {
    using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
    Matrix shifted = -sys.a().template cast<Scalar>();
    shifted.diagonal().array() += s;
    Eigen::PartialPivLU<Matrix> lu(shifted);
    if (!(internal::safe_rcond(lu) > tolerances::kShiftRcond)) {
        std::ostringstream msg;
        msg << "sI - A is numerically singular at s = " << s;
        throw Error(ErrorCode::SingularShift, msg.str());
    }
    Vector x = lu.solve(sys.b().template cast<Scalar>().eval());
    Vector y = lu.transpose().solve(sys.c().template cast<Scalar>().eval());
    return std::pair<Vector, Vector>{std::move(x), std::move(y)};
}

}  // namespace

ShiftSet::ShiftSet(std::vector<Complex> shifts) : shifts_(std::move(shifts)) {
    for (const auto& s : shifts_) {
        if (!std::isfinite(s.real()) || !std::isfinite(s.imag())) {
            throw Error(ErrorCode::InvalidArgument, "shifts: non-finite value");
        }
    }
    for (std::size_t i = 0; i < shifts_.size(); ++i) {
        for (std::size_t j = i + 1; j < shifts_.size(); ++j) {
            const double scale = std::max(std::abs(shifts_[i]), std::abs(shifts_[j]));
            if (std::abs(shifts_[i] - shifts_[j]) <= tolerances::kPoleSeparation * scale) {
                std::ostringstream msg;
                msg << "shifts: " << shifts_[i] << " and " << shifts_[j] << " are not distinct";
                throw Error(ErrorCode::InvalidArgument, msg.str());
            }
        }
    }
    for (std::size_t i = 0; i < shifts_.size(); ++i) {
        if (shifts_[i].imag() == 0.0) continue;
        const Complex target = std::conj(shifts_[i]);
        const bool found = std::any_of(shifts_.begin(), shifts_.end(), [&](const Complex& z) {
            return std::abs(z - target) <= kConjugateMatch * std::abs(target);
        });
        if (!found) {
            std::ostringstream msg;
            msg << "shifts: " << shifts_[i] << " has no conjugate partner";
            throw Error(ErrorCode::InvalidArgument, msg.str());
        }
    }
}

ShiftSet ShiftSet::real(const std::vector<double>& shifts) {
    std::vector<Complex> values;
    values.reserve(shifts.size());
    for (double s : shifts) values.emplace_back(s, 0.0);
    return ShiftSet(std::move(values));
}

bool ShiftSet::all_real_positive() const {
    return std::all_of(shifts_.begin(), shifts_.end(),
                       [](const Complex& s) { return s.imag() == 0.0 && s.real() > 0.0; });
}

ShiftSet ShiftSet::canonical() const {
    ShiftSet out = *this;
    sort_canonical(out.shifts_);
    return out;
}

MatrixXd orthonormal_range(const MatrixXd& m) {
    const Index cols = m.cols();
    MatrixXd scaled = m;
    for (Index j = 0; j < cols; ++j) {
        const double norm = scaled.col(j).norm();
        if (!(norm > 0.0)) {
            throw Error(ErrorCode::RankDeficientBasis, "basis has a zero column");
        }
        scaled.col(j) /= norm;
    }
    Eigen::ColPivHouseholderQR<MatrixXd> qr(scaled);
    const auto& r = qr.matrixR();
    const double lead = std::abs(r(0, 0));
    for (Index k = 0; k < cols; ++k) {
        if (!(std::abs(r(k, k)) > kRankTolerance * lead)) {
            std::ostringstream msg;
            msg << "numerical rank " << k << " < " << cols;
            throw Error(ErrorCode::RankDeficientBasis, msg.str());
        }
    }
    return qr.householderQ() * MatrixXd::Identity(m.rows(), cols);
}

ProjectionBasis build_bases(const StateSpaceSystem& sys, const ShiftSet& shifts) {
    const Index n = sys.order();
    const auto r = static_cast<Index>(shifts.size());
    if (r < 1) throw Error(ErrorCode::InvalidArgument, "shifts: empty");
    if (r > n) throw Error(ErrorCode::InvalidArgument, "shifts: more shifts than states");

    ProjectionBasis basis;
    basis.v.resize(n, r);
    basis.w.resize(n, r);
    for (Index j = 0; j < r; ++j) {
        const Complex s = shifts[static_cast<std::size_t>(j)];
        if (s.imag() == 0.0) {
            const auto [x, y] = shifted_solves<double>(sys, s.real());
            basis.v.col(j) = x;
            basis.w.col(j) = y;
            continue;
        }
        const auto [x, y] = shifted_solves<Complex>(sys, s);
        if (s.imag() < 0.0) {
            basis.v.col(j) = x.imag();
            basis.w.col(j) = y.imag();
        } else {
            basis.v.col(j) = x.real();
            basis.w.col(j) = y.real();
        }
    }
    basis.q = orthonormal_range(basis.v);
    return basis;
}

StateSpaceSystem reduce(const StateSpaceSystem& sys, const ProjectionBasis& basis,
                        ProjectionMode mode) {
    if (mode == ProjectionMode::symmetric) {
        const MatrixXd& q = basis.q;
        if (q.rows() != sys.order() || q.cols() < 1) {
            throw Error(ErrorCode::InvalidArgument, "symmetric reduction needs an orthonormal basis");
        }
        MatrixXd ar = q.transpose() * sys.a() * q;
        ar = 0.5 * (ar + ar.transpose()).eval();
        VectorXd br = q.transpose() * sys.b();
        return StateSpaceSystem(std::move(ar), br, br);
    }

    if (basis.v.rows() != sys.order() || basis.w.rows() != sys.order() ||
        basis.v.cols() != basis.w.cols() || basis.v.cols() < 1) {
        throw Error(ErrorCode::InvalidArgument, "basis dimensions do not match the system");
    }
    // H_r depends only on range(V) and range(W); orthonormal representatives
    // keep W^T V as well conditioned as the subspaces allow.
    const MatrixXd qv = orthonormal_range(basis.v);
    const MatrixXd qw = orthonormal_range(basis.w);
    const MatrixXd gram = qw.transpose() * qv;
    Eigen::PartialPivLU<MatrixXd> lu(gram);
    if (!(internal::safe_rcond(lu) > kGramianRcond)) {
        throw Error(ErrorCode::SingularGramian, "W_r^T V_r is numerically singular");
    }
    MatrixXd ar = lu.solve(qw.transpose() * sys.a() * qv);
    VectorXd br = lu.solve(qw.transpose() * sys.b());
    VectorXd cr = qv.transpose() * sys.c();
    return StateSpaceSystem(std::move(ar), std::move(br), std::move(cr));
}

std::vector<HermiteResidual> check_hermite(const StateSpaceSystem& full,
                                           const StateSpaceSystem& reduced,
                                           const ShiftSet& shifts) {
    std::vector<HermiteResidual> out;
    out.reserve(shifts.size());
    for (const auto& s : shifts.values()) {
        const auto h = eval_transfer_derivatives(full, s, 1);
        const auto hr = eval_transfer_derivatives(reduced, s, 1);
        HermiteResidual res;
        res.shift = s;
        res.value_residual = std::abs(h[0] - hr[0]) / (1.0 + std::abs(h[0]));
        res.derivative_residual = std::abs(h[1] - hr[1]) / (1.0 + std::abs(h[1]));
        out.push_back(res);
    }
    return out;
}

double max_residual(const std::vector<HermiteResidual>& residuals) {
    double worst = 0.0;
    for (const auto& r : residuals) {
        worst = std::max({worst, r.value_residual, r.derivative_residual});
    }
    return worst;
}

}  // namespace irka_lab
