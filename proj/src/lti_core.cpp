#include "irka_lab/lti_core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "internal/lu.hpp"

namespace irka_lab {

namespace {

double max_abs(const MatrixXd& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

double asymmetry_of(const MatrixXd& a) { return max_abs(a - a.transpose()); }

bool symmetric_enough(const MatrixXd& a) {
    return asymmetry_of(a) <= tolerances::kSymmetry * (1.0 + max_abs(a));
}

bool canonical_less(const Complex& x, const Complex& y) {
    if (x.real() != y.real()) return x.real() < y.real();
    return x.imag() < y.imag();
}

// Throws RepeatedPoles if any two poles are closer than the separation tolerance.
void require_distinct(const std::vector<Complex>& poles) {
    for (std::size_t i = 0; i < poles.size(); ++i) {
        for (std::size_t j = i + 1; j < poles.size(); ++j) {
            const double scale = std::max(std::abs(poles[i]), std::abs(poles[j]));
            if (std::abs(poles[i] - poles[j]) <= tolerances::kPoleSeparation * scale) {
                std::ostringstream msg;
                msg << "eigenvalues " << poles[i] << " and " << poles[j]
                    << " are not separated";
                throw Error(ErrorCode::RepeatedPoles, msg.str());
            }
        }
    }
}

}  // namespace

StateSpaceSystem::StateSpaceSystem(MatrixXd a, VectorXd b, VectorXd c)
    : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)) {
    const Index n = a_.rows();
    if (n < 1) throw Error(ErrorCode::InvalidSystem, "A: order must be positive");
    if (a_.cols() != n) throw Error(ErrorCode::InvalidSystem, "A: matrix is not square");
    if (b_.size() != n) throw Error(ErrorCode::InvalidSystem, "b: length does not match order");
    if (c_.size() != n) throw Error(ErrorCode::InvalidSystem, "c: length does not match order");
    if (!a_.allFinite()) throw Error(ErrorCode::InvalidSystem, "A: non-finite entry");
    if (!b_.allFinite()) throw Error(ErrorCode::InvalidSystem, "b: non-finite entry");
    if (!c_.allFinite()) throw Error(ErrorCode::InvalidSystem, "c: non-finite entry");
}

std::vector<Complex> StateSpaceSystem::eigenvalues() const {
    std::vector<Complex> out;
    out.reserve(static_cast<std::size_t>(order()));
    if (symmetric_enough(a_)) {
        const MatrixXd sym = 0.5 * (a_ + a_.transpose());
        Eigen::SelfAdjointEigenSolver<MatrixXd> es(sym, Eigen::EigenvaluesOnly);
        for (Index i = 0; i < order(); ++i) out.emplace_back(es.eigenvalues()(i), 0.0);
    } else {
        Eigen::EigenSolver<MatrixXd> es(a_, false);
        for (Index i = 0; i < order(); ++i) out.push_back(es.eigenvalues()(i));
    }
    sort_canonical(out);
    return out;
}

bool StateSpaceSystem::is_stable() const {
    const auto eigs = eigenvalues();
    return std::all_of(eigs.begin(), eigs.end(), [](const Complex& z) { return z.real() < 0.0; });
}

Complex PoleResidueForm::evaluate(Complex s) const {
    Complex acc{0.0, 0.0};
    for (std::size_t i = 0; i < poles.size(); ++i) acc += residues[i] / (s - poles[i]);
    return acc;
}

namespace {

template <typename Scalar>
std::vector<Complex> transfer_derivatives(const StateSpaceSystem& sys, Scalar s, int max_order) {
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
    const Vector c = sys.c().template cast<Scalar>();
    Vector x = lu.solve(sys.b().template cast<Scalar>().eval());

    std::vector<Complex> out;
    out.reserve(static_cast<std::size_t>(max_order) + 1);
    double factorial = 1.0;
    double sign = 1.0;
    for (int k = 0; k <= max_order; ++k) {
        if (k > 0) {
            x = lu.solve(x);
            factorial *= k;
            sign = -sign;
        }
        // c^T x without conjugation
        const Scalar cx = (c.array() * x.array()).sum();
        out.push_back(sign * factorial * Complex(cx));
    }
    return out;
}

}  // namespace

std::vector<Complex> eval_transfer_derivatives(const StateSpaceSystem& sys, Complex s,
                                               int max_order) {
    if (max_order < 0 || max_order > 2) {
        throw Error(ErrorCode::InvalidArgument, "derivative order must be 0, 1 or 2");
    }
    if (s.imag() == 0.0) return transfer_derivatives<double>(sys, s.real(), max_order);
    return transfer_derivatives<Complex>(sys, s, max_order);
}

Complex eval_transfer(const StateSpaceSystem& sys, Complex s, int order) {
    return eval_transfer_derivatives(sys, s, order).back();
}

void sort_canonical(std::vector<Complex>& values) {
    std::sort(values.begin(), values.end(), canonical_less);
}

PoleResidueForm to_pole_residue(const StateSpaceSystem& sys) {
    const Index n = sys.order();
    PoleResidueForm form;
    form.poles.reserve(static_cast<std::size_t>(n));
    form.residues.reserve(static_cast<std::size_t>(n));

    if (symmetric_enough(sys.a())) {
        const MatrixXd sym = 0.5 * (sys.a() + sys.a().transpose());
        Eigen::SelfAdjointEigenSolver<MatrixXd> es(sym);
        const VectorXd qb = es.eigenvectors().transpose() * sys.b();
        const VectorXd qc = es.eigenvectors().transpose() * sys.c();
        for (Index i = 0; i < n; ++i) {
            form.poles.emplace_back(es.eigenvalues()(i), 0.0);
            form.residues.emplace_back(qb(i) * qc(i), 0.0);
        }
    } else {
        Eigen::EigenSolver<MatrixXd> es(sys.a());
        const Eigen::MatrixXcd v = es.eigenvectors();
        Eigen::PartialPivLU<Eigen::MatrixXcd> lu(v);
        if (!(internal::safe_rcond(lu) > 1e-14)) {
            throw Error(ErrorCode::RepeatedPoles, "A is not diagonalizable to working precision");
        }
        // rows of V^{-1} are the left eigenvectors normalized so w_i^T v_i = 1
        const Eigen::VectorXcd wb = lu.solve(sys.b().cast<Complex>().eval());
        const Eigen::VectorXcd cv = v.transpose() * sys.c().cast<Complex>();
        for (Index i = 0; i < n; ++i) {
            Complex pole = es.eigenvalues()(i);
            Complex residue = cv(i) * wb(i);
            if (std::abs(pole.imag()) <= 1e-14 * std::abs(pole)) {
                pole.imag(0.0);
                residue.imag(0.0);
            }
            form.poles.push_back(pole);
            form.residues.push_back(residue);
        }
    }
    require_distinct(form.poles);

    std::vector<std::size_t> idx(form.poles.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) {
        return canonical_less(form.poles[i], form.poles[j]);
    });
    PoleResidueForm sorted;
    for (auto i : idx) {
        sorted.poles.push_back(form.poles[i]);
        sorted.residues.push_back(form.residues[i]);
    }
    return sorted;
}

bool is_sss(const StateSpaceSystem& sys) {
    const double scale = 1.0 + max_abs(sys.a());
    const double io_scale = 1.0 + std::max(max_abs(sys.b()), max_abs(sys.c()));
    return asymmetry_of(sys.a()) <= tolerances::kSymmetry * scale &&
           max_abs(sys.b() - sys.c()) <= tolerances::kSymmetry * io_scale;
}

Classification classify(const StateSpaceSystem& sys) {
    Classification out;
    out.asymmetry = asymmetry_of(sys.a());
    out.io_mismatch = max_abs(sys.b() - sys.c());
    out.is_sss = is_sss(sys);
    out.is_stable = sys.is_stable();

    try {
        PoleResidueForm form = to_pole_residue(sys);
        double total = 0.0;
        for (const auto& r : form.residues) total += std::abs(r);
        bool zip = true;
        for (std::size_t i = 0; i < form.size(); ++i) {
            const Complex& p = form.poles[i];
            const Complex& r = form.residues[i];
            if (p.imag() != 0.0 || !(p.real() < 0.0)) {
                zip = false;
                out.note = "pole not real negative";
                break;
            }
            if (r.imag() != 0.0 || !(r.real() > tolerances::kMinimality * total)) {
                zip = false;
                out.note = "residue not positive";
                break;
            }
        }
        out.is_zip = zip;
        out.pole_residue = std::move(form);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::RepeatedPoles) throw;
        out.is_zip = false;
        out.note = "repeated poles";
    }

    if (out.is_sss) {
        out.kind = SystemClass::SSS;
    } else if (out.is_zip) {
        out.kind = SystemClass::ZIP;
    } else {
        out.kind = SystemClass::GENERAL;
    }
    return out;
}

StateSpaceSystem minimal_sss_realization(const StateSpaceSystem& sys) {
    if (!is_sss(sys)) {
        throw Error(ErrorCode::InvalidArgument, "minimal SSS realization requires an SSS system");
    }
    const MatrixXd sym = 0.5 * (sys.a() + sys.a().transpose());
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(sym);
    const VectorXd& lambda = es.eigenvalues();
    if (lambda.maxCoeff() >= 0.0) {
        throw Error(ErrorCode::UnstableSystem, "A has a nonnegative eigenvalue");
    }
    const VectorXd qb = es.eigenvectors().transpose() * sys.b();

    // eigenvalues arrive ascending; merge clusters of (numerically) equal values
    std::vector<double> poles;
    std::vector<double> residues;
    std::vector<double> weighted;
    std::vector<int> counts;
    for (Index i = 0; i < lambda.size(); ++i) {
        const double phi = qb(i) * qb(i);
        const bool same = !poles.empty() &&
                          std::abs(lambda(i) - poles.back()) <=
                              tolerances::kPoleSeparation *
                                  std::max(std::abs(lambda(i)), std::abs(poles.back()));
        if (same) {
            residues.back() += phi;
            weighted.back() += phi * lambda(i);
            counts.back() += 1;
            // representative tracks the running mean so chained clusters stay anchored
            poles.back() += (lambda(i) - poles.back()) / counts.back();
        } else {
            poles.push_back(lambda(i));
            residues.push_back(phi);
            weighted.push_back(phi * lambda(i));
            counts.push_back(1);
        }
    }
    const double total = std::accumulate(residues.begin(), residues.end(), 0.0);
    std::vector<double> kept_poles;
    std::vector<double> kept_residues;
    for (std::size_t k = 0; k < poles.size(); ++k) {
        if (residues[k] <= tolerances::kMinimality * total) continue;
        kept_poles.push_back(weighted[k] / residues[k]);
        kept_residues.push_back(residues[k]);
    }
    if (kept_poles.empty()) {
        throw Error(ErrorCode::InvalidArgument, "transfer function is identically zero");
    }
    const auto m = static_cast<Index>(kept_poles.size());
    MatrixXd a = MatrixXd::Zero(m, m);
    VectorXd b(m);
    for (Index i = 0; i < m; ++i) {
        a(i, i) = kept_poles[static_cast<std::size_t>(i)];
        b(i) = std::sqrt(kept_residues[static_cast<std::size_t>(i)]);
    }
    return StateSpaceSystem(std::move(a), b, b);
}

StateSpaceSystem realize(const PoleResidueForm& form) {
    if (form.poles.size() != form.residues.size()) {
        throw Error(ErrorCode::InvalidArgument, "residues: length does not match poles");
    }
    const auto n = static_cast<Index>(form.poles.size());
    if (n == 0) throw Error(ErrorCode::InvalidArgument, "poles: empty");
    MatrixXd a = MatrixXd::Zero(n, n);
    VectorXd b = VectorXd::Zero(n);
    VectorXd c = VectorXd::Zero(n);

    std::vector<bool> used(form.poles.size(), false);
    Index row = 0;
    for (std::size_t i = 0; i < form.poles.size(); ++i) {
        if (used[i]) continue;
        const Complex p = form.poles[i];
        const Complex phi = form.residues[i];
        if (p.imag() == 0.0) {
            if (phi.imag() != 0.0) {
                throw Error(ErrorCode::InvalidArgument, "residues: real pole with complex residue");
            }
            a(row, row) = p.real();
            if (phi.real() > 0.0) {
                b(row) = c(row) = std::sqrt(phi.real());
            } else {
                b(row) = 1.0;
                c(row) = phi.real();
            }
            used[i] = true;
            row += 1;
            continue;
        }
        std::size_t partner = form.poles.size();
        for (std::size_t j = i + 1; j < form.poles.size(); ++j) {
            if (!used[j] && form.poles[j] == std::conj(p) &&
                form.residues[j] == std::conj(phi)) {
                partner = j;
                break;
            }
        }
        if (partner == form.poles.size()) {
            throw Error(ErrorCode::InvalidArgument,
                        "poles: complex pole without conjugate partner and conjugate residue");
        }
        used[i] = used[partner] = true;
        // use the member with positive imaginary part
        const Complex q = p.imag() > 0.0 ? p : std::conj(p);
        const Complex rho = p.imag() > 0.0 ? phi : std::conj(phi);
        a(row, row) = q.real();
        a(row, row + 1) = q.imag();
        a(row + 1, row) = -q.imag();
        a(row + 1, row + 1) = q.real();
        b(row) = 1.0;
        c(row) = 2.0 * rho.real();
        c(row + 1) = 2.0 * rho.imag();
        row += 2;
    }
    return StateSpaceSystem(std::move(a), std::move(b), std::move(c));
}

std::string_view to_string(SystemClass kind) {
    switch (kind) {
        case SystemClass::SSS: return "SSS";
        case SystemClass::ZIP: return "ZIP";
        case SystemClass::GENERAL: return "GENERAL";
    }
    return "GENERAL";
}

}  // namespace irka_lab
