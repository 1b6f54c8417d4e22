#ifndef IRKA_LAB_LTI_CORE_HPP
#define IRKA_LAB_LTI_CORE_HPP

#include <complex>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "irka_lab/errors.hpp"

namespace irka_lab {

using Complex = std::complex<double>;
using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace tolerances {
/// max-norm asymmetry allowed for SSS detection, scaled by (1 + max|A|)
inline constexpr double kSymmetry = 1e-12;
/// residues at or below this fraction of the residue sum are dropped
inline constexpr double kMinimality = 1e-12;
/// eigenvalues closer than this (relative) are treated as repeated
inline constexpr double kPoleSeparation = 1e-10;
/// reciprocal condition estimate of sI - A below which a shift is singular
inline constexpr double kShiftRcond = 1e-14;
}  // namespace tolerances

/// Dense realization (A, b, c) of a SISO LTI system
///   x' = A x + b u,  y = c^T x.
/// Construction validates dimensions and finiteness; instances are immutable.
class StateSpaceSystem {
public:
    StateSpaceSystem(MatrixXd a, VectorXd b, VectorXd c);

    const MatrixXd& a() const noexcept { return a_; }
    const VectorXd& b() const noexcept { return b_; }
    const VectorXd& c() const noexcept { return c_; }
    Index order() const noexcept { return a_.rows(); }

    /// Eigenvalues of A (symmetric solver when A is symmetric).
    std::vector<Complex> eigenvalues() const;
    /// Every eigenvalue of A has strictly negative real part.
    bool is_stable() const;

private:
    MatrixXd a_;
    VectorXd b_;
    VectorXd c_;
};

/// H(s) = sum_i residues[i] / (s - poles[i])
struct PoleResidueForm {
    std::vector<Complex> poles;
    std::vector<Complex> residues;

    Complex evaluate(Complex s) const;
    std::size_t size() const noexcept { return poles.size(); }
};

/// H(s), H'(s) or H''(s) for order 0, 1, 2. Uses one LU factorization of
/// sI - A and repeated solves against it.
Complex eval_transfer(const StateSpaceSystem& sys, Complex s, int order = 0);

/// All derivatives up to and including max_order from a single factorization.
std::vector<Complex> eval_transfer_derivatives(const StateSpaceSystem& sys, Complex s,
                                               int max_order);

PoleResidueForm to_pole_residue(const StateSpaceSystem& sys);

enum class SystemClass { SSS, ZIP, GENERAL };

struct Classification {
    SystemClass kind = SystemClass::GENERAL;
    bool is_sss = false;
    bool is_zip = false;
    bool is_stable = false;
    double asymmetry = 0.0;      ///< max|A - A^T|
    double io_mismatch = 0.0;    ///< max|b - c|
    std::optional<PoleResidueForm> pole_residue;
    std::string note;
};

Classification classify(const StateSpaceSystem& sys);

bool is_sss(const StateSpaceSystem& sys);

/// Diagonal SSS realization with distinct poles and strictly positive residues.
StateSpaceSystem minimal_sss_realization(const StateSpaceSystem& sys);

/// Diagonal (or real 2x2 block-diagonal for conjugate pairs) realization of
/// a pole-residue form. Positive real residues give an SSS realization.
StateSpaceSystem realize(const PoleResidueForm& form);

/// Ascending by real part, then by imaginary part.
void sort_canonical(std::vector<Complex>& values);

std::string_view to_string(SystemClass kind);

}  // namespace irka_lab

#endif  // IRKA_LAB_LTI_CORE_HPP
