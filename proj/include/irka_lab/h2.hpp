#ifndef IRKA_LAB_H2_HPP
#define IRKA_LAB_H2_HPP

#include <optional>

#include "irka_lab/lti_core.hpp"

namespace irka_lab {

/// Solves a X + X b^T + rhs = 0 for stable a and b (complex Schur
/// Bartels-Stewart). No residual check; see lyapunov_solve.
MatrixXd sylvester_solve(const MatrixXd& a, const MatrixXd& b, const MatrixXd& rhs);

/// Solves a P + P a^T + rhs = 0. Throws UnstableMatrix when a has an
/// eigenvalue with nonnegative real part and ResidualTooLarge when the
/// solution misses max|aP + Pa^T + rhs| < 1e-10 (1 + max|rhs|).
MatrixXd lyapunov_solve(const MatrixXd& a, const MatrixXd& rhs);

/// sqrt(c^T P c) with P the controllability Gramian.
double h2_norm(const StateSpaceSystem& sys);

/// Block-diagonal error realization: A_e = diag(A, A_r), b_e = [b; b_r],
/// c_e = [c; -c_r].
StateSpaceSystem error_system(const StateSpaceSystem& full, const StateSpaceSystem& reduced);

/// ||H - H_r||_H2 from the Gramian of the error realization. Blocks are
/// solved separately, so an exact copy of the full model yields exactly 0.
/// When real poles of H_r collide with poles of H, an equivalent realization
/// carrying the pole and residue differences is used instead.
double h2_error_norm(const StateSpaceSystem& full, const StateSpaceSystem& reduced);

struct H2ErrorReport {
    double error_norm_gramian = 0.0;
    /// sqrt of cost_J from the pole-residue sum; empty on pole collision
    std::optional<double> error_norm_pole_residue;
    double relative_h2_error = 0.0;
    /// squared error from the pole-residue sum (gramian square on collision)
    double cost_J = 0.0;
    double full_norm = 0.0;
    /// |gramian - pole_residue| / gramian, when both routes ran
    std::optional<double> route_discrepancy;
    bool pole_collision = false;
    /// relative_h2_error is absolute because ||H|| was below 1e-14
    bool relative_is_absolute = false;
};

/// Squared H2 error from poles and residues of both systems:
///   sum_i phi_i E(-lambda_i) - sum_j phi~_j E(-lambda~_j),  E = H - H_r.
double pole_residue_cost(const StateSpaceSystem& full, const PoleResidueForm& full_form,
                         const StateSpaceSystem& reduced, const PoleResidueForm& reduced_form);

H2ErrorReport h2_error(const StateSpaceSystem& full, const StateSpaceSystem& reduced);

}  // namespace irka_lab

#endif  // IRKA_LAB_H2_HPP
