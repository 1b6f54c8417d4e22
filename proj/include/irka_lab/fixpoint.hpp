#ifndef IRKA_LAB_FIXPOINT_HPP
#define IRKA_LAB_FIXPOINT_HPP

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "irka_lab/irka.hpp"
#include "irka_lab/lti_core.hpp"

namespace irka_lab {

/// Local analysis of the shift map at a fixed point. Reduced poles
/// lambda~_i are ordered so that the fixed-point shifts s_i = -lambda~_i
/// ascend; every matrix below uses that index order.
struct AnalysisMatrices {
    VectorXd reduced_poles;     ///< lambda~ (negative, descending)
    VectorXd reduced_residues;  ///< phi~ (positive)
    MatrixXd s11;               ///< -(l_i + l_j)^{-1}
    MatrixXd s12;               ///< -(l_i + l_j)^{-2}
    MatrixXd s22;               ///< -2 (l_i + l_j)^{-3}
    MatrixXd r_mat;             ///< diag(phi~)
    MatrixXd e_mat;             ///< diag(H''(-l_i) - H_r''(-l_i))
    MatrixXd k_mat;             ///< E R^{-1}
    MatrixXd s_c;               ///< S22 - S12 S11^{-1} S12
    MatrixXd m_mat;             ///< [[S11, S12], [S12, S22 - E R^{-1}]]
    MatrixXd phi;               ///< K - S_c, the pencil K - mu S_c at mu = 1

    MatrixXd s_tilde() const;   ///< [[S11, S12], [S12, S22]]
};

enum class Verdict { ATTRACTIVE_LOCAL_MIN, REPELLENT_OR_SADDLE, INDETERMINATE };

std::string_view to_string(Verdict v);

struct FixedPointCertificate {
    AnalysisMatrices matrices;
    MatrixXd jacobian;                 ///< -S_c^{-1} K (Jacobian of the reduced-pole map)
    std::vector<double> jacobian_eigs; ///< eigenvalues mu of K x = mu S_c x (of S_c^{-1} K)
    double jacobian_eig_max_imag = 0.0;///< from an unsymmetric eigensolve of S_c^{-1} K
    double spectral_radius = 0.0;
    bool e_positive = false;
    bool s_tilde_positive = false;
    bool neg_phi_positive = false;
    /// Central differences D of the reduced-pole map s -> lambda~(s), taken
    /// in residue-scaled coordinates u = R s, i.e. R D R^{-1}. This is the
    /// frame in which -S_c^{-1} K is the exact Jacobian.
    MatrixXd fd_jacobian;
    double fd_jacobian_maxdiff = 0.0;  ///< max |fd_jacobian - jacobian|
    /// Central differences of the shift map s -> -lambda~(s) in plain
    /// coordinates; similar to S_c^{-1} K, so its eigenvalues are mu.
    MatrixXd fd_shift_map_jacobian;
    double fd_eig_maxdiff = 0.0;       ///< max |eig(fd_shift_map_jacobian) - mu|
    bool fd_mismatch = false;          ///< fd_jacobian_maxdiff > 1e-4 (warning only)
    Verdict verdict = Verdict::INDETERMINATE;
    std::vector<std::string> warnings;
};

namespace certification {
inline constexpr double kFixedPointResidual = 1e-6;
inline constexpr double kVerdictMargin = 1e-8;
inline constexpr double kFdRelativeStep = 1e-6;
inline constexpr double kFdWarning = 1e-4;
}  // namespace certification

/// S11, S12, S22 from reduced poles alone (entrywise formulas).
void fill_s_blocks(const VectorXd& reduced_poles, MatrixXd& s11, MatrixXd& s12, MatrixXd& s22);

AnalysisMatrices assemble(const StateSpaceSystem& full, const StateSpaceSystem& reduced);

/// Cholesky of (m + m^T)/2 with no shift.
bool is_positive_definite(const MatrixXd& m);

FixedPointCertificate certify(const StateSpaceSystem& full, const StateSpaceSystem& reduced);
/// Same as above; rejects traces that did not converge.
FixedPointCertificate certify(const StateSpaceSystem& full, const StateSpaceSystem& reduced,
                              const IterationTrace& trace);

/// z^T S~ z two ways: matrix product and adaptive quadrature of
///   integral_0^inf [sum z_i e^{l_i t} - t sum z_{r+i} e^{l_i t}]^2 dt.
std::pair<double, double> verify_s_tilde_integral(const std::vector<double>& lambdas,
                                                  const std::vector<double>& z);

}  // namespace irka_lab

#endif  // IRKA_LAB_FIXPOINT_HPP
