#ifndef IRKA_LAB_ERROR_ANALYSIS_HPP
#define IRKA_LAB_ERROR_ANALYSIS_HPP

#include <vector>

#include "irka_lab/lti_core.hpp"

namespace irka_lab {

struct ErrorZeroReport {
    std::vector<Complex> zeros;  ///< finite zeros of H - H_r, canonical order
    int rhp_count = 0;           ///< includes boundary zeros
    int lhp_count = 0;
    int boundary_count = 0;      ///< |Re z| < 1e-9 (1 + |z|), counted as RHP
    /// Clustered multiplicity summed over the mirrored poles. A double zero
    /// splits by about sqrt(rounding / E''), so a pair counts as a double
    /// root when its centroid is within 1e-6 relative of -lambda~_i and both
    /// members lie inside that rounding split radius.
    int interpolation_matched = 0;
    /// per mirrored reduced pole (ascending), number of zeros clustered on it
    std::vector<int> matched_multiplicity;
    /// zeros individually within 1e-6 relative distance of some -lambda~_i
    int strict_matched = 0;
    /// per mirrored reduced pole, largest |z - m| / |m| within its cluster
    std::vector<double> cluster_spread;
    std::vector<Complex> mirrored_poles;  ///< -lambda~, canonical order
    double min_error_on_grid = 0.0;
    double grid_argmin = 0.0;
};

namespace error_grid {
inline constexpr int kPoints = 2000;
inline constexpr double kLow = 1e-4;
inline constexpr double kHigh = 1e4;
}  // namespace error_grid

/// Finite eigenvalues of the pencil [[A, b], [c^T, 0]] - z diag(I, 0).
std::vector<Complex> transmission_zeros(const StateSpaceSystem& sys);

/// min over s in {0} U logspace(1e-4, 1e4, 2000) of Re(H(s) - H_r(s)), and
/// where it occurs.
std::pair<double, double> error_grid_minimum(const StateSpaceSystem& full,
                                             const StateSpaceSystem& reduced);

ErrorZeroReport error_zeros(const StateSpaceSystem& full, const StateSpaceSystem& reduced);

}  // namespace irka_lab

#endif  // IRKA_LAB_ERROR_ANALYSIS_HPP
