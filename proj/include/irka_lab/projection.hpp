#ifndef IRKA_LAB_PROJECTION_HPP
#define IRKA_LAB_PROJECTION_HPP

#include <vector>

#include "irka_lab/lti_core.hpp"

namespace irka_lab {

/// Ordered interpolation points. Validated on construction: closed under
/// complex conjugation and pairwise distinct.
class ShiftSet {
public:
    ShiftSet() = default;
    explicit ShiftSet(std::vector<Complex> shifts);
    static ShiftSet real(const std::vector<double>& shifts);

    const std::vector<Complex>& values() const noexcept { return shifts_; }
    std::size_t size() const noexcept { return shifts_.size(); }
    const Complex& operator[](std::size_t i) const { return shifts_[i]; }

    bool all_real_positive() const;
    /// Copy sorted ascending by real part, then imaginary part.
    ShiftSet canonical() const;

private:
    std::vector<Complex> shifts_;
};

/// Interpolatory bases. Columns follow shift order; a conjugate pair
/// contributes the real part (at the member with positive imaginary part)
/// and the imaginary part (at its partner) of the same complex solve.
struct ProjectionBasis {
    MatrixXd v;  ///< columns span {(s_j I - A)^{-1} b}
    MatrixXd w;  ///< columns span {(s_j I - A)^{-T} c}
    MatrixXd q;  ///< orthonormal basis of range(v)
};

enum class ProjectionMode { petrov_galerkin, symmetric };

ProjectionBasis build_bases(const StateSpaceSystem& sys, const ShiftSet& shifts);

StateSpaceSystem reduce(const StateSpaceSystem& sys, const ProjectionBasis& basis,
                        ProjectionMode mode);

struct HermiteResidual {
    Complex shift;
    double value_residual = 0.0;       ///< |H - Hr| / (1 + |H|)
    double derivative_residual = 0.0;  ///< |H' - Hr'| / (1 + |H'|)
};

std::vector<HermiteResidual> check_hermite(const StateSpaceSystem& full,
                                           const StateSpaceSystem& reduced,
                                           const ShiftSet& shifts);

double max_residual(const std::vector<HermiteResidual>& residuals);

/// Orthonormal basis of range(m) via column-pivoted QR on unit-normalized
/// columns. Throws RankDeficientBasis when the numerical rank is short.
MatrixXd orthonormal_range(const MatrixXd& m);

}  // namespace irka_lab

#endif  // IRKA_LAB_PROJECTION_HPP
