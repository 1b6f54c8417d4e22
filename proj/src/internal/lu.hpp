#ifndef IRKA_LAB_INTERNAL_LU_HPP
#define IRKA_LAB_INTERNAL_LU_HPP

#include <cmath>

namespace irka_lab::internal {

// Eigen's estimate reports 1 when a pivot is exactly zero; treat that as singular.
template <typename Lu>
double safe_rcond(const Lu& lu) {
    const auto& u = lu.matrixLU();
    for (Eigen::Index i = 0; i < u.rows(); ++i) {
        const double p = std::abs(u(i, i));
        if (!(p > 0.0) || !std::isfinite(p)) return 0.0;
    }
    return lu.rcond();
}

}  // namespace irka_lab::internal

#endif  // IRKA_LAB_INTERNAL_LU_HPP
