#include "irka_lab/generators.hpp"

#include <cmath>

#include "internal/splitmix.hpp"

namespace irka_lab::generators {

StateSpaceSystem random_sss(Index n, std::uint64_t seed) {
    if (n < 1) throw Error(ErrorCode::InvalidArgument, "n must be >= 1");
    internal::SplitMix64 rng(seed);
    MatrixXd g(n, n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) g(i, j) = scale * rng.normal();
    }
    constexpr double delta = 1e-2;
    MatrixXd a = -(g * g.transpose());
    a.diagonal().array() -= delta;
    a = 0.5 * (a + a.transpose()).eval();
    VectorXd b(n);
    for (Index i = 0; i < n; ++i) b(i) = 0.5 + rng.uniform();
    return StateSpaceSystem(std::move(a), b, b);
}

StateSpaceSystem rc_ladder(Index n, double resistance, double capacitance) {
    if (n < 1) throw Error(ErrorCode::InvalidArgument, "n must be >= 1");
    if (!(resistance > 0.0) || !(capacitance > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "resistance and capacitance must be positive");
    }
    // nodal analysis: C v' = -G v + e_1 i, G the conductance Laplacian
    const double g = 1.0 / resistance;
    MatrixXd a = MatrixXd::Zero(n, n);
    for (Index i = 0; i < n; ++i) {
        const bool last = (i == n - 1);
        a(i, i) = -(last ? 1.0 : 2.0) * g / capacitance;
        if (!last) {
            a(i, i + 1) = g / capacitance;
            a(i + 1, i) = g / capacitance;
        }
    }
    if (n == 1) a(0, 0) = -g / capacitance;
    VectorXd b = VectorXd::Zero(n);
    b(0) = 1.0 / std::sqrt(capacitance);
    // symmetric scaling keeps the realization SSS for any capacitance
    return StateSpaceSystem(std::move(a), b, b);
}

StateSpaceSystem diagonal(const std::vector<double>& poles, const std::vector<double>& residues) {
    if (poles.empty()) throw Error(ErrorCode::InvalidArgument, "poles: empty");
    if (poles.size() != residues.size()) {
        throw Error(ErrorCode::InvalidArgument, "residues: length does not match poles");
    }
    const auto n = static_cast<Index>(poles.size());
    MatrixXd a = MatrixXd::Zero(n, n);
    VectorXd b(n);
    for (Index i = 0; i < n; ++i) {
        const double p = poles[static_cast<std::size_t>(i)];
        const double phi = residues[static_cast<std::size_t>(i)];
        if (!(p < 0.0)) throw Error(ErrorCode::InvalidArgument, "poles: must be real negative");
        if (!(phi > 0.0)) throw Error(ErrorCode::InvalidArgument, "residues: must be positive");
        a(i, i) = p;
        b(i) = std::sqrt(phi);
    }
    return StateSpaceSystem(std::move(a), b, b);
}

}  // namespace irka_lab::generators
