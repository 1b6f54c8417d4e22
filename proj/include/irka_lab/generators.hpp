#ifndef IRKA_LAB_GENERATORS_HPP
#define IRKA_LAB_GENERATORS_HPP

#include <cstdint>
#include <vector>

#include "irka_lab/lti_core.hpp"

namespace irka_lab::generators {

/// A = -(G G^T + delta I) with seeded Gaussian G / sqrt(n), delta = 1e-2;
/// b = c with seeded entries in [0.5, 1.5).
StateSpaceSystem random_sss(Index n, std::uint64_t seed);

/// n-node RC ladder: series resistors `resistance` between consecutive
/// nodes and from node 1 to ground, grounded capacitors `capacitance`;
/// current injected and voltage observed at node 1.
StateSpaceSystem rc_ladder(Index n, double resistance = 1.0, double capacitance = 1.0);

/// Diagonal SSS realization with b = c = sqrt(residues). Poles must be
/// real negative and residues positive.
StateSpaceSystem diagonal(const std::vector<double>& poles, const std::vector<double>& residues);

}  // namespace irka_lab::generators

#endif  // IRKA_LAB_GENERATORS_HPP
