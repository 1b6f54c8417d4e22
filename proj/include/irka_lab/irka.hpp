#ifndef IRKA_LAB_IRKA_HPP
#define IRKA_LAB_IRKA_HPP

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "irka_lab/lti_core.hpp"
#include "irka_lab/projection.hpp"

namespace irka_lab {

enum class InitStrategy { mirror_spectrum_logspace, random_loguniform };

std::string_view to_string(InitStrategy s);
InitStrategy init_strategy_from_string(std::string_view name);

struct IrkaConfig {
    int r = 1;
    double tol = 1e-10;
    int max_sweeps = 200;
    InitStrategy init = InitStrategy::mirror_spectrum_logspace;
    double perturb_eps = 1e-8;
    std::uint64_t seed = 0;

    /// Throws InvalidArgument unless 1 <= r < n (r <= n with
    /// allow_full_order), tol > 0 and max_sweeps >= 1.
    void validate(Index n, bool allow_full_order = false) const;
};

struct SweepRecord {
    ShiftSet shifts_in;
    std::vector<Complex> reduced_poles;
    double shift_change = 0.0;
};

struct IterationTrace {
    std::vector<SweepRecord> sweeps;
    bool converged = false;
    bool symmetric_pathway = false;
    ShiftSet final_shifts;  ///< shifts that generated final_model
    std::optional<StateSpaceSystem> final_model;
    /// Hermite residuals at the mirrored poles of final_model, on convergence
    std::vector<HermiteResidual> optimality_residuals;
    /// Number of coincident-shift perturbations applied
    int perturbations = 0;
};

/// Seeded log-uniform or log-spaced real shifts in [min|Re lambda|, max|Re lambda|].
ShiftSet initial_shifts(const StateSpaceSystem& sys, int r, InitStrategy strategy,
                        std::uint64_t seed);

struct ShiftMapStep {
    std::vector<Complex> next;  ///< mirrored reduced poles, canonical order
    StateSpaceSystem reduced;
    std::vector<Complex> reduced_poles;
};

/// One IRKA sweep: interpolate at `shifts`, return mirrored reduced poles.
/// `symmetric` selects the one-sided orthonormal projection.
ShiftMapStep shift_map_step(const StateSpaceSystem& sys, const ShiftSet& shifts, bool symmetric);

/// Pathway chosen from is_sss(sys).
ShiftSet shift_map(const StateSpaceSystem& sys, const ShiftSet& shifts);

/// Relative change between two canonically ordered shift sets (max norm).
double shift_change(const std::vector<Complex>& previous, const std::vector<Complex>& next);

IterationTrace run_irka(const StateSpaceSystem& sys, const IrkaConfig& cfg, const ShiftSet& shifts0);

/// Builds the reduced model for `shifts` (symmetric or Petrov-Galerkin).
StateSpaceSystem interpolant(const StateSpaceSystem& sys, const ShiftSet& shifts, bool symmetric);

}  // namespace irka_lab

#endif  // IRKA_LAB_IRKA_HPP
