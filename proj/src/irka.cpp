#include "irka_lab/irka.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "internal/splitmix.hpp"

namespace irka_lab {

namespace {

constexpr double kCoincident = 1e-8;

using internal::SplitMix64;

std::vector<Complex> reduced_eigenvalues(const StateSpaceSystem& reduced, bool symmetric) {
    std::vector<Complex> out;
    const Index r = reduced.order();
    if (symmetric) {
        Eigen::SelfAdjointEigenSolver<MatrixXd> es(reduced.a(), Eigen::EigenvaluesOnly);
        for (Index i = 0; i < r; ++i) out.emplace_back(es.eigenvalues()(i), 0.0);
    } else {
        Eigen::EigenSolver<MatrixXd> es(reduced.a(), false);
        for (Index i = 0; i < r; ++i) out.push_back(es.eigenvalues()(i));
    }
    sort_canonical(out);
    return out;
}

// Separates shifts that collapsed onto each other by +-eps|s|, keeping
// conjugate closure (work on the closed upper half-plane, then mirror).
std::vector<Complex> separate_coincident(const std::vector<Complex>& shifts, double eps,
                                         int& count) {
    std::vector<Complex> upper;
    for (const auto& s : shifts) {
        if (s.imag() >= 0.0) upper.push_back(s);
    }
    for (std::size_t i = 0; i < upper.size(); ++i) {
        for (std::size_t j = i + 1; j < upper.size(); ++j) {
            const double scale = std::max(std::abs(upper[i]), std::abs(upper[j]));
            if (std::abs(upper[i] - upper[j]) <= kCoincident * scale) {
                upper[i] *= (1.0 - eps);
                upper[j] *= (1.0 + eps);
                ++count;
            }
        }
    }
    std::vector<Complex> out = upper;
    for (const auto& s : upper) {
        if (s.imag() > 0.0) out.push_back(std::conj(s));
    }
    sort_canonical(out);
    return out;
}

}  // namespace

std::string_view to_string(InitStrategy s) {
    switch (s) {
        case InitStrategy::mirror_spectrum_logspace: return "mirror_spectrum_logspace";
        case InitStrategy::random_loguniform: return "random_loguniform";
    }
    return "mirror_spectrum_logspace";
}

InitStrategy init_strategy_from_string(std::string_view name) {
    if (name == "logspace" || name == "mirror_spectrum_logspace") {
        return InitStrategy::mirror_spectrum_logspace;
    }
    if (name == "random" || name == "random_loguniform") return InitStrategy::random_loguniform;
    throw Error(ErrorCode::InvalidArgument, "init: unknown strategy '" + std::string(name) + "'");
}

void IrkaConfig::validate(Index n, bool allow_full_order) const {
    if (r < 1 || r > n || (r == n && !allow_full_order)) {
        std::ostringstream msg;
        msg << "r must be < n (got r = " << r << ", n = " << n << ")";
        throw Error(ErrorCode::InvalidArgument, msg.str());
    }
    if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tol must be positive");
    if (max_sweeps < 1) throw Error(ErrorCode::InvalidArgument, "max_sweeps must be >= 1");
    if (!(perturb_eps > 0.0)) throw Error(ErrorCode::InvalidArgument, "perturb_eps must be positive");
}

ShiftSet initial_shifts(const StateSpaceSystem& sys, int r, InitStrategy strategy,
                        std::uint64_t seed) {
    if (r < 1) throw Error(ErrorCode::InvalidArgument, "r must be positive");
    const auto eigs = sys.eigenvalues();
    double lo = std::abs(eigs.front().real());
    double hi = lo;
    for (const auto& z : eigs) {
        if (!(z.real() < 0.0)) throw Error(ErrorCode::UnstableSystem, "initial shifts need a stable system");
        lo = std::min(lo, std::abs(z.real()));
        hi = std::max(hi, std::abs(z.real()));
    }
    if (r > 1 && hi <= lo * (1.0 + 1e-6)) {
        lo *= 0.5;
        hi *= 2.0;
    }
    const double log_lo = std::log(lo);
    const double log_hi = std::log(hi);

    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(r));
    if (strategy == InitStrategy::mirror_spectrum_logspace) {
        if (r == 1) {
            values.push_back(std::sqrt(lo * hi));
        } else {
            for (int i = 0; i < r; ++i) {
                const double t = static_cast<double>(i) / (r - 1);
                values.push_back(std::exp(log_lo + t * (log_hi - log_lo)));
            }
            values.front() = lo;
            values.back() = hi;
        }
    } else {
        SplitMix64 rng(seed);
        while (static_cast<int>(values.size()) < r) {
            const double candidate = std::exp(log_lo + rng.uniform() * (log_hi - log_lo));
            const bool clash = std::any_of(values.begin(), values.end(), [&](double v) {
                return std::abs(v - candidate) <= 1e-6 * std::max(v, candidate);
            });
            if (!clash) values.push_back(candidate);
        }
        std::sort(values.begin(), values.end());
    }
    return ShiftSet::real(values);
}

StateSpaceSystem interpolant(const StateSpaceSystem& sys, const ShiftSet& shifts, bool symmetric) {
    const ProjectionBasis basis = build_bases(sys, shifts);
    return reduce(sys, basis,
                  symmetric ? ProjectionMode::symmetric : ProjectionMode::petrov_galerkin);
}

ShiftMapStep shift_map_step(const StateSpaceSystem& sys, const ShiftSet& shifts, bool symmetric) {
    StateSpaceSystem reduced = interpolant(sys, shifts, symmetric);
    std::vector<Complex> poles = reduced_eigenvalues(reduced, symmetric);
    std::vector<Complex> mirrored;
    mirrored.reserve(poles.size());
    for (const auto& p : poles) {
        if (!(p.real() < 0.0)) {
            std::ostringstream msg;
            msg << "reduced pole " << p << " is not stable; mirrored shift would leave the right half-plane";
            throw Error(ErrorCode::MirroredShiftInvalid, msg.str());
        }
        mirrored.push_back(-p);
    }
    sort_canonical(mirrored);
    return ShiftMapStep{std::move(mirrored), std::move(reduced), std::move(poles)};
}

ShiftSet shift_map(const StateSpaceSystem& sys, const ShiftSet& shifts) {
    return ShiftSet(shift_map_step(sys, shifts, is_sss(sys)).next);
}

double shift_change(const std::vector<Complex>& previous, const std::vector<Complex>& next) {
    if (previous.size() != next.size()) {
        throw Error(ErrorCode::InvalidArgument, "shift sets differ in size");
    }
    double diff = 0.0;
    double scale = 0.0;
    for (std::size_t i = 0; i < previous.size(); ++i) {
        diff = std::max(diff, std::abs(next[i] - previous[i]));
        scale = std::max(scale, std::abs(previous[i]));
    }
    return diff / scale;
}

IterationTrace run_irka(const StateSpaceSystem& sys, const IrkaConfig& cfg, const ShiftSet& shifts0) {
    // r = n reproduces H and is allowed here; front ends require r < n
    cfg.validate(sys.order(), true);
    if (static_cast<int>(shifts0.size()) != cfg.r) {
        throw Error(ErrorCode::InvalidArgument, "initial shifts: count must equal r");
    }
    IterationTrace trace;
    trace.symmetric_pathway = is_sss(sys);
    if (trace.symmetric_pathway && !shifts0.all_real_positive()) {
        throw Error(ErrorCode::InvalidArgument,
                    "initial shifts: SSS systems require real positive shifts");
    }

    ShiftSet current = shifts0.canonical();
    for (int sweep = 0; sweep < cfg.max_sweeps; ++sweep) {
        ShiftMapStep step = shift_map_step(sys, current, trace.symmetric_pathway);
        const double change = shift_change(current.values(), step.next);
        trace.sweeps.push_back({current, step.reduced_poles, change});
        current = ShiftSet(separate_coincident(step.next, cfg.perturb_eps, trace.perturbations));
        if (change <= cfg.tol) {
            trace.converged = true;
            break;
        }
    }

    trace.final_shifts = current;
    trace.final_model = interpolant(sys, current, trace.symmetric_pathway);
    if (trace.converged) {
        std::vector<Complex> mirrored;
        for (const auto& p : reduced_eigenvalues(*trace.final_model, trace.symmetric_pathway)) {
            mirrored.push_back(-p);
        }
        sort_canonical(mirrored);
        trace.optimality_residuals = check_hermite(sys, *trace.final_model, ShiftSet(mirrored));
    }
    return trace;
}

}  // namespace irka_lab
