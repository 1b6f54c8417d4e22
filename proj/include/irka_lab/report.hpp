#ifndef IRKA_LAB_REPORT_HPP
#define IRKA_LAB_REPORT_HPP

#include <string>

#include "irka_lab/io.hpp"

namespace irka_lab::report {

enum ExitCode { kConverged = 0, kFailure = 1, kNotConverged = 2 };

struct ReduceOptions {
    IrkaConfig config;
    bool certify = true;  ///< certify + error zeros for converged SSS runs
    bool timings = true;
};

struct ReduceOutcome {
    io::json report;
    int exit_code = kFailure;
};

/// Full pipeline on the raw bytes of a system file: initial shifts, IRKA,
/// H2 error and, for converged SSS runs, certificate and error zeros.
ReduceOutcome reduce(const std::string& system_text, const ReduceOptions& options);

struct SweepOptions {
    IrkaConfig config;  ///< init and seed are overridden per run
    int count = 0;
    int jobs = 1;
    bool timings = true;
};

struct SweepOutcome {
    io::json report;
    std::string csv;
};

/// Seed of run `index` in a sweep started from `seed`.
std::uint64_t run_seed(std::uint64_t seed, int index);

/// `count` random-start IRKA runs on an SSS system; converged runs are
/// clustered by shift-set distance and each cluster is certified once.
SweepOutcome sweep(const std::string& system_text, const SweepOptions& options);

/// Re-certifies the final model stored in a RunReport against its system.
io::json recertify(const std::string& report_text, const std::string& system_text);

}  // namespace irka_lab::report

#endif  // IRKA_LAB_REPORT_HPP
