// irka-lab: generate systems, run IRKA, certify fixed points, sweep basins.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "irka_lab/generators.hpp"
#include "irka_lab/io.hpp"
#include "irka_lab/report.hpp"

namespace {

using namespace irka_lab;

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
    if (flag) return *flag;
    if (const char* env = std::getenv("IRKA_LAB_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw Error(ErrorCode::InvalidArgument, "IRKA_LAB_SEED: not an unsigned integer");
        }
    }
    return 0;
}

void emit(const std::string& out, const std::string& text) {
    if (out.empty() || out == "-") {
        std::cout << text;
    } else {
        io::write_file(out, text);
    }
}

struct IrkaFlags {
    int r = 1;
    double tol = 1e-10;
    int max_sweeps = 200;
    std::string init = "logspace";
    std::optional<std::uint64_t> seed;

    void attach(CLI::App* cmd) {
        cmd->add_option("--r", r, "reduced order")->required();
        cmd->add_option("--tol", tol, "relative shift-change tolerance")->capture_default_str();
        cmd->add_option("--max-sweeps", max_sweeps, "sweep budget")->capture_default_str();
        cmd->add_option("--init", init, "initial shifts")
            ->check(CLI::IsMember({"logspace", "random"}))
            ->capture_default_str();
        cmd->add_option("--seed", seed, "seed (falls back to IRKA_LAB_SEED, then 0)");
    }

    IrkaConfig config() const {
        IrkaConfig cfg;
        cfg.r = r;
        cfg.tol = tol;
        cfg.max_sweeps = max_sweeps;
        cfg.init = init_strategy_from_string(init);
        cfg.seed = resolve_seed(seed);
        return cfg;
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"IRKA model reduction and fixed-point certification"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "write a system file");
    std::string kind;
    int order = 0;
    std::optional<std::uint64_t> gen_seed;
    double resistance = 1.0;
    double capacitance = 1.0;
    std::vector<double> poles;
    std::vector<double> residues;
    std::string gen_out;
    gen->add_option("kind", kind, "random_sss | rc_ladder | diagonal")
        ->required()
        ->check(CLI::IsMember({"random_sss", "rc_ladder", "diagonal"}));
    gen->add_option("--n", order, "order (random_sss, rc_ladder)");
    gen->add_option("--seed", gen_seed, "seed for random_sss");
    gen->add_option("--resistance", resistance, "rc_ladder resistance")->capture_default_str();
    gen->add_option("--capacitance", capacitance, "rc_ladder capacitance")->capture_default_str();
    gen->add_option("--poles", poles, "diagonal poles")->delimiter(',');
    gen->add_option("--residues", residues, "diagonal residues")->delimiter(',');
    gen->add_option("--out", gen_out, "output file (default stdout)");

    // reduce
    auto* red = app.add_subcommand("reduce", "run IRKA and write a report");
    std::string red_system;
    IrkaFlags red_flags;
    std::string red_certify = "auto";
    std::string red_out;
    bool red_no_timings = false;
    red->add_option("system", red_system, "system file")->required();
    red_flags.attach(red);
    red->add_option("--certify", red_certify, "certificate for converged SSS runs")
        ->check(CLI::IsMember({"auto", "off"}))
        ->capture_default_str();
    red->add_option("--out", red_out, "report file (default stdout)");
    red->add_flag("--no-timings", red_no_timings, "omit timings_ms");

    // sweep
    auto* swp = app.add_subcommand("sweep", "random-start basin sweep");
    std::string swp_system;
    IrkaFlags swp_flags;
    int swp_count = 0;
    int swp_jobs = 1;
    std::string swp_out;
    std::string swp_csv;
    bool swp_no_timings = false;
    swp->add_option("system", swp_system, "system file")->required();
    swp_flags.attach(swp);
    swp->add_option("--count", swp_count, "number of runs")->required();
    swp->add_option("--jobs", swp_jobs, "worker threads")->capture_default_str();
    swp->add_option("--out", swp_out, "report file (default stdout)");
    swp->add_option("--csv", swp_csv, "cluster summary CSV (default <out>.csv)");
    swp->add_flag("--no-timings", swp_no_timings, "omit timings_ms");

    // certify
    auto* cert = app.add_subcommand("certify", "re-certify the model stored in a report");
    std::string cert_report;
    std::string cert_system;
    std::string cert_out;
    cert->add_option("report", cert_report, "reduce report")->required();
    cert->add_option("--system", cert_system, "system file the report was produced from")->required();
    cert->add_option("--out", cert_out, "output file (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gen) {
            std::optional<StateSpaceSystem> sys;
            if (kind == "random_sss") {
                sys = generators::random_sss(order, resolve_seed(gen_seed));
            } else if (kind == "rc_ladder") {
                sys = generators::rc_ladder(order, resistance, capacitance);
            } else {
                sys = generators::diagonal(poles, residues);
            }
            emit(gen_out, io::dump(io::system_to_json(*sys)));
            return 0;
        }
        if (*red) {
            report::ReduceOptions options;
            options.config = red_flags.config();
            options.certify = red_certify == "auto";
            options.timings = !red_no_timings;
            const auto outcome = report::reduce(io::read_file(red_system), options);
            emit(red_out, io::dump(outcome.report));
            if (outcome.exit_code == report::kNotConverged) {
                std::cerr << "irka-lab: not converged within " << options.config.max_sweeps << " sweeps\n";
            }
            return outcome.exit_code;
        }
        if (*swp) {
            report::SweepOptions options;
            options.config = swp_flags.config();
            options.count = swp_count;
            options.jobs = swp_jobs;
            options.timings = !swp_no_timings;
            const auto outcome = report::sweep(io::read_file(swp_system), options);
            emit(swp_out, io::dump(outcome.report));
            std::string csv_path = swp_csv;
            if (csv_path.empty() && !swp_out.empty() && swp_out != "-") csv_path = swp_out + ".csv";
            if (!csv_path.empty()) io::write_file(csv_path, outcome.csv);
            return 0;
        }
        if (*cert) {
            const auto doc = report::recertify(io::read_file(cert_report), io::read_file(cert_system));
            emit(cert_out, io::dump(doc));
            return 0;
        }
    } catch (const Error& e) {
        std::cerr << "irka-lab: " << e.what() << "\n";
        return report::kFailure;
    } catch (const std::exception& e) {
        std::cerr << "irka-lab: " << e.what() << "\n";
        return report::kFailure;
    }
    return report::kFailure;
}
