#include "irka_lab/report.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>
#include <thread>

#include "internal/splitmix.hpp"

namespace irka_lab::report {

namespace {

constexpr double kClusterDistance = 1e-6;

class Stopwatch {
public:
    double lap_ms() {
        const auto now = std::chrono::steady_clock::now();
        const double ms = std::chrono::duration<double, std::milli>(now - last_).count();
        last_ = now;
        return ms;
    }

private:
    std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

std::string format_shifts(const std::vector<Complex>& shifts) {
    std::ostringstream out;
    out << std::setprecision(12);
    for (std::size_t i = 0; i < shifts.size(); ++i) {
        if (i > 0) out << ';';
        out << shifts[i].real();
        if (shifts[i].imag() != 0.0) out << (shifts[i].imag() > 0 ? "+" : "") << shifts[i].imag() << 'i';
    }
    return out.str();
}

struct RunResult {
    std::uint64_t seed = 0;
    bool converged = false;
    int sweeps = 0;
    std::vector<Complex> final_shifts;
    std::optional<StateSpaceSystem> model;
    double cost_j = std::numeric_limits<double>::quiet_NaN();
    std::string error;
};

RunResult single_run(const StateSpaceSystem& sys, IrkaConfig cfg, std::uint64_t seed) {
    RunResult out;
    out.seed = seed;
    cfg.init = InitStrategy::random_loguniform;
    cfg.seed = seed;
    try {
        const ShiftSet shifts0 = initial_shifts(sys, cfg.r, cfg.init, seed);
        IterationTrace trace = run_irka(sys, cfg, shifts0);
        out.converged = trace.converged;
        out.sweeps = static_cast<int>(trace.sweeps.size());
        out.final_shifts = trace.final_shifts.canonical().values();
        if (trace.converged) {
            out.cost_j = h2_error(sys, *trace.final_model).cost_J;
            out.model = trace.final_model;
        }
    } catch (const Error& e) {
        out.error = e.what();
    }
    return out;
}

}  // namespace

ReduceOutcome reduce(const std::string& system_text, const ReduceOptions& options) {
    Stopwatch watch;
    io::json timings = io::json::object();
    const StateSpaceSystem sys = io::parse_system(system_text);
    const IrkaConfig& cfg = options.config;
    cfg.validate(sys.order());
    timings["parse"] = watch.lap_ms();

    const ShiftSet shifts0 = initial_shifts(sys, cfg.r, cfg.init, cfg.seed);
    const IterationTrace trace = run_irka(sys, cfg, shifts0);
    timings["irka"] = watch.lap_ms();

    const H2ErrorReport h2 = h2_error(sys, *trace.final_model);
    timings["h2"] = watch.lap_ms();

    const Classification cls = classify(sys);
    io::json doc;
    doc["report_version"] = 1;
    doc["input_digest"] = io::sha256_digest(system_text);
    doc["system"] = {{"n", sys.order()}, {"class", std::string(to_string(cls.kind))}};
    doc["config"] = io::to_json(cfg);
    doc["config"]["certify"] = options.certify ? "auto" : "off";
    doc["initial_shifts"] = io::json::array();
    for (const auto& s : shifts0.values()) doc["initial_shifts"].push_back(io::complex_to_json(s));
    doc["trace"] = io::to_json(trace);
    doc["h2"] = io::to_json(h2);
    doc["certificate"] = nullptr;
    doc["error_zeros"] = nullptr;

    if (options.certify && trace.converged && cls.is_sss) {
        try {
            doc["certificate"] = io::to_json(certify(sys, *trace.final_model, trace));
        } catch (const Error& e) {
            doc["certificate_error"] = e.what();
        }
        timings["certify"] = watch.lap_ms();
        try {
            doc["error_zeros"] = io::to_json(error_zeros(sys, *trace.final_model));
        } catch (const Error& e) {
            doc["error_zeros_error"] = e.what();
        }
        timings["error_zeros"] = watch.lap_ms();
    }
    if (options.timings) doc["timings_ms"] = timings;

    ReduceOutcome outcome;
    outcome.report = std::move(doc);
    outcome.exit_code = trace.converged ? kConverged : kNotConverged;
    return outcome;
}

std::uint64_t run_seed(std::uint64_t seed, int index) {
    internal::SplitMix64 mix(seed ^ (0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(index + 1)));
    return mix.next();
}

SweepOutcome sweep(const std::string& system_text, const SweepOptions& options) {
    Stopwatch watch;
    const StateSpaceSystem sys = io::parse_system(system_text);
    if (!is_sss(sys)) throw Error(ErrorCode::InvalidSystem, "sweep requires an SSS system");
    if (options.count < 0) throw Error(ErrorCode::InvalidArgument, "count must be >= 0");
    if (options.jobs < 1) throw Error(ErrorCode::InvalidArgument, "jobs must be >= 1");
    IrkaConfig base = options.config;
    base.init = InitStrategy::random_loguniform;
    base.validate(sys.order());

    const auto count = static_cast<std::size_t>(options.count);
    std::vector<RunResult> runs(count);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            runs[i] = single_run(sys, base, run_seed(base.seed, static_cast<int>(i)));
        }
    };
    const auto workers = std::min<std::size_t>(static_cast<std::size_t>(options.jobs), std::max<std::size_t>(count, 1));
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < workers; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    const double runs_ms = watch.lap_ms();

    // cluster in run order so cluster ids do not depend on scheduling
    std::vector<int> cluster_of(count, -1);
    std::vector<std::size_t> representative;
    for (std::size_t i = 0; i < count; ++i) {
        if (!runs[i].converged) continue;
        for (std::size_t c = 0; c < representative.size(); ++c) {
            const auto& rep = runs[representative[c]].final_shifts;
            if (rep.size() == runs[i].final_shifts.size() &&
                shift_change(rep, runs[i].final_shifts) <= kClusterDistance) {
                cluster_of[i] = static_cast<int>(c);
                break;
            }
        }
        if (cluster_of[i] < 0) {
            cluster_of[i] = static_cast<int>(representative.size());
            representative.push_back(i);
        }
    }

    io::json run_rows = io::json::array();
    for (std::size_t i = 0; i < count; ++i) {
        const auto& run = runs[i];
        io::json row = {{"index", i},
                        {"seed", run.seed},
                        {"converged", run.converged},
                        {"sweeps", run.sweeps},
                        {"final_shifts", io::json::array()},
                        {"cost_J", io::real_to_json(run.cost_j)},
                        {"cluster", cluster_of[i] < 0 ? io::json(nullptr) : io::json(cluster_of[i])}};
        for (const auto& s : run.final_shifts) row["final_shifts"].push_back(io::complex_to_json(s));
        if (!run.error.empty()) row["error"] = run.error;
        run_rows.push_back(std::move(row));
    }

    io::json clusters = io::json::array();
    std::ostringstream csv;
    csv << std::setprecision(12);
    csv << "cluster,runs,basin_share,spectral_radius,verdict,cost_J,shifts\n";
    for (std::size_t c = 0; c < representative.size(); ++c) {
        const RunResult& rep = runs[representative[c]];
        const auto members = std::count(cluster_of.begin(), cluster_of.end(), static_cast<int>(c));
        const double share = static_cast<double>(members) / static_cast<double>(count);
        io::json entry = {{"cluster", c},
                          {"representative_run", representative[c]},
                          {"runs", members},
                          {"basin_share", share},
                          {"shifts", io::json::array()},
                          {"cost_J", io::real_to_json(rep.cost_j)},
                          {"certificate", nullptr}};
        for (const auto& s : rep.final_shifts) entry["shifts"].push_back(io::complex_to_json(s));
        double rho = std::numeric_limits<double>::quiet_NaN();
        std::string verdict = "UNCERTIFIED";
        try {
            const FixedPointCertificate cert = certify(sys, *rep.model);
            rho = cert.spectral_radius;
            verdict = std::string(to_string(cert.verdict));
            entry["certificate"] = io::to_json(cert);
        } catch (const Error& e) {
            entry["certificate_error"] = e.what();
        }
        entry["spectral_radius"] = io::real_to_json(rho);
        entry["verdict"] = verdict;
        clusters.push_back(std::move(entry));
        csv << c << ',' << members << ',' << share << ',' << rho << ',' << verdict << ','
            << rep.cost_j << ',' << format_shifts(rep.final_shifts) << '\n';
    }
    const double clusters_ms = watch.lap_ms();

    io::json doc;
    doc["report_version"] = 1;
    doc["input_digest"] = io::sha256_digest(system_text);
    doc["config"] = io::to_json(base);
    doc["config"]["count"] = options.count;
    doc["runs"] = std::move(run_rows);
    doc["clusters"] = std::move(clusters);
    if (options.timings) doc["timings_ms"] = {{"runs", runs_ms}, {"clusters", clusters_ms}};
    return {std::move(doc), csv.str()};
}

io::json recertify(const std::string& report_text, const std::string& system_text) {
    io::json stored;
    try {
        stored = io::json::parse(report_text);
    } catch (const io::json::parse_error& e) {
        throw Error(ErrorCode::ParseError, std::string("report: ") + e.what());
    }
    if (!stored.is_object() || !stored.contains("trace") || !stored["trace"].is_object()) {
        throw Error(ErrorCode::ParseError, "trace: missing");
    }
    const io::json& trace = stored["trace"];
    if (!trace.contains("final_model") || trace["final_model"].is_null()) {
        throw Error(ErrorCode::ParseError, "trace.final_model: missing");
    }
    StateSpaceSystem reduced = [&] {
        try {
            return io::system_from_json(trace["final_model"]);
        } catch (const Error& e) {
            throw Error(ErrorCode::ParseError, std::string("trace.final_model.") + e.what());
        }
    }();
    const StateSpaceSystem sys = io::parse_system(system_text);
    if (!trace.value("converged", false)) {
        throw Error(ErrorCode::NotAFixedPoint, "report trace did not converge");
    }

    const std::string digest = io::sha256_digest(system_text);
    io::json doc;
    doc["report_version"] = 1;
    doc["input_digest"] = digest;
    doc["digest_matches_report"] = stored.value("input_digest", std::string()) == digest;
    const FixedPointCertificate cert = certify(sys, reduced);
    doc["certificate"] = io::to_json(cert);
    if (stored.contains("certificate") && stored["certificate"].is_object()) {
        doc["verdict_matches_report"] =
            stored["certificate"].value("verdict", std::string()) == to_string(cert.verdict);
    } else {
        doc["verdict_matches_report"] = nullptr;
    }
    try {
        doc["error_zeros"] = io::to_json(error_zeros(sys, reduced));
    } catch (const Error& e) {
        doc["error_zeros"] = nullptr;
        doc["error_zeros_error"] = e.what();
    }
    return doc;
}

}  // namespace irka_lab::report
