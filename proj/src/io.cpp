#include "irka_lab/io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <openssl/evp.h>

namespace irka_lab::io {

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& what) {
    throw Error(ErrorCode::ParseError, field + ": " + what);
}

double number_at(const json& v, const std::string& field) {
    if (!v.is_number()) fail(field, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail(field, "non-finite value");
    return x;
}

VectorXd vector_at(const json& doc, const std::string& field) {
    if (!doc.contains(field)) fail(field, "missing");
    const json& v = doc.at(field);
    if (!v.is_array()) fail(field, "expected an array of numbers");
    VectorXd out(static_cast<Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) {
        out(static_cast<Index>(i)) = number_at(v[i], field + "[" + std::to_string(i) + "]");
    }
    return out;
}

Complex complex_at(const json& v, const std::string& field) {
    if (v.is_number()) return {number_at(v, field), 0.0};
    if (v.is_array() && v.size() == 2) {
        return {number_at(v[0], field + "[0]"), number_at(v[1], field + "[1]")};
    }
    fail(field, "expected a number or an [re, im] pair");
}

std::vector<Complex> complex_list_at(const json& doc, const std::string& field) {
    if (!doc.contains(field)) fail(field, "missing");
    const json& v = doc.at(field);
    if (!v.is_array()) fail(field, "expected an array");
    std::vector<Complex> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        out.push_back(complex_at(v[i], field + "[" + std::to_string(i) + "]"));
    }
    return out;
}

json complex_list(const std::vector<Complex>& zs) {
    json out = json::array();
    for (const auto& z : zs) out.push_back(complex_to_json(z));
    return out;
}

json vector_to_json(const VectorXd& v) {
    json out = json::array();
    for (Index i = 0; i < v.size(); ++i) out.push_back(real_to_json(v(i)));
    return out;
}

json hermite_to_json(const std::vector<HermiteResidual>& residuals) {
    json out = json::array();
    for (const auto& r : residuals) {
        out.push_back({{"shift", complex_to_json(r.shift)},
                       {"value_residual", real_to_json(r.value_residual)},
                       {"derivative_residual", real_to_json(r.derivative_residual)}});
    }
    return out;
}

}  // namespace

StateSpaceSystem system_from_json(const json& doc) {
    if (!doc.is_object()) fail("document", "expected a JSON object");
    if (doc.contains("poles") || doc.contains("residues")) {
        PoleResidueForm form;
        form.poles = complex_list_at(doc, "poles");
        form.residues = complex_list_at(doc, "residues");
        if (form.poles.empty()) fail("poles", "empty");
        if (form.poles.size() != form.residues.size()) {
            fail("residues", "length " + std::to_string(form.residues.size()) +
                                 " does not match poles length " + std::to_string(form.poles.size()));
        }
        try {
            return realize(form);
        } catch (const Error& e) {
            fail("poles", e.what());
        }
    }

    if (!doc.contains("A")) fail("A", "missing");
    const json& a = doc.at("A");
    if (!a.is_array() || a.empty()) fail("A", "expected a non-empty array of rows");
    const auto rows = static_cast<Index>(a.size());
    if (doc.contains("n")) {
        const json& n = doc.at("n");
        if (!n.is_number_integer() || n.get<long long>() < 1) fail("n", "expected a positive integer");
        if (n.get<long long>() != rows) {
            fail("A", "has " + std::to_string(rows) + " rows but n = " + std::to_string(n.get<long long>()));
        }
    }
    MatrixXd m(rows, rows);
    for (Index i = 0; i < rows; ++i) {
        const std::string row_field = "A[" + std::to_string(i) + "]";
        const json& row = a[static_cast<std::size_t>(i)];
        if (!row.is_array()) fail(row_field, "expected an array");
        if (static_cast<Index>(row.size()) != rows) {
            fail(row_field, "has " + std::to_string(row.size()) + " entries, expected " + std::to_string(rows));
        }
        for (Index j = 0; j < rows; ++j) {
            m(i, j) = number_at(row[static_cast<std::size_t>(j)], row_field + "[" + std::to_string(j) + "]");
        }
    }
    VectorXd b = vector_at(doc, "b");
    VectorXd c = vector_at(doc, "c");
    if (b.size() != rows) fail("b", "length " + std::to_string(b.size()) + ", expected " + std::to_string(rows));
    if (c.size() != rows) fail("c", "length " + std::to_string(c.size()) + ", expected " + std::to_string(rows));
    return StateSpaceSystem(std::move(m), std::move(b), std::move(c));
}

StateSpaceSystem parse_system(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        // nlohmann reports "at line L, column C" in what()
        throw Error(ErrorCode::ParseError, std::string("document: ") + e.what());
    }
    return system_from_json(doc);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + path);
    out << text;
}

StateSpaceSystem read_system_file(const std::string& path) { return parse_system(read_file(path)); }

std::string sha256_digest(std::string_view bytes) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) {
        throw Error(ErrorCode::InvalidArgument, "sha256 failed");
    }
    std::ostringstream hex;
    hex << "sha256:" << std::hex << std::setfill('0');
    for (unsigned int i = 0; i < len; ++i) hex << std::setw(2) << static_cast<int>(md[i]);
    return hex.str();
}

json real_to_json(double x) {
    if (!std::isfinite(x)) return nullptr;
    return x;
}

json complex_to_json(Complex z) {
    // +0.0 for a signed zero keeps output independent of rounding paths
    const double re = z.real() == 0.0 ? 0.0 : z.real();
    const double im = z.imag() == 0.0 ? 0.0 : z.imag();
    return json::array({real_to_json(re), real_to_json(im)});
}

json matrix_to_json(const MatrixXd& m) {
    json out = json::array();
    for (Index i = 0; i < m.rows(); ++i) out.push_back(vector_to_json(m.row(i).transpose()));
    return out;
}

json system_to_json(const StateSpaceSystem& sys) {
    return {{"n", sys.order()},
            {"A", matrix_to_json(sys.a())},
            {"b", vector_to_json(sys.b())},
            {"c", vector_to_json(sys.c())}};
}

json to_json(const IrkaConfig& cfg) {
    return {{"r", cfg.r},
            {"tol", cfg.tol},
            {"max_sweeps", cfg.max_sweeps},
            {"init", std::string(to_string(cfg.init))},
            {"perturb_eps", cfg.perturb_eps},
            {"seed", cfg.seed}};
}

json to_json(const IterationTrace& trace) {
    json sweeps = json::array();
    for (const auto& s : trace.sweeps) {
        sweeps.push_back({{"shifts_in", complex_list(s.shifts_in.values())},
                          {"reduced_poles", complex_list(s.reduced_poles)},
                          {"shift_change", real_to_json(s.shift_change)}});
    }
    json out = {{"trace_version", 1},
                {"converged", trace.converged},
                {"sweep_count", trace.sweeps.size()},
                {"symmetric_pathway", trace.symmetric_pathway},
                {"perturbations", trace.perturbations},
                {"final_shifts", complex_list(trace.final_shifts.values())},
                {"sweeps", sweeps},
                {"optimality_residuals", hermite_to_json(trace.optimality_residuals)}};
    out["final_model"] = trace.final_model ? system_to_json(*trace.final_model) : json(nullptr);
    return out;
}

json to_json(const H2ErrorReport& report) {
    json out = {{"error_norm_gramian", real_to_json(report.error_norm_gramian)},
                {"relative_h2_error", real_to_json(report.relative_h2_error)},
                {"cost_J", real_to_json(report.cost_J)},
                {"full_norm", real_to_json(report.full_norm)},
                {"pole_collision", report.pole_collision},
                {"relative_is_absolute", report.relative_is_absolute}};
    out["error_norm_pole_residue"] =
        report.error_norm_pole_residue ? real_to_json(*report.error_norm_pole_residue) : json(nullptr);
    out["route_discrepancy"] =
        report.route_discrepancy ? real_to_json(*report.route_discrepancy) : json(nullptr);
    return out;
}

json to_json(const FixedPointCertificate& cert) {
    const auto& m = cert.matrices;
    json matrices = {{"reduced_poles", vector_to_json(m.reduced_poles)},
                     {"reduced_residues", vector_to_json(m.reduced_residues)},
                     {"S11", matrix_to_json(m.s11)},
                     {"S12", matrix_to_json(m.s12)},
                     {"S22", matrix_to_json(m.s22)},
                     {"R", matrix_to_json(m.r_mat)},
                     {"E", matrix_to_json(m.e_mat)},
                     {"K", matrix_to_json(m.k_mat)},
                     {"S_c", matrix_to_json(m.s_c)},
                     {"M", matrix_to_json(m.m_mat)},
                     {"Phi", matrix_to_json(m.phi)}};
    json eigs = json::array();
    for (double mu : cert.jacobian_eigs) eigs.push_back(real_to_json(mu));
    return {{"matrices", matrices},
            {"jacobian", matrix_to_json(cert.jacobian)},
            {"jacobian_eigs", eigs},
            {"jacobian_eig_max_imag", real_to_json(cert.jacobian_eig_max_imag)},
            {"spectral_radius", real_to_json(cert.spectral_radius)},
            {"e_positive", cert.e_positive},
            {"s_tilde_positive", cert.s_tilde_positive},
            {"neg_phi_positive", cert.neg_phi_positive},
            {"fd_jacobian", matrix_to_json(cert.fd_jacobian)},
            {"fd_jacobian_maxdiff", real_to_json(cert.fd_jacobian_maxdiff)},
            {"fd_shift_map_jacobian", matrix_to_json(cert.fd_shift_map_jacobian)},
            {"fd_eig_maxdiff", real_to_json(cert.fd_eig_maxdiff)},
            {"fd_mismatch", cert.fd_mismatch},
            {"verdict", std::string(to_string(cert.verdict))},
            {"warnings", cert.warnings}};
}

json to_json(const ErrorZeroReport& report) {
    return {{"zeros", complex_list(report.zeros)},
            {"rhp_count", report.rhp_count},
            {"lhp_count", report.lhp_count},
            {"boundary_count", report.boundary_count},
            {"interpolation_matched", report.interpolation_matched},
            {"matched_multiplicity", report.matched_multiplicity},
            {"strict_matched", report.strict_matched},
            {"cluster_spread", report.cluster_spread},
            {"mirrored_poles", complex_list(report.mirrored_poles)},
            {"min_error_on_grid", real_to_json(report.min_error_on_grid)},
            {"grid_argmin", real_to_json(report.grid_argmin)}};
}

std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

}  // namespace irka_lab::io
