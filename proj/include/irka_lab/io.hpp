#ifndef IRKA_LAB_IO_HPP
#define IRKA_LAB_IO_HPP

#include <string>
#include <string_view>

#include <json.hpp>

#include "irka_lab/error_analysis.hpp"
#include "irka_lab/fixpoint.hpp"
#include "irka_lab/h2.hpp"
#include "irka_lab/irka.hpp"

namespace irka_lab::io {

using nlohmann::json;

/// Accepts {"n", "A", "b", "c"} or {"poles", "residues"}; pole and residue
/// entries are numbers or [re, im] pairs. Throws ParseError naming the field.
StateSpaceSystem system_from_json(const json& doc);
StateSpaceSystem parse_system(std::string_view text);
StateSpaceSystem read_system_file(const std::string& path);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view text);

/// "sha256:<hex>" of the raw bytes.
std::string sha256_digest(std::string_view bytes);

json system_to_json(const StateSpaceSystem& sys);

/// Complex values serialize as [re, im]; non-finite reals as null.
json complex_to_json(Complex z);
json real_to_json(double x);
json matrix_to_json(const MatrixXd& m);

json to_json(const IrkaConfig& cfg);
json to_json(const IterationTrace& trace);
json to_json(const H2ErrorReport& report);
json to_json(const FixedPointCertificate& cert);
json to_json(const ErrorZeroReport& report);

/// Pretty-printed with two-space indent and a trailing newline.
std::string dump(const json& doc);

}  // namespace irka_lab::io

#endif  // IRKA_LAB_IO_HPP
