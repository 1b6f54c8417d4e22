#ifndef IRKA_LAB_ERRORS_HPP
#define IRKA_LAB_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace irka_lab {

enum class ErrorCode {
    InvalidSystem,
    InvalidArgument,
    SingularShift,
    RepeatedPoles,
    UnstableSystem,
    RankDeficientBasis,
    SingularGramian,
    UnstableMatrix,
    ResidualTooLarge,
    MirroredShiftInvalid,
    NotAFixedPoint,
    NonZipReduced,
    DegenerateError,
    ParseError,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so
/// callers (the CLI, the Python bindings) can map it without parsing text.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidSystem: return "InvalidSystem";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::SingularShift: return "SingularShift";
        case ErrorCode::RepeatedPoles: return "RepeatedPoles";
        case ErrorCode::UnstableSystem: return "UnstableSystem";
        case ErrorCode::RankDeficientBasis: return "RankDeficientBasis";
        case ErrorCode::SingularGramian: return "SingularGramian";
        case ErrorCode::UnstableMatrix: return "UnstableMatrix";
        case ErrorCode::ResidualTooLarge: return "ResidualTooLarge";
        case ErrorCode::MirroredShiftInvalid: return "MirroredShiftInvalid";
        case ErrorCode::NotAFixedPoint: return "NotAFixedPoint";
        case ErrorCode::NonZipReduced: return "NonZipReduced";
        case ErrorCode::DegenerateError: return "DegenerateError";
        case ErrorCode::ParseError: return "ParseError";
    }
    return "Unknown";
}

}  // namespace irka_lab

#endif  // IRKA_LAB_ERRORS_HPP
