#pragma once

#include <stdexcept>
#include <string>

namespace orbita {

enum class Errc {
    DivisionByZero,
    DenominatorVanishes,
    UnboundVariable,
    WindowMismatch,
    IndexOutOfWindow,
    PrincipalMinorVanishes,
    WindowNotNested,
    NotGenericPoint,
    DiagonalMismatch,
    NotSubordinate,
    NotExact,
    Parse,
    Io,
    InvalidArgument,
};

inline const char* errc_name(Errc c) {
    switch (c) {
    case Errc::DivisionByZero: return "DivisionByZero";
    case Errc::DenominatorVanishes: return "DenominatorVanishes";
    case Errc::UnboundVariable: return "UnboundVariable";
    case Errc::WindowMismatch: return "WindowMismatch";
    case Errc::IndexOutOfWindow: return "IndexOutOfWindow";
    case Errc::PrincipalMinorVanishes: return "PrincipalMinorVanishes";
    case Errc::WindowNotNested: return "WindowNotNested";
    case Errc::NotGenericPoint: return "NotGenericPoint";
    case Errc::DiagonalMismatch: return "DiagonalMismatch";
    case Errc::NotSubordinate: return "NotSubordinate";
    case Errc::NotExact: return "NotExact";
    case Errc::Parse: return "ParseError";
    case Errc::Io: return "IoError";
    case Errc::InvalidArgument: return "InvalidArgument";
    }
    return "Error";
}

/// Every failure raised by the library. `stage` carries the failing
/// elimination step for PrincipalMinorVanishes and is 0 otherwise.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& detail, int stage = 0)
        : std::runtime_error(std::string(errc_name(code)) + (detail.empty() ? "" : " " + detail)),
          code_(code), detail_(detail), stage_(stage) {}

    Errc code() const noexcept { return code_; }
    const std::string& detail() const noexcept { return detail_; }
    int stage() const noexcept { return stage_; }

    // Input problems (bad files, bad indices) as opposed to a mathematical
    // precondition failing on well-formed input.
    bool is_input_error() const noexcept {
        switch (code_) {
        case Errc::Parse:
        case Errc::Io:
        case Errc::InvalidArgument:
        case Errc::UnboundVariable:
        case Errc::WindowMismatch:
        case Errc::IndexOutOfWindow:
            return true;
        default:
            return false;
        }
    }

private:
    Errc code_;
    std::string detail_;
    int stage_;
};

}  // namespace orbita
