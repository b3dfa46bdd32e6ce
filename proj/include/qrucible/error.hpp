#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qrucible {

enum class ErrorKind {
    DivisionByZero,
    ExponentNotRepresentable,
    ContextMismatch,
    NotInvertible,
    InsufficientTruncation,
    NonPositiveBaseExponent,
    NonSummable,
    ZeroDenominator,
    DivergentSpec,
    WindowOverflow,
    BalanceViolated,
    PoleHit,
    SyntaxError,
    UnknownSymbol,
    TypeError,
    BoundExceeded,
    IoError,
};

constexpr std::string_view to_string(ErrorKind k) {
    switch (k) {
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::ExponentNotRepresentable: return "ExponentNotRepresentable";
    case ErrorKind::ContextMismatch: return "ContextMismatch";
    case ErrorKind::NotInvertible: return "NotInvertible";
    case ErrorKind::InsufficientTruncation: return "InsufficientTruncation";
    case ErrorKind::NonPositiveBaseExponent: return "NonPositiveBaseExponent";
    case ErrorKind::NonSummable: return "NonSummable";
    case ErrorKind::ZeroDenominator: return "ZeroDenominator";
    case ErrorKind::DivergentSpec: return "DivergentSpec";
    case ErrorKind::WindowOverflow: return "WindowOverflow";
    case ErrorKind::BalanceViolated: return "BalanceViolated";
    case ErrorKind::PoleHit: return "PoleHit";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::UnknownSymbol: return "UnknownSymbol";
    case ErrorKind::TypeError: return "TypeError";
    case ErrorKind::BoundExceeded: return "BoundExceeded";
    case ErrorKind::IoError: return "IoError";
    }
    return "Unknown";
}

/// Every failure in the library is reported through this type; `kind()`
/// identifies the contract that was violated.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind), detail_(what) {}

    ErrorKind kind() const noexcept { return kind_; }
    const std::string& detail() const noexcept { return detail_; }
    bool located() const noexcept { return located_; }

    /// Same error annotated with a source location (applied once, innermost wins).
    Error at(const std::string& where) const {
        if (located_) return *this;
        Error e(kind_, detail_ + " (at " + where + ")");
        e.located_ = true;
        return e;
    }

private:
    ErrorKind kind_;
    std::string detail_;
    bool located_ = false;
};

[[noreturn]] inline void raise(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

} // namespace qrucible
