#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace symkern {

/// Half-open byte range [start, end) into some input text.
struct SourceSpan {
    std::size_t start = 0;
    std::size_t end = 0;
};

enum class ErrorKind {
    InvalidName,
    DomainError,
    NotGround,
    UnsupportedNode,
    SyntaxError,
    UnknownFunction,
    NotPolynomial,
    UnsolvableResidual,
    NonDifferentiable,
    UnsupportedIntegrand,
    UnsupportedSeries,
    LimitUndetermined,
    ShapeError,
    SingularMatrix,
    DependentColumns,
    ArityError,
    UnknownCommand,
    IoError,
};

inline const char* error_kind_name(ErrorKind k) {
    switch (k) {
        case ErrorKind::InvalidName: return "InvalidName";
        case ErrorKind::DomainError: return "DomainError";
        case ErrorKind::NotGround: return "NotGround";
        case ErrorKind::UnsupportedNode: return "UnsupportedNode";
        case ErrorKind::SyntaxError: return "SyntaxError";
        case ErrorKind::UnknownFunction: return "UnknownFunction";
        case ErrorKind::NotPolynomial: return "NotPolynomialIn";
        case ErrorKind::UnsolvableResidual: return "UnsolvableResidual";
        case ErrorKind::NonDifferentiable: return "NonDifferentiable";
        case ErrorKind::UnsupportedIntegrand: return "UnsupportedIntegrand";
        case ErrorKind::UnsupportedSeries: return "UnsupportedSeries";
        case ErrorKind::LimitUndetermined: return "LimitUndetermined";
        case ErrorKind::ShapeError: return "ShapeError";
        case ErrorKind::SingularMatrix: return "SingularMatrix";
        case ErrorKind::DependentColumns: return "StructurallyDependentColumns";
        case ErrorKind::ArityError: return "ArityError";
        case ErrorKind::UnknownCommand: return "UnknownCommand";
        case ErrorKind::IoError: return "IoError";
    }
    return "Error";
}

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(error_kind_name(kind)) + ": " + message), kind_(kind) {}
    Error(ErrorKind kind, const std::string& message, SourceSpan span)
        : std::runtime_error(std::string(error_kind_name(kind)) + ": " + message), kind_(kind), span_(span) {}

    ErrorKind kind() const { return kind_; }
    const std::optional<SourceSpan>& span() const { return span_; }

  private:
    ErrorKind kind_;
    std::optional<SourceSpan> span_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

}  // namespace symkern
