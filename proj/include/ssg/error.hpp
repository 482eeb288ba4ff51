#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ssg {

enum class ErrorKind {
    // input / validation
    ParseError,
    DanglingVertexRef,
    DuplicateId,
    SourceVertex,
    UnknownVertex,
    UnknownEdge,
    NotComposable,
    AxiomA1Violation,
    AxiomA2Violation,
    AxiomA3Violation,
    CodomainMismatch,
    MissingTransition,
    IdClash,
    DomainMismatch,
    InvalidMatrices,
    NonComposableWord,
    UnknownLetter,
    NotIsotropy,
    EPAxiomViolation,
    ConstancyViolated,
    RowSumViolation,
    MissingContext,
    NotIsotropyGenerator,
    NotNormalized,
    // computation
    ClosureCapExceeded,
    NotContractingWithinCap,
    NotIrreducible,
    NoConvergence,
    DiscreteLogNotFound,
    BetaAtOrBelowCritical,
    NotStronglyConnected,
    SingularSystem,
    BelowCriticalRefused,
    NoSeparationDepthFound,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// True for errors raised by caps, convergence or temperature limits rather
/// than by malformed input.
bool is_computation_error(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string& detail);

    ErrorKind kind() const noexcept { return kind_; }
    const std::string& detail() const noexcept { return detail_; }

  private:
    ErrorKind kind_;
    std::string detail_;
};

} // namespace ssg
