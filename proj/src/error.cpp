#include "ssg/error.hpp"

namespace ssg {

std::string_view to_string(ErrorKind kind) noexcept
{
    switch (kind) {
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::DanglingVertexRef: return "DanglingVertexRef";
    case ErrorKind::DuplicateId: return "DuplicateId";
    case ErrorKind::SourceVertex: return "SourceVertex";
    case ErrorKind::UnknownVertex: return "UnknownVertex";
    case ErrorKind::UnknownEdge: return "UnknownEdge";
    case ErrorKind::NotComposable: return "NotComposable";
    case ErrorKind::AxiomA1Violation: return "AxiomA1Violation";
    case ErrorKind::AxiomA2Violation: return "AxiomA2Violation";
    case ErrorKind::AxiomA3Violation: return "AxiomA3Violation";
    case ErrorKind::CodomainMismatch: return "CodomainMismatch";
    case ErrorKind::MissingTransition: return "MissingTransition";
    case ErrorKind::IdClash: return "IdClash";
    case ErrorKind::DomainMismatch: return "DomainMismatch";
    case ErrorKind::InvalidMatrices: return "InvalidMatrices";
    case ErrorKind::NonComposableWord: return "NonComposableWord";
    case ErrorKind::UnknownLetter: return "UnknownLetter";
    case ErrorKind::NotIsotropy: return "NotIsotropy";
    case ErrorKind::EPAxiomViolation: return "EPAxiomViolation";
    case ErrorKind::ConstancyViolated: return "ConstancyViolated";
    case ErrorKind::RowSumViolation: return "RowSumViolation";
    case ErrorKind::MissingContext: return "MissingContext";
    case ErrorKind::NotIsotropyGenerator: return "NotIsotropyGenerator";
    case ErrorKind::NotNormalized: return "NotNormalized";
    case ErrorKind::ClosureCapExceeded: return "ClosureCapExceeded";
    case ErrorKind::NotContractingWithinCap: return "NotContractingWithinCap";
    case ErrorKind::NotIrreducible: return "NotIrreducible";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::DiscreteLogNotFound: return "DiscreteLogNotFound";
    case ErrorKind::BetaAtOrBelowCritical: return "BetaAtOrBelowCritical";
    case ErrorKind::NotStronglyConnected: return "NotStronglyConnected";
    case ErrorKind::SingularSystem: return "SingularSystem";
    case ErrorKind::BelowCriticalRefused: return "BelowCriticalRefused";
    case ErrorKind::NoSeparationDepthFound: return "NoSeparationDepthFound";
    }
    return "Unknown";
}

bool is_computation_error(ErrorKind kind) noexcept
{
    switch (kind) {
    case ErrorKind::ClosureCapExceeded:
    case ErrorKind::NotContractingWithinCap:
    case ErrorKind::NotIrreducible:
    case ErrorKind::NoConvergence:
    case ErrorKind::DiscreteLogNotFound:
    case ErrorKind::BetaAtOrBelowCritical:
    case ErrorKind::NotStronglyConnected:
    case ErrorKind::SingularSystem:
    case ErrorKind::BelowCriticalRefused:
    case ErrorKind::NoSeparationDepthFound:
        return true;
    default:
        return false;
    }
}

Error::Error(ErrorKind kind, const std::string& detail)
    : std::runtime_error(std::string(to_string(kind)) + ": " + detail), kind_(kind), detail_(detail)
{
}

} // namespace ssg
