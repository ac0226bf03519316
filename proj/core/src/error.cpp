#include "qbayes/error.hpp"

namespace qbayes {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NotPsd: return "NotPsd";
    case ErrorKind::SingularOperator: return "SingularOperator";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NotResolution: return "NotResolution";
    case ErrorKind::SingularGram: return "SingularGram";
    case ErrorKind::DegenerateSpan: return "DegenerateSpan";
    case ErrorKind::NotAState: return "NotAState";
    case ErrorKind::NotUnitary: return "NotUnitary";
    case ErrorKind::NotCp: return "NotCp";
    case ErrorKind::NotTp: return "NotTp";
    case ErrorKind::NotNormalized: return "NotNormalized";
    case ErrorKind::RankDeficientState: return "RankDeficientState";
    case ErrorKind::InconsistentRefinement: return "InconsistentRefinement";
    case ErrorKind::ZeroProbabilityData: return "ZeroProbabilityData";
    case ErrorKind::ZeroLikelihoodEverywhere: return "ZeroLikelihoodEverywhere";
    case ErrorKind::DimensionBudgetExceeded: return "DimensionBudgetExceeded";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace qbayes
