#include "hrmod/error.hpp"

namespace hrmod {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::NonzeroDiagonal: return "NonzeroDiagonal";
    case ErrorCode::NotCND: return "NotCND";
    case ErrorCode::NotSquare: return "NotSquare";
    case ErrorCode::SingularBlock: return "SingularBlock";
    case ErrorCode::SingularCM: return "SingularCM";
    case ErrorCode::BadKernel: return "BadKernel";
    case ErrorCode::RoundTripFailure: return "RoundTripFailure";
    case ErrorCode::BadIndexSets: return "BadIndexSets";
    case ErrorCode::UnsupportedSize: return "UnsupportedSize";
    case ErrorCode::NonPositiveArgument: return "NonPositiveArgument";
    case ErrorCode::CriterionDisagreement: return "CriterionDisagreement";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::Disconnected: return "Disconnected";
    case ErrorCode::BadRank: return "BadRank";
    case ErrorCode::KernelOrthogonalToOnes: return "KernelOrthogonalToOnes";
    case ErrorCode::BadGraph: return "BadGraph";
    case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
  }
  return "Unknown";
}

}  // namespace hrmod
