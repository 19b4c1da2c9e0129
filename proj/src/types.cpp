#include "coalesce/types.hpp"

namespace coalesce {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid_argument";
    case ErrorCode::SameComponentMerge: return "same_component_merge";
    case ErrorCode::DuplicateWeights: return "duplicate_weights";
    case ErrorCode::ZeroAdmissibleRate: return "zero_admissible_rate";
    case ErrorCode::WrongKernel: return "wrong_kernel";
    case ErrorCode::TruncatedRun: return "truncated_run";
    case ErrorCode::NonIntegralResult: return "non_integral_result";
    case ErrorCode::UnsupportedSize: return "unsupported_size";
    case ErrorCode::QuadratureFailure: return "quadrature_failure";
  }
  return "unknown";
}

}  // namespace coalesce
