#include "chg/error.hpp"

namespace chg {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidShape: return "invalid-shape";
    case ErrorCode::kAsymmetry: return "asymmetry";
    case ErrorCode::kIndex: return "index";
    case ErrorCode::kInvalidParams: return "invalid-params";
    case ErrorCode::kNotPositiveDefinite: return "not-positive-definite";
    case ErrorCode::kDomainMembership: return "domain-membership";
    case ErrorCode::kSingularity: return "singularity";
    case ErrorCode::kDegenerateDirection: return "degenerate-direction";
    case ErrorCode::kInvalidCoefficients: return "invalid-coefficients";
    case ErrorCode::kStencil: return "stencil";
    case ErrorCode::kConditioning: return "conditioning";
    case ErrorCode::kProbe: return "probe";
    case ErrorCode::kFit: return "fit";
    case ErrorCode::kParse: return "parse";
  }
  return "unknown";
}

}  // namespace chg
