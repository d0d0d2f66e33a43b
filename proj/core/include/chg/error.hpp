#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace chg {

enum class ErrorCode {
  kInvalidShape,
  kAsymmetry,
  kIndex,
  kInvalidParams,
  kNotPositiveDefinite,
  kDomainMembership,
  kSingularity,
  kDegenerateDirection,
  kInvalidCoefficients,
  kStencil,
  kConditioning,
  kProbe,
  kFit,
  kParse,
};

std::string_view to_string(ErrorCode code);

// All library failures are reported through this type; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace chg
