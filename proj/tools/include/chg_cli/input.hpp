#pragma once

// Point and tangent text:
//
//   Z = (0.1, 0) (0.05, 0.02)
//       (0.05, 0.02) (-0.2, 0.1)
//   w = (0.3, -0.1)
//
// Z is the full p x p matrix in row-major order and must be symmetric. Items
// are `name = values` separated by ';' or by a new `name =`; a value is
// `(re, im)` or a bare real. A tangent uses `dz` (the p(p+1)/2 coordinates)
// and `dw`. Either string may instead name a file holding the same text.

#include <string>

#include "chg/curvature.hpp"
#include "chg/domain.hpp"

namespace chg::cli {

/// Throws chg::Error(kParse) on malformed text or wrong sizes. The point is
/// not checked for domain membership.
Point parse_point(const DomainParams& params, const std::string& text_or_path);
Tangent parse_tangent(const DomainParams& params, const std::string& text_or_path);

}  // namespace chg::cli
