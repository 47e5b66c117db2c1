#pragma once

#include "qdetect/types.hpp"

namespace qdetect {

enum class LpStatus { optimal, infeasible, unbounded };

struct LpResult {
  LpStatus status = LpStatus::infeasible;
  RealVector x;            // optimal basic feasible solution when optimal
  double objective = 0.0;  // c'x at that point
};

/// Minimize c'x subject to A x = b, x >= 0. Dense two-phase simplex
/// with Bland's rule, so it terminates on degenerate systems. Sized for
/// the small systems measurement recovery produces.
LpResult simplex_lp(const RealVector& c, const RealMatrix& a,
                    const RealVector& b);

}  // namespace qdetect
