#pragma once

#include "hmmsprt/linalg.hpp"

namespace hmmsprt {

// Exact feasibility of { x >= 0 : A x = b } via phase-1 simplex with
// Bland's rule (terminating, no cycling).
bool lp_feasible(const RatMatrix& a, const RatVector& b);

}  // namespace hmmsprt
