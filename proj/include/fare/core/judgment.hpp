#pragma once

#include "fare/core/types.hpp"

namespace fare {

/// Exchanges response_a and response_b. Throws DomainError for non-pairwise inputs.
EvalInput swap_pairwise(const EvalInput& input);

/// A <-> B, so a judgment issued on a swapped input refers to the same
/// underlying response. Throws DomainError for non-pair judgments.
Judgment map_swapped_judgment(const Judgment& judgment);

struct GradeOptions {
  /// Ratings within this distance of gold count as correct. 0 is exact match.
  int rating_tolerance = 0;
};

/// True when `pred` agrees with `gold`. Throws DomainError on variant mismatch.
bool grade_judgment(const Judgment& pred, const Judgment& gold, const GradeOptions& options = {});

}  // namespace fare
