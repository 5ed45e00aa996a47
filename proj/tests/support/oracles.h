#pragma once

#include <cstddef>
#include <span>

#include "attrinfer/least_squares.h"
#include "attrinfer/policy.h"

namespace attrinfer::testing {

// Independent reference implementations used only by tests.

struct OracleMeaning {
  EntitlementSet granted;
  size_t unknown = 0;
};

// Enumerates every (user, resource, action) triple and evaluates the rule with
// a separate three-valued evaluator.
OracleMeaning BruteForceRuleMeaning(const Rule& rule, const ObjectModel& om);

// Ridge least squares via the SVD of the augmented system
// [1 X; 0 sqrt(ridge) I] [b0; beta] = [y; 0].
LinearFit PseudoInverseFit(const BinaryMatrix& x, std::span<const double> y,
                           double ridge = kRidgeDamping);

// Non-Null, non-Missing, non-id cells counted straight from the schema.
size_t CountEligibleCells(const ObjectModel& om);

}  // namespace attrinfer::testing
