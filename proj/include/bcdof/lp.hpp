// SPDX-License-Identifier: Apache-2.0
//
// Exact rational simplex (Bland's rule) for: maximize c.x subject to A x <= b, x free.
#pragma once

#include "bcdof/rational.hpp"

#include <vector>

namespace bcdof::lp {

enum class Status { optimal, infeasible, unbounded };

struct Result {
  Status status = Status::infeasible;
  Rational value;             ///< objective at the optimum
  std::vector<Rational> point; ///< optimal x
};

/// `rows[i]` is the coefficient vector of constraint i; all must have length c.size().
Result maximize(const std::vector<Rational>& c, const std::vector<std::vector<Rational>>& rows,
                const std::vector<Rational>& rhs);

bool feasible(std::size_t dim, const std::vector<std::vector<Rational>>& rows,
              const std::vector<Rational>& rhs);

} // namespace bcdof::lp
