// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The crowdmatch Authors.

#pragma once

#include <compare>
#include <cstddef>
#include <span>
#include <vector>

#include "crowdmatch/costs.hpp"
#include "crowdmatch/matrix.hpp"

namespace crowdmatch {

struct MatchPair {
  std::size_t row = 0;
  std::size_t col = 0;
  friend auto operator<=>(const MatchPair&, const MatchPair&) = default;
};

inline constexpr std::size_t kBruteForceMaxRows = 8;

/// Minimum-cost assignment of rows to distinct columns.
///
/// When rows <= cols every row is matched; otherwise every column is matched
/// and the surplus rows are left out. Among equal-cost optima the result with
/// the lexicographically smallest column sequence (in row order) is returned.
/// Pairs are sorted by row. Throws kInvalidCost on non-finite entries.
std::vector<MatchPair> hungarian_solve(const Matrix& cost);
std::vector<MatchPair> hungarian_solve(const CostMatrix& cost);

/// Exhaustive search over all injections of rows into columns. Test oracle;
/// rows must not exceed kBruteForceMaxRows or the column count.
std::vector<MatchPair> brute_force_assign(const Matrix& cost);

double assignment_total(const Matrix& cost, std::span<const MatchPair> pairs);

}  // namespace crowdmatch
