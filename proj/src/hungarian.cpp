// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The crowdmatch Authors.

#include "crowdmatch/hungarian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "crowdmatch/error.hpp"

namespace crowdmatch {

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) {
      throw Error(ErrorKind::kShapeMismatch, "ragged matrix literal");
    }
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

namespace {

double check_finite(const Matrix& cost) {
  double max_abs = 0.0;
  for (std::size_t r = 0; r < cost.rows(); ++r) {
    for (std::size_t c = 0; c < cost.cols(); ++c) {
      const double v = cost(r, c);
      if (!std::isfinite(v)) {
        std::ostringstream os;
        os << "non-finite entry at (" << r << ", " << c << ")";
        throw Error(ErrorKind::kInvalidCost, os.str());
      }
      max_abs = std::max(max_abs, std::abs(v));
    }
  }
  return max_abs;
}

// Square problem with optimal duals. reduced(i, j) >= 0 everywhere and is
// zero on every edge of every optimal assignment.
struct SquareSolution {
  std::vector<std::size_t> col_of_row;
  std::vector<double> u;
  std::vector<double> v;
};

// Shortest augmenting path Hungarian method on an n x n matrix, O(n^3).
SquareSolution solve_square(const Matrix& a) {
  const std::size_t n = a.rows();
  const double inf = std::numeric_limits<double>::infinity();
  // 1-based; index 0 is the virtual source column.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = a(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  SquareSolution sol;
  sol.col_of_row.assign(n, 0);
  for (std::size_t j = 1; j <= n; ++j) sol.col_of_row[p[j] - 1] = j - 1;
  sol.u.assign(u.begin() + 1, u.end());
  sol.v.assign(v.begin() + 1, v.end());
  return sol;
}

// Rewrites an optimal matching into the lexicographically smallest optimal
// matching over the first `priority_rows` rows. Optimal matchings are exactly
// the perfect matchings of the tight subgraph, so each row greedily takes its
// smallest tight column for which the rest can still be matched.
class LexRefiner {
 public:
  LexRefiner(const Matrix& a, const SquareSolution& sol, double tol)
      : a_(a), sol_(sol), tol_(tol), n_(a.rows()),
        col_of_row_(sol.col_of_row), row_of_col_(n_), fixed_(n_, 0),
        visited_(n_) {
    for (std::size_t r = 0; r < n_; ++r) row_of_col_[col_of_row_[r]] = r;
  }

  std::vector<std::size_t> run(std::size_t priority_rows) {
    for (std::size_t i = 0; i < priority_rows; ++i) {
      for (std::size_t j = 0; j < n_; ++j) {
        if (fixed_[j] || !tight(i, j)) continue;
        if (col_of_row_[i] == j || reroute(i, j)) {
          fixed_[j] = 1;
          break;
        }
      }
    }
    return col_of_row_;
  }

 private:
  bool tight(std::size_t r, std::size_t c) const {
    return a_(r, c) - sol_.u[r] - sol_.v[c] <= tol_;
  }

  // Gives column `target` to row `i` by moving its current owner along an
  // alternating path of tight edges that ends at the column `i` releases.
  bool reroute(std::size_t i, std::size_t target) {
    const std::size_t released = col_of_row_[i];
    std::fill(visited_.begin(), visited_.end(), 0);
    path_.clear();
    if (!search(row_of_col_[target], target, released)) return false;
    // path_ holds (row, new column) from the end of the path back to its start.
    for (const auto& [row, col] : path_) {
      col_of_row_[row] = col;
      row_of_col_[col] = row;
    }
    col_of_row_[i] = target;
    row_of_col_[target] = i;
    return true;
  }

  bool search(std::size_t row, std::size_t banned, std::size_t released) {
    for (std::size_t c = 0; c < n_; ++c) {
      if (c == banned || fixed_[c] || visited_[c] || !tight(row, c)) continue;
      visited_[c] = 1;
      if (c == released || search(row_of_col_[c], banned, released)) {
        path_.emplace_back(row, c);
        return true;
      }
    }
    return false;
  }

  const Matrix& a_;
  const SquareSolution& sol_;
  double tol_;
  std::size_t n_;
  std::vector<std::size_t> col_of_row_;
  std::vector<std::size_t> row_of_col_;
  std::vector<char> fixed_;
  std::vector<char> visited_;
  std::vector<std::pair<std::size_t, std::size_t>> path_;
};

}  // namespace

std::vector<MatchPair> hungarian_solve(const Matrix& cost) {
  const double max_abs = check_finite(cost);
  const std::size_t rows = cost.rows();
  const std::size_t cols = cost.cols();
  if (rows == 0 || cols == 0) return {};

  const std::size_t n = std::max(rows, cols);
  // Surplus rows cost nothing; surplus columns carry one shared finite
  // penalty. Every perfect matching uses the same number of padded cells,
  // so neither choice changes which real assignment is optimal.
  const double pad = rows > cols ? max_abs * static_cast<double>(rows) + 1.0 : 0.0;
  Matrix square(n, n, pad);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) square(r, c) = cost(r, c);
  }

  const SquareSolution sol = solve_square(square);
  const double tol = 64.0 * std::numeric_limits<double>::epsilon() *
                     std::max(1.0, max_abs + pad) * static_cast<double>(n);
  const std::vector<std::size_t> col_of_row =
      LexRefiner(square, sol, tol).run(rows);

  std::vector<MatchPair> out;
  out.reserve(std::min(rows, cols));
  for (std::size_t r = 0; r < rows; ++r) {
    if (col_of_row[r] < cols) out.push_back({r, col_of_row[r]});
  }
  return out;
}

std::vector<MatchPair> hungarian_solve(const CostMatrix& cost) {
  return hungarian_solve(cost.totals());
}

namespace {

struct BruteForce {
  const Matrix& cost;
  std::vector<std::size_t> current;
  std::vector<std::size_t> best;
  std::vector<char> taken;
  double best_total = std::numeric_limits<double>::infinity();

  void visit(std::size_t row, double partial) {
    if (row == cost.rows()) {
      if (partial < best_total) {
        best_total = partial;
        best = current;
      }
      return;
    }
    for (std::size_t c = 0; c < cost.cols(); ++c) {
      if (taken[c]) continue;
      taken[c] = 1;
      current[row] = c;
      visit(row + 1, partial + cost(row, c));
      taken[c] = 0;
    }
  }
};

}  // namespace

std::vector<MatchPair> brute_force_assign(const Matrix& cost) {
  check_finite(cost);
  if (cost.rows() > kBruteForceMaxRows) {
    std::ostringstream os;
    os << cost.rows() << " rows exceed the enumeration bound of "
       << kBruteForceMaxRows;
    throw Error(ErrorKind::kOracleSize, os.str());
  }
  if (cost.rows() > cost.cols()) {
    throw Error(ErrorKind::kShapeMismatch, "brute force needs rows <= cols");
  }
  if (cost.rows() == 0) return {};
  BruteForce bf{cost, std::vector<std::size_t>(cost.rows()), {},
                std::vector<char>(cost.cols(), 0)};
  bf.visit(0, 0.0);
  std::vector<MatchPair> out;
  for (std::size_t r = 0; r < cost.rows(); ++r) out.push_back({r, bf.best[r]});
  return out;
}

double assignment_total(const Matrix& cost, std::span<const MatchPair> pairs) {
  double total = 0.0;
  for (const auto& p : pairs) total += cost(p.row, p.col);
  return total;
}

}  // namespace crowdmatch
