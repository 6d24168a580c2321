#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dgmd {

/// Which reading of a paired "<= (>=)" inequality holds.
enum class Direction { le, ge, both_boundary, neither };

enum class Confirmation { holds, fails, not_checked };

inline std::string_view to_string(Direction d) {
  switch (d) {
    case Direction::le: return "le";
    case Direction::ge: return "ge";
    case Direction::both_boundary: return "both-boundary";
    case Direction::neither: return "neither";
  }
  return "?";
}

inline std::string_view to_string(Confirmation c) {
  switch (c) {
    case Confirmation::holds: return "holds";
    case Confirmation::fails: return "fails";
    case Confirmation::not_checked: return "not-checked";
  }
  return "?";
}

inline bool allows_le(Direction d) { return d == Direction::le || d == Direction::both_boundary; }
inline bool allows_ge(Direction d) { return d == Direction::ge || d == Direction::both_boundary; }

struct PointwiseViolation {
  std::string condition;
  /// The reading that is violated: "le" or "ge".
  std::string reading;
  double u = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
};

struct ConditionReport {
  std::string theorem_id;
  /// Direction of the conclusion whose hypotheses were found to hold;
  /// `neither` when no branch fired.
  Direction direction = Direction::neither;
  std::vector<PointwiseViolation> pointwise_violations;
  std::map<std::string, double> integral_terms;
  /// Verdict of each individual hypothesis, by name.
  std::map<std::string, std::string> hypotheses;
  std::string branch;
  std::string implied_conclusion;
  Confirmation conclusion_verified = Confirmation::not_checked;
  std::map<std::string, double> context;

  bool hypotheses_hold() const { return direction != Direction::neither; }
};

struct GridComparison {
  Direction direction = Direction::neither;
  std::vector<PointwiseViolation> violations;
  double max_abs_diff = 0.0;
};

/// Evaluation grid on [0, 1/2]: 1001 points, the left end moved to `left`
/// because dqdf may be unbounded at 0 and 1.
inline std::vector<double> half_grid(std::size_t points = 1001, double left = 1e-6) {
  std::vector<double> grid(points);
  const double n = static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) grid[i] = 0.5 * static_cast<double>(i) / n;
  grid.front() = left;
  return grid;
}

/// Compares lhs(u) against rhs(u) on the grid, relative tolerance `tol`.
inline GridComparison compare_on_grid(const std::string& name, const std::vector<double>& grid,
                                      const std::function<double(double)>& lhs,
                                      const std::function<double(double)>& rhs,
                                      double tol = 1e-9) {
  GridComparison out;
  bool le_ok = true;
  bool ge_ok = true;
  for (double u : grid) {
    const double l = lhs(u);
    const double r = rhs(u);
    const double slack = tol * std::max({1.0, std::abs(l), std::abs(r)});
    const double diff = l - r;
    out.max_abs_diff = std::max(out.max_abs_diff, std::abs(diff));
    if (!(diff <= slack)) {
      le_ok = false;
      out.violations.push_back(PointwiseViolation{name, "le", u, l, r});
    }
    if (!(diff >= -slack)) {
      ge_ok = false;
      out.violations.push_back(PointwiseViolation{name, "ge", u, l, r});
    }
  }
  if (le_ok && ge_ok) {
    out.direction = Direction::both_boundary;
  } else if (le_ok) {
    out.direction = Direction::le;
  } else if (ge_ok) {
    out.direction = Direction::ge;
  }
  return out;
}

}  // namespace dgmd
