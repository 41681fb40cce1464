#pragma once

#include "subsym/model.hpp"

#include <span>
#include <vector>

namespace subsym {

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit };

std::string_view to_string(LpStatus status);

struct LpOptions {
  double feas_tol = 1e-7;
  double opt_tol = 1e-7;
  double pivot_tol = 1e-9;
  /// Consecutive degenerate pivots before switching to Bland's rule.
  int bland_after = 100;
  long iteration_limit = 100000;
};

struct Interval {
  double lower = 0;
  double upper = 0;
};

struct LpResult {
  LpStatus status = LpStatus::infeasible;
  double objective = 0;
  std::vector<double> values;  // indexed by VarId
  /// Row multipliers in the program's own sense: for maximize, the
  /// Lagrangian bound with these multipliers is an upper bound.
  std::vector<double> duals;
  long iterations = 0;
};

struct ExactInterval {
  Rational lower;
  Rational upper;
};

struct ExactLpResult {
  LpStatus status = LpStatus::infeasible;
  Rational objective;
  Assignment values;
};

/// LP relaxation of `program` with binaries relaxed to [0,1]. `bounds`, when
/// non-empty, replaces every variable's bounds (one entry per variable).
LpResult solve_lp(const MixedBinaryProgram& program, std::span<const Interval> bounds = {},
                  const LpOptions& options = {});

/// Same relaxation in exact rational arithmetic (tolerances are zero).
ExactLpResult solve_lp_exact(const MixedBinaryProgram& program,
                             std::span<const ExactInterval> bounds = {},
                             const LpOptions& options = {});

}  // namespace subsym
