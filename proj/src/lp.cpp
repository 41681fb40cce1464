#include "subsym/lp.hpp"

#include "simplex.hpp"

#include <stdexcept>

namespace subsym {

std::string_view to_string(LpStatus status) {
  switch (status) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::unbounded: return "unbounded";
    case LpStatus::iteration_limit: return "iteration_limit";
  }
  return "optimal";
}

namespace {

template <class T, class Convert>
detail::DenseLp<T> build(const MixedBinaryProgram& program, Convert convert) {
  detail::DenseLp<T> lp;
  lp.num_cols = program.variables.size();
  const T sign = program.sense == Sense::maximize ? T{-1} : T{1};
  for (const auto& v : program.variables) {
    lp.lower.push_back(convert(v.lower));
    lp.upper.push_back(convert(v.upper));
    lp.cost.push_back(sign * convert(v.objective));
  }
  for (const auto& con : program.constraints) {
    std::vector<std::pair<std::size_t, T>> row;
    row.reserve(con.terms.size());
    for (const auto& t : con.terms) {
      if (t.coeff != 0) row.emplace_back(t.var.index, convert(t.coeff));
    }
    lp.rows.push_back(std::move(row));
    lp.row_lower.push_back(con.lower ? std::optional<T>(convert(*con.lower)) : std::nullopt);
    lp.row_upper.push_back(con.upper ? std::optional<T>(convert(*con.upper)) : std::nullopt);
  }
  return lp;
}

}  // namespace

LpResult solve_lp(const MixedBinaryProgram& program, std::span<const Interval> bounds,
                  const LpOptions& options) {
  auto lp = build<double>(program, [](const Rational& r) { return to_double(r); });
  if (!bounds.empty()) {
    if (bounds.size() != lp.num_cols) throw std::invalid_argument("bounds size mismatch");
    for (std::size_t j = 0; j < lp.num_cols; ++j) {
      lp.lower[j] = bounds[j].lower;
      lp.upper[j] = bounds[j].upper;
      if (lp.lower[j] > lp.upper[j] + options.feas_tol) {
        LpResult r;
        r.status = LpStatus::infeasible;
        return r;
      }
    }
  }
  detail::SimplexTolerances<double> tol{options.feas_tol, options.opt_tol, options.pivot_tol};
  detail::DenseSimplex<double> simplex(lp, tol, options.bland_after, options.iteration_limit);
  const auto sol = simplex.solve();

  LpResult result;
  result.status = sol.status;
  result.iterations = sol.iterations;
  if (sol.status != LpStatus::optimal) return result;
  const double sign = program.sense == Sense::maximize ? -1.0 : 1.0;
  result.values = sol.values;
  result.objective = sign * sol.objective;
  result.duals.reserve(sol.row_duals.size());
  for (const double y : sol.row_duals) result.duals.push_back(sign * y);
  return result;
}

ExactLpResult solve_lp_exact(const MixedBinaryProgram& program,
                             std::span<const ExactInterval> bounds, const LpOptions& options) {
  auto lp = build<Rational>(program, [](const Rational& r) { return r; });
  if (!bounds.empty()) {
    if (bounds.size() != lp.num_cols) throw std::invalid_argument("bounds size mismatch");
    for (std::size_t j = 0; j < lp.num_cols; ++j) {
      lp.lower[j] = bounds[j].lower;
      lp.upper[j] = bounds[j].upper;
      if (lp.lower[j] > lp.upper[j]) return {};
    }
  }
  detail::DenseSimplex<Rational> simplex(lp, {}, options.bland_after, options.iteration_limit);
  auto sol = simplex.solve();

  ExactLpResult result;
  result.status = sol.status;
  if (sol.status != LpStatus::optimal) return result;
  result.values = std::move(sol.values);
  result.objective = program.sense == Sense::maximize ? -sol.objective : sol.objective;
  return result;
}

}  // namespace subsym
