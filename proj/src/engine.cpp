#include "subsym/engine.hpp"

#include <chrono>
#include <cmath>
#include <deque>
#include <limits>
#include <queue>
#include <stdexcept>

namespace subsym {

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::infeasible: return "infeasible";
    case SolveStatus::time_limit: return "time_limit";
    case SolveStatus::node_limit: return "node_limit";
    case SolveStatus::error: return "error";
  }
  return "error";
}

SolveStatus parse_solve_status(std::string_view text) {
  if (text == "optimal") return SolveStatus::optimal;
  if (text == "infeasible") return SolveStatus::infeasible;
  if (text == "time_limit") return SolveStatus::time_limit;
  if (text == "node_limit") return SolveStatus::node_limit;
  if (text == "error") return SolveStatus::error;
  throw std::invalid_argument("unknown status: " + std::string(text));
}

NodeState NodeState::root(const MixedBinaryProgram& program) {
  NodeState node;
  node.fixed.assign(program.variables.size(), -1);
  for (std::size_t k = 0; k < program.variables.size(); ++k) {
    const auto& v = program.variables[k];
    if (v.kind == VarKind::binary && v.lower == v.upper) node.fixed[k] = v.lower == 1 ? 1 : 0;
  }
  return node;
}

// ---------------------------------------------------------------------------
// Propagation

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLinTol = 1e-9;
}  // namespace

Propagator::Propagator(const MixedBinaryProgram& program, const Plugins& plugins)
    : program_(program), plugins_(plugins) {
  for (const auto& v : program.variables) {
    lower_.push_back(to_double(v.lower));
    upper_.push_back(to_double(v.upper));
  }
  if (!plugins.linear_propagation) return;
  for (const auto& con : program.constraints) {
    CompiledRow row;
    row.lower = con.lower ? to_double(*con.lower) : -kInf;
    row.upper = con.upper ? to_double(*con.upper) : kInf;
    bool touches_binary = false;
    for (const auto& t : con.terms) {
      if (t.coeff == 0) continue;
      row.terms.emplace_back(t.var.index, to_double(t.coeff));
      touches_binary |= program.variables[t.var.index].kind == VarKind::binary;
    }
    if (touches_binary) rows_.push_back(std::move(row));
  }
}

bool Propagator::propagate_linear(NodeState& node, PropagationResult& out) const {
  bool changed = false;
  for (const auto& row : rows_) {
    double min_act = 0, max_act = 0;
    for (const auto& [j, a] : row.terms) {
      double lo = lower_[j], hi = upper_[j];
      if (node.fixed[j] >= 0) lo = hi = node.fixed[j];
      if (a > 0) {
        min_act += a * lo;
        max_act += a * hi;
      } else {
        min_act += a * hi;
        max_act += a * lo;
      }
    }
    const double tol_hi = kLinTol * std::max(1.0, std::abs(row.upper));
    const double tol_lo = kLinTol * std::max(1.0, std::abs(row.lower));
    if (min_act > row.upper + tol_hi || max_act < row.lower - tol_lo) {
      out.infeasible = true;
      return changed;
    }
    for (const auto& [j, a] : row.terms) {
      if (node.fixed[j] >= 0 || program_.variables[j].kind != VarKind::binary) continue;
      const double mag = std::abs(a);
      // Value of x_j that raises the minimum activity by |a| is 1 when a > 0.
      const int raises_min = a > 0 ? 1 : 0;
      int forced = -1;
      if (min_act + mag > row.upper + tol_hi) forced = 1 - raises_min;
      if (max_act - mag < row.lower - tol_lo) {
        const int keep_max = raises_min;  // the value that keeps max activity
        if (forced >= 0 && forced != keep_max) {
          out.infeasible = true;
          return changed;
        }
        forced = keep_max;
      }
      if (forced < 0) continue;
      node.fixed[j] = static_cast<std::int8_t>(forced);
      out.fixings.emplace_back(VarId{j}, forced);
      changed = true;
      if (forced == raises_min) {
        min_act += mag;
      } else {
        max_act -= mag;
      }
    }
  }
  return changed;
}

bool Propagator::propagate_submatrix(NodeState& node, const Activation& act,
                                     PropagationResult& out) const {
  const auto& mat = program_.matrices.at(act.target.matrix);
  const auto& rows = act.target.rows;
  const auto& cols = act.target.cols;
  DomainGrid grid(rows.size(), cols.size());
  for (std::size_t a = 0; a < rows.size(); ++a) {
    for (std::size_t b = 0; b < cols.size(); ++b) {
      const int v = node.value(mat.at(rows[a], cols[b]));
      grid.at(a, b) = v < 0 ? Domain::free : (v ? Domain::only1 : Domain::only0);
    }
  }
  const FixDelta delta = propagate_orbitope(grid, act.kind);
  if (delta.infeasible) {
    out.infeasible = true;
    return false;
  }
  for (const auto& f : delta.fixings) {
    const VarId v = mat.at(rows[f.row], cols[f.col]);
    node.fixed[v.index] = static_cast<std::int8_t>(f.value);
    out.fixings.emplace_back(v, f.value);
  }
  return !delta.fixings.empty();
}

PropagationResult Propagator::run(NodeState& node, int max_rounds,
                                  const ActivationObserver& observer) const {
  PropagationResult out;
  while (out.rounds < max_rounds) {
    ++out.rounds;
    bool changed = false;
    if (plugins_.linear_propagation) {
      changed |= propagate_linear(node, out);
      if (out.infeasible) return out;
    }
    for (const auto& act : plugins_.static_orbitopes) {
      changed |= propagate_submatrix(node, act, out);
      if (out.infeasible) return out;
    }
    for (const auto& handler : plugins_.handlers) {
      for (const auto& act : handler->activations(node, program_)) {
        if (observer) observer(node, act);
        changed |= propagate_submatrix(node, act, out);
        if (out.infeasible) return out;
      }
    }
    if (!changed) break;
  }
  return out;
}

PropagationResult propagate(NodeState& node, const MixedBinaryProgram& program,
                            const Plugins& plugins, int max_rounds) {
  return Propagator(program, plugins).run(node, max_rounds);
}

// ---------------------------------------------------------------------------
// Branching

std::pair<NodeState, NodeState> branch(const NodeState& node, const MixedBinaryProgram& program,
                                       const LpResult& lp, double eps_int) {
  std::size_t best = program.variables.size();
  double best_dist = 1.0;
  for (std::size_t k = 0; k < program.variables.size(); ++k) {
    if (program.variables[k].kind != VarKind::binary) continue;
    const double v = lp.values.at(k);
    if (std::abs(v - std::round(v)) <= eps_int) continue;
    const double dist = std::abs(v - 0.5);
    if (dist < best_dist) {
      best = k;
      best_dist = dist;
    }
  }
  if (best == program.variables.size()) throw std::logic_error("nothing to branch");
  NodeState zero = node, one = node;
  zero.fixed[best] = 0;
  one.fixed[best] = 1;
  zero.parent = one.parent = node.id;
  zero.depth = one.depth = node.depth + 1;
  return {std::move(zero), std::move(one)};
}

// ---------------------------------------------------------------------------
// Search

namespace {

bool objective_is_integral(const MixedBinaryProgram& program) {
  for (const auto& v : program.variables) {
    if (v.objective == 0) continue;
    if (v.kind != VarKind::binary || !is_integral(v.objective)) return false;
  }
  return true;
}

// Completes fixed binary values into an exactly feasible assignment.
std::optional<Assignment> complete(const MixedBinaryProgram& program,
                                   const std::vector<int>& binaries,
                                   const std::vector<double>& lp_values, const LpOptions& lp_opt) {
  Assignment values(program.variables.size());
  bool has_continuous = false;
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (program.variables[k].kind == VarKind::binary) {
      values[k] = binaries[k];
    } else {
      has_continuous = true;
      if (!lp_values.empty()) values[k] = approximate(lp_values[k]);
    }
  }
  if (!has_continuous) {
    if (evaluate(program, values).feasible) return values;
    return std::nullopt;
  }
  // Small programs always get the exact continuous optimum; larger ones try
  // the snapped LP point first.
  constexpr std::size_t kExactBelow = 200;
  if (program.variables.size() >= kExactBelow && !lp_values.empty() &&
      evaluate(program, values).feasible) {
    return values;
  }
  std::vector<ExactInterval> bounds;
  bounds.reserve(values.size());
  for (std::size_t k = 0; k < values.size(); ++k) {
    const auto& v = program.variables[k];
    if (v.kind == VarKind::binary) {
      bounds.push_back({Rational(binaries[k]), Rational(binaries[k])});
    } else {
      bounds.push_back({v.lower, v.upper});
    }
  }
  auto exact = solve_lp_exact(program, bounds, lp_opt);
  if (exact.status != LpStatus::optimal) return std::nullopt;
  if (!evaluate(program, exact.values).feasible) return std::nullopt;
  return std::move(exact.values);
}

struct QueueEntry {
  double bound;
  long seq;
  NodeState node;
};

}  // namespace

SolveReport solve(const MixedBinaryProgram& program, const SolverConfig& config,
                  const Plugins& plugins) {
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(Clock::now() - start).count(); };

  SolveReport report;
  report.setting = config.setting;
  report.instance = program.name;

  const bool maximize = program.sense == Sense::maximize;
  const bool integral_objective = objective_is_integral(program);
  LpOptions lp_opt;
  lp_opt.feas_tol = config.eps_feas;
  lp_opt.opt_tol = config.eps_opt;
  lp_opt.bland_after = config.bland_after;

  const Propagator propagator(program, plugins);

  std::optional<Rational> incumbent_obj;
  double incumbent_value = 0;

  // True when a node with relaxation bound `bound` may still beat the incumbent.
  auto may_improve = [&](double bound) {
    if (!incumbent_obj) return true;
    const double tol = config.eps_opt * std::max(1.0, std::abs(incumbent_value));
    if (integral_objective) {
      return maximize ? std::floor(bound + tol) >= incumbent_value + 1
                      : std::ceil(bound - tol) <= incumbent_value - 1;
    }
    return maximize ? bound > incumbent_value + tol : bound < incumbent_value - tol;
  };
  auto offer = [&](Assignment values) {
    const Evaluation eval = evaluate(program, values);
    if (!eval.feasible) return;
    if (incumbent_obj && (maximize ? eval.objective <= *incumbent_obj
                                   : eval.objective >= *incumbent_obj)) {
      return;
    }
    incumbent_obj = eval.objective;
    incumbent_value = to_double(eval.objective);
    report.incumbent = std::move(values);
  };

  // Best-first: highest bound (maximize) first, FIFO among equal bounds.
  auto worse = [maximize](const QueueEntry& a, const QueueEntry& b) {
    if (a.bound != b.bound) return maximize ? a.bound < b.bound : a.bound > b.bound;
    return a.seq > b.seq;
  };
  std::priority_queue<QueueEntry, std::vector<QueueEntry>, decltype(worse)> best_queue(worse);
  std::deque<QueueEntry> stack;
  long seq = 0;
  long next_id = 1;
  const double open_bound = maximize ? std::numeric_limits<double>::infinity()
                                     : -std::numeric_limits<double>::infinity();

  auto push = [&](NodeState node, double bound) {
    node.id = next_id++;
    QueueEntry e{bound, seq++, std::move(node)};
    if (config.selection == NodeSelection::best_first) {
      best_queue.push(std::move(e));
    } else {
      stack.push_back(std::move(e));
    }
  };
  auto empty = [&] {
    return config.selection == NodeSelection::best_first ? best_queue.empty() : stack.empty();
  };
  auto pop = [&] {
    QueueEntry e;
    if (config.selection == NodeSelection::best_first) {
      e = best_queue.top();
      best_queue.pop();
    } else {
      e = std::move(stack.back());
      stack.pop_back();
    }
    return e;
  };
  // Pushes children so that the preferred one is explored first.
  auto push_children = [&](std::pair<NodeState, NodeState> children, double bound) {
    auto& [zero, one] = children;
    const bool one_first = maximize;
    if (config.selection == NodeSelection::best_first) {
      if (one_first) {
        push(std::move(one), bound);
        push(std::move(zero), bound);
      } else {
        push(std::move(zero), bound);
        push(std::move(one), bound);
      }
    } else {
      if (one_first) {
        push(std::move(zero), bound);
        push(std::move(one), bound);
      } else {
        push(std::move(one), bound);
        push(std::move(zero), bound);
      }
    }
  };
  auto first_free_binary = [&](const NodeState& node) -> std::optional<std::size_t> {
    for (std::size_t k = 0; k < program.variables.size(); ++k) {
      if (program.variables[k].kind == VarKind::binary && node.fixed[k] < 0) return k;
    }
    return std::nullopt;
  };
  auto split_on = [&](const NodeState& node, std::size_t k, double bound) {
    NodeState zero = node, one = node;
    zero.fixed[k] = 0;
    one.fixed[k] = 1;
    zero.parent = one.parent = node.id;
    zero.depth = one.depth = node.depth + 1;
    push_children({std::move(zero), std::move(one)}, bound);
  };

  NodeState root = NodeState::root(program);
  push(std::move(root), open_bound);

  report.status = SolveStatus::optimal;
  while (!empty()) {
    if (elapsed() >= config.time_limit_s) {
      report.status = SolveStatus::time_limit;
      break;
    }
    if (config.node_limit >= 0 && report.nodes >= config.node_limit) {
      report.status = SolveStatus::node_limit;
      break;
    }
    QueueEntry entry = pop();
    if (!may_improve(entry.bound)) continue;
    NodeState node = std::move(entry.node);
    ++report.nodes;

    const auto prop = propagator.run(node, config.max_propagation_rounds, config.on_activation);
    if (prop.infeasible) continue;

    std::vector<Interval> bounds(program.variables.size());
    for (std::size_t k = 0; k < bounds.size(); ++k) {
      const auto& v = program.variables[k];
      if (node.fixed[k] >= 0) {
        bounds[k] = {double(node.fixed[k]), double(node.fixed[k])};
      } else {
        bounds[k] = {to_double(v.lower), to_double(v.upper)};
      }
    }
    const LpResult lp = solve_lp(program, bounds, lp_opt);
    if (lp.status == LpStatus::infeasible) continue;
    if (lp.status != LpStatus::optimal) {
      // No usable bound: keep the node alive by splitting on a free binary.
      if (auto k = first_free_binary(node)) split_on(node, *k, entry.bound);
      continue;
    }
    node.lp_bound = lp.objective;
    if (!may_improve(lp.objective)) continue;

    bool integral = true;
    std::vector<int> rounded(program.variables.size(), 0);
    for (std::size_t k = 0; k < program.variables.size(); ++k) {
      if (program.variables[k].kind != VarKind::binary) continue;
      const double v = lp.values[k];
      rounded[k] = static_cast<int>(std::lround(v));
      if (std::abs(v - rounded[k]) > config.eps_int) integral = false;
    }

    if (integral) {
      auto values = complete(program, rounded, lp.values, lp_opt);
      if (values) {
        offer(std::move(*values));
      } else if (auto k = first_free_binary(node)) {
        split_on(node, *k, lp.objective);
      }
      continue;
    }

    if (config.rounding_heuristic) {
      if (auto values = complete(program, rounded, lp.values, lp_opt)) offer(std::move(*values));
      if (!may_improve(lp.objective)) continue;
    }
    push_children(branch(node, program, lp, config.eps_int), lp.objective);
  }

  report.time_s = elapsed();
  if (incumbent_obj) {
    report.objective = incumbent_obj;
  } else if (report.status == SolveStatus::optimal) {
    report.status = SolveStatus::infeasible;
  }
  return report;
}

}  // namespace subsym
