#pragma once

#include "subsym/lp.hpp"
#include "subsym/model.hpp"
#include "subsym/orbitope.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace subsym {

/// Search-tree node. `fixed` holds, per variable, -1 (free), 0 (in F0) or
/// 1 (in F1); continuous variables stay -1.
struct NodeState {
  long id = 0;
  int depth = 0;
  std::optional<long> parent;
  std::optional<double> lp_bound;
  std::vector<std::int8_t> fixed;

  bool in_f0(VarId v) const { return fixed[v.index] == 0; }
  bool in_f1(VarId v) const { return fixed[v.index] == 1; }
  bool is_fixed(VarId v) const { return fixed[v.index] >= 0; }
  int value(VarId v) const { return fixed[v.index]; }

  /// Root node of `program`: binaries with equal bounds start fixed.
  static NodeState root(const MixedBinaryProgram& program);
};

/// A submatrix whose columns may currently be permuted, and the orbitope
/// used to handle that symmetry.
struct Activation {
  Submatrix target;
  OrbitopeKind kind = OrbitopeKind::full;
  friend bool operator==(const Activation&, const Activation&) = default;
};

/// Reports, for a node, the submatrices with an active sub-symmetry.
///
/// Contract: for every returned activation, every feasible completion of the
/// node's fixings lies in a solution subset on which all permutations of the
/// activation's columns (restricted to its rows, identity elsewhere) preserve
/// feasibility and objective value.
class ActivationHandler {
 public:
  virtual ~ActivationHandler() = default;
  virtual std::string_view name() const = 0;
  virtual std::vector<Activation> activations(const NodeState& node,
                                              const MixedBinaryProgram& program) const = 0;
};

struct Plugins {
  /// Global symmetries, handled by orbitopal fixing at every node.
  std::vector<Activation> static_orbitopes;
  std::vector<std::shared_ptr<const ActivationHandler>> handlers;
  /// Activity-based fixing of binaries from the linear constraints.
  bool linear_propagation = true;
};

using ActivationObserver = std::function<void(const NodeState&, const Activation&)>;

struct PropagationResult {
  std::vector<std::pair<VarId, int>> fixings;
  bool infeasible = false;
  int rounds = 0;
};

/// Runs linear propagation, static orbitopes and activation handlers to a
/// fixpoint (or `max_rounds`), adding the implied fixings to `node`.
class Propagator {
 public:
  Propagator(const MixedBinaryProgram& program, const Plugins& plugins);

  PropagationResult run(NodeState& node, int max_rounds = 50,
                        const ActivationObserver& observer = {}) const;

 private:
  struct CompiledRow {
    std::vector<std::pair<std::uint32_t, double>> terms;
    double lower, upper;  // +-inf when absent
  };

  bool propagate_linear(NodeState& node, PropagationResult& out) const;
  bool propagate_submatrix(NodeState& node, const Activation& act,
                           PropagationResult& out) const;

  const MixedBinaryProgram& program_;
  const Plugins& plugins_;
  std::vector<CompiledRow> rows_;
  std::vector<double> lower_, upper_;
};

PropagationResult propagate(NodeState& node, const MixedBinaryProgram& program,
                            const Plugins& plugins, int max_rounds = 50);

/// Most fractional binary (|v - 0.5| minimal, lowest index on ties).
/// Returns (child with var in F0, child with var in F1).
/// Throws std::logic_error("nothing to branch") when all binaries are integral.
std::pair<NodeState, NodeState> branch(const NodeState& node, const MixedBinaryProgram& program,
                                       const LpResult& lp, double eps_int = 1e-6);

enum class NodeSelection { best_first, depth_first };
enum class SolveStatus { optimal, infeasible, time_limit, node_limit, error };

std::string_view to_string(SolveStatus status);
SolveStatus parse_solve_status(std::string_view text);

struct SolverConfig {
  std::string setting = "no-sym";
  double time_limit_s = 3600.0;
  double eps_feas = 1e-7;
  double eps_opt = 1e-7;
  double eps_int = 1e-6;
  long node_limit = -1;  // negative: unlimited
  std::uint64_t random_seed = 0;  // recorded only
  NodeSelection selection = NodeSelection::best_first;
  int max_propagation_rounds = 50;
  int bland_after = 100;
  bool rounding_heuristic = false;
  /// Debug hook invoked for every activation a handler reports.
  ActivationObserver on_activation;
};

struct SolveReport {
  SolveStatus status = SolveStatus::infeasible;
  std::optional<Rational> objective;
  std::optional<Assignment> incumbent;
  long nodes = 0;
  double time_s = 0;
  std::string setting;
  std::string instance;
};

SolveReport solve(const MixedBinaryProgram& program, const SolverConfig& config,
                  const Plugins& plugins = {});

}  // namespace subsym
