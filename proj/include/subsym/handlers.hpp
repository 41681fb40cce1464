#pragma once

// Activation handlers for the three problem classes and the static
// sub-symmetry-handling inequalities they are compared against.

#include "subsym/engine.hpp"
#include "subsym/problems.hpp"

#include <vector>

namespace subsym {

// --- Multiple knapsack -----------------------------------------------------

/// Capacity sub-symmetries: for every item i whose predecessors are all
/// placed (every y_{k,j}, k < i, fixed), knapsacks with equal remaining
/// capacity may exchange their contents from item i on. `y` is the item x
/// knapsack matrix at index `y_index` of the program.
std::vector<Activation> mkp_activations(const NodeState& node, const MkpData& data,
                                        const VarMatrix& y, std::size_t y_index,
                                        bool partitioning_variant = false);

class MkpHandler final : public ActivationHandler {
 public:
  MkpHandler(MkpData data, const MixedBinaryProgram& program, bool partitioning_variant = false);
  std::string_view name() const override { return "mkp-capacity"; }
  std::vector<Activation> activations(const NodeState& node,
                                      const MixedBinaryProgram& program) const override;

 private:
  MkpData data_;
  std::size_t y_index_;
  bool partitioning_variant_;
};

struct ShiAddition {
  std::vector<VarId> variables;
  std::vector<std::size_t> constraints;
  std::size_t inequalities = 0;  // number of SHIs among `constraints`
};

/// Adds, for every item i and consecutive knapsacks j, j+1, the activator
/// variables alpha+/alpha- (continuous) and z+/z- (binary), their five
/// linking constraints with big-M = max{c_j, c_j+1} + sum_{k<i} w_k, and the
/// inequality y_{i,j+1} <= z+ + z- + y_{i,j}.
ShiAddition add_mkp_shis(MixedBinaryProgram& program, const MkpData& data);

// --- Unit commitment -------------------------------------------------------

/// Start-up activations (units fixed down over the last `min_down` periods)
/// and shut-down activations (units fixed up over the last `min_up`
/// periods), per unit type, with the full orbitope on rows t..T.
std::vector<Activation> mucp_activations(const NodeState& node, const MucpData& data,
                                         const MixedBinaryProgram& program);

class MucpHandler final : public ActivationHandler {
 public:
  explicit MucpHandler(MucpData data) : data_(std::move(data)) {}
  std::string_view name() const override { return "mucp-startup-shutdown"; }
  std::vector<Activation> activations(const NodeState& node,
                                      const MixedBinaryProgram& program) const override {
    return mucp_activations(node, data_, program);
  }

 private:
  MucpData data_;
};

/// Start-up and shut-down inequalities for consecutive units of each type.
/// With `strengthened`, the start-up family uses the start-up variables:
///   u_{t,j'} <= x_{t-l,j} + x_{t,j} + sum_{t'=t-l+1}^{t-1} u_{t',j}.
/// Otherwise the activator is substituted directly:
///   x_{t,j'} <= sum_{t'=t-l}^{t-1} (x_{t',j} + x_{t',j'}) + x_{t,j}.
/// The shut-down family always uses the substituted form.
ShiAddition add_mucp_shis(MixedBinaryProgram& program, const MucpData& data, bool strengthened);

// --- Max k-colorable subgraph ----------------------------------------------

enum class PairMode { consecutive, all_pairs };

/// For each color pair, vertices not fixed away from both colors split into
/// connected components; every component with at least two vertices gets a
/// packing orbitope on its two color columns.
std::vector<Activation> mkcs_activations(const NodeState& node, const MkcsData& data,
                                         const VarMatrix& x, std::size_t x_index, PairMode mode);

class MkcsHandler final : public ActivationHandler {
 public:
  MkcsHandler(MkcsData data, const MixedBinaryProgram& program, PairMode mode);
  std::string_view name() const override {
    return mode_ == PairMode::consecutive ? "mkcs-consecutive" : "mkcs-all-pairs";
  }
  std::vector<Activation> activations(const NodeState& node,
                                      const MixedBinaryProgram& program) const override;

 private:
  MkcsData data_;
  std::vector<std::vector<std::size_t>> adjacency_;
  std::size_t x_index_;
  PairMode mode_;
};

}  // namespace subsym
