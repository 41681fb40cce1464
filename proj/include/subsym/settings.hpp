#pragma once

#include "subsym/engine.hpp"
#include "subsym/instances.hpp"

#include <string_view>
#include <vector>

namespace subsym {

/// Symmetry-handling configurations compared by the benchmark.
///   no-sym        plain formulation
///   orbitope      orbitopal fixing for the global symmetries
///   ineq          sub-symmetry-handling inequalities (MKP, MUCP)
///   act           orbitope plus the activation handler
///   act-consec    MKCS handler on consecutive color pairs
///   act-allpairs  MKCS handler on all color pairs (MKCS "act")
enum class Setting { no_sym, orbitope, ineq, act, act_consec, act_allpairs };

std::string_view to_string(Setting setting);
Setting parse_setting(std::string_view text);

/// Settings a problem class accepts, in report order.
std::vector<Setting> supported_settings(const Instance& instance);

struct Formulation {
  MixedBinaryProgram program;
  Plugins plugins;
};

struct FormulateOptions {
  bool mkp_partitioning = false;  // partitioning fixing when all knapsacks tie
};

/// Builds the program and plugins for `setting`. Throws std::invalid_argument
/// for combinations the problem class does not support.
Formulation formulate(const Instance& instance, Setting setting,
                      const FormulateOptions& options = {});

/// Static orbitopes for every declared matrix of the program, in declaration
/// order, restricted for the knapsack matrix to columns of equal capacity.
std::vector<Activation> global_orbitopes(const MixedBinaryProgram& program, const Instance& instance);

}  // namespace subsym
