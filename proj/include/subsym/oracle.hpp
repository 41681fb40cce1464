#pragma once

// Brute-force ground truth for tiny programs.

#include "subsym/engine.hpp"
#include "subsym/model.hpp"
#include "subsym/orbitope.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace subsym {

inline constexpr std::size_t kOracleMaxBinaries = 24;
inline constexpr std::size_t kOracleMaxCells = 16;

/// A feasible 0/1 pattern. Bit k of `pattern` is the k-th binary variable in
/// declaration order. Continuous variables hold an optimal completion and
/// `objective` is the best objective over them.
struct FeasiblePoint {
  std::uint64_t pattern = 0;
  Assignment values;
  Rational objective;
};

/// Every feasible 0/1 pattern, sorted by `pattern`. OpenMP-parallel over
/// patterns. Throws std::invalid_argument beyond kOracleMaxBinaries.
std::vector<FeasiblePoint> enumerate_feasible(const MixedBinaryProgram& program);

/// Single-threaded reference: evaluates each pattern with `evaluate` and
/// solves continuous completions on the whole program.
std::vector<FeasiblePoint> enumerate_feasible_serial(const MixedBinaryProgram& program);

/// Best objective over `points`, absent when empty.
std::optional<Rational> best_objective(const MixedBinaryProgram& program,
                                       const std::vector<FeasiblePoint>& points);

/// Binary variables in declaration order (bit positions of a pattern).
std::vector<VarId> binary_order(const MixedBinaryProgram& program);

/// Pattern bit of every variable (-1 for continuous).
std::vector<int> pattern_bits(const MixedBinaryProgram& program);

struct Orbit {
  std::vector<std::uint64_t> members;  // ascending
  /// Lexicographically maximal member, the first binary variable being most
  /// significant.
  std::uint64_t representative = 0;
};

/// Orbits of `points` under all permutations of the submatrix's columns,
/// acting on its rows of the matrix and of every grid linked to it. Orbits
/// come out ordered by their smallest member.
std::vector<Orbit> enumerate_orbits(const MixedBinaryProgram& program,
                                    const std::vector<FeasiblePoint>& points,
                                    const Submatrix& group);

std::vector<Orbit> enumerate_orbits(const MixedBinaryProgram& program, const Submatrix& group);

/// Orbitopal fixing by enumerating every completion. Throws beyond
/// kOracleMaxCells cells.
FixDelta forced_cells(const DomainGrid& grid, OrbitopeKind kind);

/// Checks the handler contract for one activation: every feasible completion
/// of the node's fixings is mapped by every permutation of the activation's
/// columns to a feasible pattern with the same objective. Returns a
/// description of the first violation, or nothing.
std::optional<std::string> activation_violation(const MixedBinaryProgram& program,
                                                const std::vector<FeasiblePoint>& points,
                                                const NodeState& node,
                                                const Activation& activation);

/// Patterns that survive symmetry handling: a complete enumeration tree that
/// branches on the first free binary and runs the plugins' propagation at
/// every node, keeping the exactly feasible leaves. Returned as patterns of
/// the first `original_binaries` binaries (auxiliary variables projected
/// out), sorted and unique.
std::vector<std::uint64_t> enumerate_survivors(const MixedBinaryProgram& program,
                                               const Plugins& plugins,
                                               std::size_t original_binaries,
                                               const ActivationObserver& observer = {});

}  // namespace subsym
