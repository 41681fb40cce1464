#pragma once

#include "subsym/rational.hpp"

#include <compare>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace subsym {

/// Identifier of a variable: its position in MixedBinaryProgram::variables.
struct VarId {
  std::uint32_t index = 0;
  friend auto operator<=>(VarId, VarId) = default;
};

enum class VarKind { binary, continuous };
enum class Sense { maximize, minimize };
enum class OrbitopeKind { full, packing, partitioning };

std::string_view to_string(VarKind kind);
std::string_view to_string(Sense sense);
std::string_view to_string(OrbitopeKind kind);
OrbitopeKind parse_orbitope_kind(std::string_view text);

struct VariableDecl {
  std::string name;
  VarKind kind = VarKind::binary;
  Rational lower = 0;
  Rational upper = 1;
  Rational objective = 0;
};

struct Term {
  VarId var;
  Rational coeff;
};

struct LinearConstraint {
  std::vector<Term> terms;
  Bound lower;  // absent: -infinity
  Bound upper;  // absent: +infinity
  std::string name;
};

/// An m x n arrangement of binary variables on which column symmetries act.
///
/// `linked` holds further m x n grids whose columns are permuted together
/// with the primary grid (e.g. start-up indicators that follow the on/off
/// schedule of a unit). Propagation only ever looks at the primary grid.
struct VarMatrix {
  std::string label;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<VarId> entries;  // row-major
  OrbitopeKind kind = OrbitopeKind::full;
  std::vector<std::vector<VarId>> linked;

  VarId at(std::size_t row, std::size_t col) const { return entries[row * cols + col]; }
};

/// Rows and columns (both strictly increasing) of a declared VarMatrix.
struct Submatrix {
  std::size_t matrix = 0;
  std::vector<std::size_t> rows;
  std::vector<std::size_t> cols;

  friend bool operator==(const Submatrix&, const Submatrix&) = default;
};

struct MixedBinaryProgram {
  std::string name;
  Sense sense = Sense::maximize;
  std::vector<VariableDecl> variables;
  std::vector<LinearConstraint> constraints;
  std::vector<VarMatrix> matrices;

  VarId add_binary(std::string var_name, Rational objective = 0);
  VarId add_continuous(std::string var_name, Rational lower, Rational upper,
                       Rational objective = 0);
  std::size_t add_constraint(std::vector<Term> terms, Bound lower, Bound upper,
                             std::string constraint_name = {});
  std::size_t add_matrix(VarMatrix matrix);

  const VariableDecl& var(VarId id) const { return variables.at(id.index); }
  std::size_t num_binaries() const;
  /// Index of the matrix with the given label; throws if absent.
  std::size_t matrix_index(std::string_view label) const;
};

using Assignment = std::vector<Rational>;

struct Evaluation {
  Rational objective;
  bool feasible = false;
};

/// Lists every broken invariant; empty iff the program is well formed.
std::vector<std::string> validate(const MixedBinaryProgram& program);

/// Exact objective and feasibility of a full assignment (indexed by VarId).
/// Throws std::invalid_argument("incomplete assignment") on size mismatch.
Evaluation evaluate(const MixedBinaryProgram& program, const Assignment& values);

/// Canonical JSON text (fixed key order, rationals as strings).
std::string to_json(const MixedBinaryProgram& program);
MixedBinaryProgram program_from_json(std::string_view text);

}  // namespace subsym
