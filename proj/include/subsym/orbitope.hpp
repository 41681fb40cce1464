#pragma once

#include "subsym/model.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace subsym {

enum class Domain : std::uint8_t { only0, only1, free };

/// Cell domains of an m x n binary matrix, row-major.
struct DomainGrid {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Domain> cells;

  DomainGrid() = default;
  DomainGrid(std::size_t m, std::size_t n, Domain fill = Domain::free)
      : rows(m), cols(n), cells(m * n, fill) {}

  Domain& at(std::size_t r, std::size_t c) { return cells[r * cols + c]; }
  Domain at(std::size_t r, std::size_t c) const { return cells[r * cols + c]; }
};

struct Fixing {
  std::size_t row = 0;
  std::size_t col = 0;
  int value = 0;
  friend bool operator==(const Fixing&, const Fixing&) = default;
};

/// Cells forced by the orbitope condition. Empty when infeasible.
struct FixDelta {
  std::vector<Fixing> fixings;  // sorted by (row, col)
  bool infeasible = false;
  friend bool operator==(const FixDelta&, const FixDelta&) = default;
};

enum class LexOrder { less, equal, greater };

/// Lexicographic comparison of equal-length 0/1 sequences (first entry most
/// significant). Throws std::invalid_argument on length mismatch.
LexOrder lex_cmp(std::span<const int> a, std::span<const int> b);

/// Orbitopal fixing: given cell domains, returns every free cell that takes
/// the same value in all completions whose columns are lexicographically
/// non-increasing and whose rows obey `kind` (no rule / sum <= 1 / sum = 1).
FixDelta propagate_orbitope(const DomainGrid& grid, OrbitopeKind kind);

/// Applies a delta in place.
void apply(DomainGrid& grid, const FixDelta& delta);

}  // namespace subsym
