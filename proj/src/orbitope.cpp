#include "subsym/orbitope.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>

namespace subsym {

LexOrder lex_cmp(std::span<const int> a, std::span<const int> b) {
  if (a.size() != b.size()) throw std::invalid_argument("lex_cmp: length mismatch");
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return a[i] > b[i] ? LexOrder::greater : LexOrder::less;
  }
  return LexOrder::equal;
}

void apply(DomainGrid& grid, const FixDelta& delta) {
  for (const auto& f : delta.fixings) {
    grid.at(f.row, f.col) = f.value ? Domain::only1 : Domain::only0;
  }
}

namespace {

using Column = std::vector<int>;
using Box = std::vector<Domain>;

bool allows(Domain d, int v) { return d == Domain::free || (v == 1) == (d == Domain::only1); }

// Largest member of `box` that is lexicographically <= `bound` (no bound when null).
std::optional<Column> lexmax_below(const Box& box, const Column* bound) {
  const std::size_t m = box.size();
  Column x(m);
  if (bound == nullptr) {
    for (std::size_t i = 0; i < m; ++i) x[i] = box[i] == Domain::only0 ? 0 : 1;
    return x;
  }
  const Column& u = *bound;
  std::size_t fit = 0;
  while (fit < m && allows(box[fit], u[fit])) ++fit;
  if (fit == m) return u;
  // Deepest position k <= fit where we can step below u.
  for (std::size_t k = fit + 1; k-- > 0;) {
    if (u[k] == 1 && allows(box[k], 0)) {
      for (std::size_t i = 0; i < k; ++i) x[i] = u[i];
      x[k] = 0;
      for (std::size_t i = k + 1; i < m; ++i) x[i] = box[i] == Domain::only0 ? 0 : 1;
      return x;
    }
  }
  return std::nullopt;
}

// Smallest member of `box` that is lexicographically >= `bound`.
std::optional<Column> lexmin_above(const Box& box, const Column* bound) {
  const std::size_t m = box.size();
  Column x(m);
  if (bound == nullptr) {
    for (std::size_t i = 0; i < m; ++i) x[i] = box[i] == Domain::only1 ? 1 : 0;
    return x;
  }
  const Column& l = *bound;
  std::size_t fit = 0;
  while (fit < m && allows(box[fit], l[fit])) ++fit;
  if (fit == m) return l;
  for (std::size_t k = fit + 1; k-- > 0;) {
    if (l[k] == 0 && allows(box[k], 1)) {
      for (std::size_t i = 0; i < k; ++i) x[i] = l[i];
      x[k] = 1;
      for (std::size_t i = k + 1; i < m; ++i) x[i] = box[i] == Domain::only1 ? 1 : 0;
      return x;
    }
  }
  return std::nullopt;
}

bool lex_geq(const Column& a, const Column& b) {
  return lex_cmp(a, b) != LexOrder::less;
}

// Full orbitope: the values column j can take in a completion are exactly
// the members of its box inside [lexmin_j, lexmax_j], where lexmax chains
// left to right and lexmin right to left.
FixDelta propagate_full(const DomainGrid& grid) {
  const std::size_t m = grid.rows, n = grid.cols;
  std::vector<Box> boxes(n, Box(m));
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < m; ++i) boxes[j][i] = grid.at(i, j);

  FixDelta delta;
  std::vector<Column> upper(n), lower(n);
  for (std::size_t j = 0; j < n; ++j) {
    auto u = lexmax_below(boxes[j], j == 0 ? nullptr : &upper[j - 1]);
    if (!u) {
      delta.infeasible = true;
      return delta;
    }
    upper[j] = std::move(*u);
  }
  for (std::size_t j = n; j-- > 0;) {
    auto l = lexmin_above(boxes[j], j + 1 == n ? nullptr : &lower[j + 1]);
    if (!l) {
      delta.infeasible = true;
      return delta;
    }
    lower[j] = std::move(*l);
  }

  for (std::size_t j = 0; j < n; ++j) {
    Box box = boxes[j];
    for (std::size_t i = 0; i < m; ++i) {
      if (box[i] != Domain::free) continue;
      bool possible[2];
      for (int v = 0; v < 2; ++v) {
        box[i] = v ? Domain::only1 : Domain::only0;
        const auto best = lexmax_below(box, &upper[j]);
        possible[v] = best && lex_geq(*best, lower[j]);
      }
      box[i] = Domain::free;
      if (possible[0] != possible[1]) delta.fixings.push_back({i, j, possible[1] ? 1 : 0});
    }
  }
  return delta;
}

// Packing/partitioning: with at most one 1 per row, lex non-increasing
// columns means the first 1 of each column appears in strictly increasing
// rows and empty columns come last. Scan rows keeping the number of columns
// that already received their first 1.
FixDelta propagate_rowwise(const DomainGrid& grid, bool partitioning) {
  const std::size_t m = grid.rows, n = grid.cols;
  // forward[i][k]: rows < i can be filled so that exactly k columns are open.
  std::vector<std::vector<char>> forward(m + 1, std::vector<char>(n + 1, 0));
  std::vector<std::vector<char>> backward(m + 1, std::vector<char>(n + 1, 0));

  // Per row: count of cells that cannot be 0, and the index of one such cell.
  std::vector<std::size_t> ones(m, 0), one_col(m, n);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (grid.at(i, j) == Domain::only1) {
        ++ones[i];
        one_col[i] = j;
      }
    }
  }
  // A row may place its single 1 in column p iff (i,p) allows 1 and every
  // other cell allows 0.
  auto can_place = [&](std::size_t i, std::size_t p) {
    if (grid.at(i, p) == Domain::only0) return false;
    return ones[i] == 0 || (ones[i] == 1 && one_col[i] == p);
  };
  auto can_skip = [&](std::size_t i) { return !partitioning && ones[i] == 0; };

  forward[0][0] = 1;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t k = 0; k <= n; ++k) {
      if (!forward[i][k]) continue;
      if (can_skip(i)) forward[i + 1][k] = 1;
      for (std::size_t p = 0; p < k; ++p) {
        if (can_place(i, p)) {
          forward[i + 1][k] = 1;
          break;
        }
      }
      if (k < n && can_place(i, k)) forward[i + 1][k + 1] = 1;
    }
  }
  for (std::size_t k = 0; k <= n; ++k) backward[m][k] = 1;
  for (std::size_t i = m; i-- > 0;) {
    for (std::size_t k = 0; k <= n; ++k) {
      bool ok = can_skip(i) && backward[i + 1][k];
      for (std::size_t p = 0; p < k && !ok; ++p) ok = can_place(i, p) && backward[i + 1][k];
      if (!ok && k < n) ok = can_place(i, k) && backward[i + 1][k + 1];
      backward[i][k] = ok;
    }
  }

  FixDelta delta;
  if (!backward[0][0]) {
    delta.infeasible = true;
    return delta;
  }

  for (std::size_t i = 0; i < m; ++i) {
    // placed[p]: some completion puts the row's 1 in column p.
    std::vector<char> placed(n, 0);
    bool skipped = false;
    for (std::size_t k = 0; k <= n; ++k) {
      if (!forward[i][k]) continue;
      if (can_skip(i) && backward[i + 1][k]) skipped = true;
      if (backward[i + 1][k]) {
        for (std::size_t p = 0; p < k; ++p)
          if (can_place(i, p)) placed[p] = 1;
      }
      if (k < n && backward[i + 1][k + 1] && can_place(i, k)) placed[k] = 1;
    }
    std::size_t num_placed = 0;
    for (std::size_t p = 0; p < n; ++p) num_placed += placed[p] ? 1 : 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (grid.at(i, j) != Domain::free) continue;
      const bool can1 = placed[j];
      const bool can0 = skipped || num_placed > (placed[j] ? 1u : 0u);
      if (can1 && !can0) delta.fixings.push_back({i, j, 1});
      if (can0 && !can1) delta.fixings.push_back({i, j, 0});
    }
  }
  return delta;
}

}  // namespace

FixDelta propagate_orbitope(const DomainGrid& grid, OrbitopeKind kind) {
  if (grid.rows == 0 || grid.cols == 0) return {};
  switch (kind) {
    case OrbitopeKind::full: {
      FixDelta delta = propagate_full(grid);
      std::sort(delta.fixings.begin(), delta.fixings.end(), [](const Fixing& a, const Fixing& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
      });
      return delta;
    }
    case OrbitopeKind::packing: return propagate_rowwise(grid, false);
    case OrbitopeKind::partitioning: return propagate_rowwise(grid, true);
  }
  return {};
}

}  // namespace subsym
