#include "subsym/orbitope.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

#include <algorithm>

using namespace subsym;
using namespace subsym::testing;

namespace {

FixDelta sorted(FixDelta d) {
  std::sort(d.fixings.begin(), d.fixings.end(), [](const Fixing& a, const Fixing& b) {
    return std::tie(a.row, a.col) < std::tie(b.row, b.col);
  });
  return d;
}

DomainGrid grid_from_code(std::size_t m, std::size_t n, std::uint32_t code) {
  DomainGrid g(m, n);
  for (auto& c : g.cells) {
    c = static_cast<Domain>(code % 3);
    code /= 3;
  }
  return g;
}

const OrbitopeKind kKinds[] = {OrbitopeKind::full, OrbitopeKind::packing,
                               OrbitopeKind::partitioning};

}  // namespace

TEST(LexCmp, Orders) {
  const std::vector<int> a{1, 0}, b{0, 1}, c{1, 0};
  EXPECT_EQ(lex_cmp(a, b), LexOrder::greater);
  EXPECT_EQ(lex_cmp(b, a), LexOrder::less);
  EXPECT_EQ(lex_cmp(a, c), LexOrder::equal);
  const std::vector<int> shorter{1};
  EXPECT_THROW(lex_cmp(a, shorter), std::invalid_argument);
}

TEST(PropagateOrbitope, ContradictionInFirstRow) {
  DomainGrid g(2, 2);
  g.at(0, 0) = Domain::only0;
  g.at(0, 1) = Domain::only1;
  EXPECT_TRUE(propagate_orbitope(g, OrbitopeKind::full).infeasible);
}

TEST(PropagateOrbitope, ZeroInFirstColumnFixesNeighbor) {
  DomainGrid g(2, 2);
  g.at(0, 0) = Domain::only0;
  const auto d = sorted(propagate_orbitope(g, OrbitopeKind::full));
  EXPECT_FALSE(d.infeasible);
  EXPECT_EQ(d.fixings, (std::vector<Fixing>{{0, 1, 0}}));
}

TEST(PropagateOrbitope, PackingRow) {
  const auto d = sorted(propagate_orbitope(DomainGrid(1, 2), OrbitopeKind::packing));
  EXPECT_EQ(d.fixings, (std::vector<Fixing>{{0, 1, 0}}));
}

TEST(PropagateOrbitope, PartitioningRow) {
  const auto d = sorted(propagate_orbitope(DomainGrid(1, 2), OrbitopeKind::partitioning));
  EXPECT_EQ(d.fixings, (std::vector<Fixing>{{0, 0, 1}, {0, 1, 0}}));
}

TEST(PropagateOrbitope, MatchesOracleOnSmallShapes) {
  // Every grid with at most 6 cells; the acceptance run covers 9.
  for (std::size_t m = 1; m <= 6; ++m) {
    for (std::size_t n = 1; m * n <= 6; ++n) {
      std::uint32_t total = 1;
      for (std::size_t k = 0; k < m * n; ++k) total *= 3;
      for (auto kind : kKinds) {
        for (std::uint32_t code = 0; code < total; ++code) {
          const auto g = grid_from_code(m, n, code);
          ASSERT_EQ(sorted(propagate_orbitope(g, kind)), forced_cells(g, kind))
              << m << "x" << n << " kind " << to_string(kind) << " code " << code;
        }
      }
    }
  }
}

TEST(PropagateOrbitope, Idempotent) {
  Rng rng(1);
  for (int trial = 0; trial < 3000; ++trial) {
    const auto m = static_cast<std::size_t>(rng.uniform(1, 5));
    const auto n = static_cast<std::size_t>(rng.uniform(1, 5));
    DomainGrid g(m, n);
    for (auto& c : g.cells) c = static_cast<Domain>(rng.uniform(0, 5) < 4 ? 2 : rng.uniform(0, 1));
    const auto kind = rng.pick(std::vector<OrbitopeKind>(std::begin(kKinds), std::end(kKinds)));
    const auto d = propagate_orbitope(g, kind);
    if (d.infeasible) continue;
    apply(g, d);
    const auto again = propagate_orbitope(g, kind);
    EXPECT_FALSE(again.infeasible);
    EXPECT_TRUE(again.fixings.empty());
  }
}

TEST(PropagateOrbitope, OppositeOfAFixingIsInfeasible) {
  Rng rng(2);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto m = static_cast<std::size_t>(rng.uniform(1, 4));
    const auto n = static_cast<std::size_t>(rng.uniform(1, 4));
    DomainGrid g(m, n);
    for (auto& c : g.cells) c = static_cast<Domain>(rng.uniform(0, 3) < 3 ? 2 : rng.uniform(0, 1));
    const auto kind = rng.pick(std::vector<OrbitopeKind>(std::begin(kKinds), std::end(kKinds)));
    const auto d = propagate_orbitope(g, kind);
    for (const auto& f : d.fixings) {
      DomainGrid flipped = g;
      flipped.at(f.row, f.col) = f.value ? Domain::only0 : Domain::only1;
      EXPECT_TRUE(forced_cells(flipped, kind).infeasible);
    }
  }
}

TEST(PropagateOrbitope, TighteningKeepsFixings) {
  Rng rng(4);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto m = static_cast<std::size_t>(rng.uniform(1, 4));
    const auto n = static_cast<std::size_t>(rng.uniform(1, 4));
    DomainGrid g(m, n);
    for (auto& c : g.cells) c = static_cast<Domain>(rng.uniform(0, 3) < 3 ? 2 : rng.uniform(0, 1));
    const auto kind = rng.pick(std::vector<OrbitopeKind>(std::begin(kKinds), std::end(kKinds)));
    const auto before = propagate_orbitope(g, kind);
    if (before.infeasible) continue;
    std::vector<std::size_t> free_cells;
    for (std::size_t k = 0; k < g.cells.size(); ++k)
      if (g.cells[k] == Domain::free) free_cells.push_back(k);
    if (free_cells.empty()) continue;
    DomainGrid tighter = g;
    tighter.cells[rng.pick(free_cells)] = rng.coin() ? Domain::only1 : Domain::only0;
    const auto after = propagate_orbitope(tighter, kind);
    if (after.infeasible) continue;
    for (const auto& f : before.fixings) {
      const Domain now = tighter.at(f.row, f.col);
      if (now != Domain::free) {
        EXPECT_EQ(now, f.value ? Domain::only1 : Domain::only0);
        continue;
      }
      EXPECT_NE(std::find(after.fixings.begin(), after.fixings.end(), f), after.fixings.end());
    }
  }
}

TEST(ForcedCells, RejectsLargeGrids) {
  EXPECT_THROW(forced_cells(DomainGrid(4, 5), OrbitopeKind::full), std::invalid_argument);
}
