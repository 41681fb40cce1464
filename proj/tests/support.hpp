#pragma once

// Shared helpers for the test suites: small instance factories, hand-rolled
// random generators and brute-force reference computations.

#include "subsym/engine.hpp"
#include "subsym/handlers.hpp"
#include "subsym/instances.hpp"
#include "subsym/oracle.hpp"
#include "subsym/random.hpp"
#include "subsym/settings.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

namespace subsym::testing {

inline Instance mkp_instance(std::vector<std::int64_t> w, std::vector<std::int64_t> p,
                             std::vector<std::int64_t> c, std::string name = "mkp") {
  return {std::move(name), MkpData{std::move(w), std::move(p), std::move(c)}};
}

inline Instance mkcs_instance(Graph g, int k, std::string name = "mkcs") {
  return {std::move(name), MkcsData{std::move(g), k}};
}

inline Graph path_graph(std::size_t n) {
  Graph g{n, {}};
  for (std::size_t i = 0; i + 1 < n; ++i) g.edges.push_back({i, i + 1});
  return g;
}

inline Graph petersen() {
  Graph g{10, {}};
  for (std::size_t i = 0; i < 5; ++i) {
    g.edges.push_back({i, (i + 1) % 5});
    g.edges.push_back({i, i + 5});
    g.edges.push_back({5 + i, 5 + (i + 2) % 5});
  }
  for (auto& [a, b] : g.edges)
    if (a > b) std::swap(a, b);
  return g;
}

/// Largest number of vertices colorable with k colors, by trying every
/// assignment of {uncolored, 1..k} to the vertices.
inline long brute_force_mkcs(const Graph& g, int k) {
  const std::size_t n = g.vertices;
  std::vector<int> color(n, 0);
  long best = 0;
  while (true) {
    bool proper = true;
    for (const auto& [a, b] : g.edges) {
      if (color[a] != 0 && color[a] == color[b]) {
        proper = false;
        break;
      }
    }
    if (proper) {
      best = std::max(best, static_cast<long>(std::count_if(color.begin(), color.end(),
                                                            [](int c) { return c != 0; })));
    }
    std::size_t i = 0;
    while (i < n && color[i] == k) color[i++] = 0;
    if (i == n) break;
    ++color[i];
  }
  return best;
}

/// Hand-rolled random source for property tests.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed, 99) {}
  std::int64_t uniform(std::int64_t lo, std::int64_t hi) { return gen_.uniform(lo, hi); }
  bool coin() { return uniform(0, 1) == 1; }
  template <class T>
  const T& pick(const std::vector<T>& items) {
    return items[static_cast<std::size_t>(uniform(0, std::int64_t(items.size()) - 1))];
  }

 private:
  SplitMix64 gen_;
};

inline Instance random_tiny_mkp(Rng& rng, std::size_t max_m = 5, std::size_t max_n = 3) {
  const auto m = static_cast<std::size_t>(rng.uniform(1, std::int64_t(max_m)));
  const auto n = static_cast<std::size_t>(rng.uniform(1, std::int64_t(max_n)));
  const auto cls = rng.pick(std::vector<MkpClass>{MkpClass::uncorrelated, MkpClass::weakly,
                                                  MkpClass::strongly, MkpClass::subset_sum});
  const double f = rng.coin() ? 0.5 : 0.25;
  const auto seed = static_cast<std::uint64_t>(rng.uniform(0, 1 << 30));
  MkpData data = gen_mkp(seed, m, n, cls, f, rng.coin() ? ProfitMode::equal : ProfitMode::free);
  // Occasionally unequal capacities, to exercise partial capacity classes.
  if (n >= 3 && rng.coin()) data.capacities[n - 1] += rng.uniform(1, 40);
  return {"tiny-mkp-" + std::to_string(seed), std::move(data)};
}

inline Instance random_tiny_mucp(Rng& rng, int max_periods = 3) {
  MucpGenParams params;
  params.periods = static_cast<int>(rng.uniform(1, max_periods));
  params.unit_counts = {static_cast<int>(rng.uniform(2, 3))};
  if (params.unit_counts[0] == 2 && params.periods <= 2 && rng.coin()) params.unit_counts.push_back(1);
  const auto seed = static_cast<std::uint64_t>(rng.uniform(0, 1 << 30));
  return {"tiny-mucp-" + std::to_string(seed), gen_mucp(seed, params)};
}

inline Graph random_graph(Rng& rng, std::size_t n, int density_percent) {
  Graph g{n, {}};
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      if (rng.uniform(0, 99) < density_percent) g.edges.push_back({a, b});
  return g;
}

inline Instance random_tiny_mkcs(Rng& rng) {
  const auto k = static_cast<int>(rng.uniform(2, 3));
  const auto n = static_cast<std::size_t>(rng.uniform(2, k == 2 ? 6 : 4));
  return {"tiny-mkcs", MkcsData{random_graph(rng, n, 50), k}};
}

/// Oracle optimum of the plain formulation of `instance`.
inline std::optional<Rational> oracle_optimum(const Instance& instance) {
  const auto program = build(instance);
  return best_objective(program, enumerate_feasible(program));
}

inline SolverConfig quick_config(Setting setting) {
  SolverConfig config;
  config.setting = std::string(to_string(setting));
  config.time_limit_s = 600;
  return config;
}

}  // namespace subsym::testing
