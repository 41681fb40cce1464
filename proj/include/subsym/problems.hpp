#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace subsym {

/// Multiple knapsack: item i has weight/profit, knapsack j a capacity.
struct MkpData {
  std::vector<std::int64_t> weights;
  std::vector<std::int64_t> profits;
  std::vector<std::int64_t> capacities;

  std::size_t items() const { return weights.size(); }
  std::size_t knapsacks() const { return capacities.size(); }
};

/// A class of identical production units.
struct MucpUnitType {
  int count = 1;
  std::int64_t p_min = 1;
  std::int64_t p_max = 1;
  int min_up = 1;    // L
  int min_down = 1;  // l
  std::int64_t startup_cost = 0;
  std::int64_t fixed_cost = 0;
  std::int64_t production_cost = 0;
};

/// Min-up/min-down unit commitment over periods 1..T.
struct MucpData {
  int periods = 1;
  std::vector<std::int64_t> demand;  // one per period
  std::vector<MucpUnitType> types;
};

struct Graph {
  std::size_t vertices = 0;
  std::vector<std::pair<std::size_t, std::size_t>> edges;  // 0-based, u < v

  std::vector<std::vector<std::size_t>> adjacency() const;
};

/// Max k-colorable subgraph.
struct MkcsData {
  Graph graph;
  int colors = 1;
};

// Matrix labels used by the builders.
inline constexpr const char* kKnapsackMatrix = "y";
inline constexpr const char* kColorMatrix = "x";
std::string item_group_label(std::size_t group);
std::string unit_type_label(std::size_t type);

}  // namespace subsym
