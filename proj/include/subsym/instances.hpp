#pragma once

#include "subsym/model.hpp"
#include "subsym/problems.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace subsym {

inline constexpr int kInstanceFormatVersion = 1;

// --- Generators --------------------------------------------------------------

enum class MkpClass { uncorrelated, weakly, strongly, subset_sum };
enum class ProfitMode { equal, free };

std::string_view to_string(MkpClass item_class);
MkpClass parse_mkp_class(std::string_view text);
std::string_view to_string(ProfitMode mode);
ProfitMode parse_profit_mode(std::string_view text);

/// Weights come in groups of identical items: a weight w ~ U[10,1000] is
/// repeated d ~ U[1, max(1, floor(f*m))] times, the last group cut at m
/// items. Profits by class (spread 99):
///   uncorrelated U[10,1000], weakly U[max(1,w-99), w+99], strongly w+99,
///   subset_sum w.
/// With ProfitMode::equal one profit is drawn per group, otherwise per item.
/// Every knapsack gets floor(sum w / (2n)).
/// Streams of SplitMix64(seed): 1 weights, 2 group sizes, 3 profits.
MkpData gen_mkp(std::uint64_t seed, std::size_t m, std::size_t n, MkpClass item_class,
                double f, ProfitMode profit_mode);

struct MucpGenParams {
  int periods = 4;
  std::vector<int> unit_counts;  // units per type; at least one entry >= 2
};

/// Per type: p_min ~ U[10,50], p_max = p_min + U[10,100],
/// min_up, min_down ~ U[1, min(T,4)], startup U[50,500], fixed U[10,100],
/// production U[1,10]. Demand D_t ~ U[ceil(0.3 P), floor(0.8 P)] with
/// P = sum of count * p_max, so every instance is feasible.
/// Streams of SplitMix64(seed): 1 unit types, 2 demand.
MucpData gen_mucp(std::uint64_t seed, const MucpGenParams& params);

// --- Builders ----------------------------------------------------------------

/// max sum p_i y_ij  s.t.  sum_i w_i y_ij <= c_j,  sum_j y_ij <= 1.
/// Variables y[i,j] are declared knapsack-major. Declares the packing matrix
/// "y" (items x knapsacks) and, for every group of >= 2 items with equal
/// weight and profit, a full matrix "items[g]" (knapsacks x group items).
MixedBinaryProgram build_mkp(const MkpData& data, std::string name = "mkp");

/// Declares per type h the full matrix "x[h]" (periods x units) with the
/// start-up grid linked to it.
MixedBinaryProgram build_mucp(const MucpData& data, std::string name = "mucp");

/// max sum x_ir  s.t.  sum_r x_ir <= 1,  x_ir + x_jr <= 1 for edges ij.
/// Declares the packing matrix "x" (vertices x colors).
MixedBinaryProgram build_mkcs(const MkcsData& data, std::string name = "mkcs");

// --- Files -------------------------------------------------------------------

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct DimacsGraph {
  Graph graph;
  std::vector<std::string> warnings;  // dropped self loops and duplicate edges
};

DimacsGraph parse_dimacs(std::string_view text);
std::string write_dimacs(const Graph& graph, std::string_view comment = {});

std::string mkp_to_json(const MkpData& data, std::string_view name);
MkpData mkp_from_json(std::string_view text);
std::string mucp_to_json(const MucpData& data, std::string_view name);
MucpData mucp_from_json(std::string_view text);

struct Instance {
  std::string name;
  std::variant<MkpData, MucpData, MkcsData> data;
};

/// Loads a .json (MKP or MUCP, chosen by its "format") or a DIMACS .col file;
/// `colors` is required for .col files.
Instance load_instance(const std::string& path, int colors = 0);

MixedBinaryProgram build(const Instance& instance);

}  // namespace subsym
