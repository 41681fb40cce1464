#pragma once

#include "subsym/engine.hpp"
#include "subsym/settings.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace subsym {

/// One CSV row: instance, setting, status, objective, nodes, time_s, seed.
struct BenchRow {
  std::string instance;
  std::string setting;
  SolveStatus status = SolveStatus::error;
  std::optional<Rational> objective;
  long nodes = 0;
  double time_s = 0;
  std::uint64_t seed = 0;

  friend bool operator==(const BenchRow&, const BenchRow&) = default;
};

struct BenchJob {
  std::string path;
  int colors = 0;  // for DIMACS graphs
};

struct BenchOptions {
  /// Empty: every setting the instance's problem class supports.
  std::vector<Setting> settings;
  /// Template for every solve; `setting` is overwritten per row.
  SolverConfig config;
  FormulateOptions formulate;
  int workers = 1;
};

/// Solves every (instance, setting) pair. Rows come out in job order, then
/// setting order, whatever the number of workers. An instance that cannot
/// be loaded or a setting its class does not support yields a row with
/// status error. Time-limited solves report the limit as their time.
std::vector<BenchRow> run_bench(const std::vector<BenchJob>& jobs, const BenchOptions& options);

/// Same rows, computed one after another on the calling thread.
std::vector<BenchRow> run_bench_serial(const std::vector<BenchJob>& jobs,
                                       const BenchOptions& options);

BenchRow solve_row(const BenchJob& job, Setting setting, const BenchOptions& options);

inline constexpr const char* kCsvHeader = "instance,setting,status,objective,nodes,time_s,seed";

std::string write_csv(const std::vector<BenchRow>& rows);
/// Throws std::invalid_argument (with the line number) on malformed input.
std::vector<BenchRow> read_csv(std::string_view text);

/// exp(mean(ln(t + shift))) - shift; 0 for an empty range.
double shifted_geometric_mean(std::span<const double> times, double shift = 1.0);

struct SettingStats {
  std::string setting;
  long solved = 0;  // optimal or proven infeasible
  double mean_time = 0;
};

struct SummaryRow {
  std::string label;  // "All" or "[a,b)"
  long instances = 0;
  std::vector<SettingStats> settings;
};

struct Summary {
  std::vector<std::string> settings;
  std::vector<SummaryRow> rows;
  long excluded = 0;  // every setting hit the time limit
};

/// Groups rows by instance. Instances on which every setting reached the
/// time limit are excluded. The remaining ones form the "All" row and are
/// split into classes [bounds[k], bounds[k+1]) by their largest time over
/// the settings (the last class is open when the final bound is infinite).
/// Empty classes are omitted.
Summary summarize(const std::vector<BenchRow>& rows, const std::vector<double>& bounds,
                  double shift = 1.0);

std::string format_summary(const Summary& summary);

}  // namespace subsym
