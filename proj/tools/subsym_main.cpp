// subsym: generate instances, solve them, run settings matrices, summarize.

#include "subsym/bench.hpp"
#include "subsym/instances.hpp"
#include "subsym/settings.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

namespace fs = std::filesystem;
using namespace subsym;

namespace {

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

struct SolverFlags {
  double time_limit = 3600;
  long node_limit = -1;
  std::uint64_t seed = 0;
  double eps_feas = 1e-7, eps_opt = 1e-7, eps_int = 1e-6;
  std::string selection = "best-first";
  bool rounding = false;
  bool mkp_partitioning = false;
  int colors = 0;

  void attach(CLI::App* app) {
    app->add_option("--time-limit", time_limit, "Wall-clock limit per solve (s)");
    app->add_option("--node-limit", node_limit, "Node limit per solve (negative: none)");
    app->add_option("--seed", seed, "Recorded with every result");
    app->add_option("--eps-feas", eps_feas);
    app->add_option("--eps-opt", eps_opt);
    app->add_option("--eps-int", eps_int);
    app->add_option("--selection", selection)->check(CLI::IsMember({"best-first", "depth-first"}));
    app->add_flag("--rounding", rounding, "LP rounding heuristic");
    app->add_flag("--mkp-partitioning", mkp_partitioning,
                  "Partitioning fixing when all knapsacks tie");
    app->add_option("-k,--colors", colors, "Colors for DIMACS graphs");
  }

  SolverConfig config() const {
    SolverConfig c;
    c.time_limit_s = time_limit;
    c.node_limit = node_limit;
    c.random_seed = seed;
    c.eps_feas = eps_feas;
    c.eps_opt = eps_opt;
    c.eps_int = eps_int;
    c.selection = selection == "depth-first" ? NodeSelection::depth_first : NodeSelection::best_first;
    c.rounding_heuristic = rounding;
    return c;
  }
};

std::vector<Setting> parse_settings(const std::vector<std::string>& names) {
  std::vector<Setting> out;
  for (const auto& n : names) out.push_back(parse_setting(n));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Branch-and-bound with sub-symmetry activation handlers"};
  app.require_subcommand(1);

  // gen -----------------------------------------------------------------------
  auto* gen = app.add_subcommand("gen", "Generate instances and a manifest");
  gen->require_subcommand(1);
  std::uint64_t gen_seed = 1;
  int gen_count = 1;
  std::string gen_out = ".";

  auto* gen_mkp_cmd = gen->add_subcommand("mkp", "Multiple knapsack instances");
  std::size_t mkp_m = 20, mkp_n = 4;
  std::string mkp_class = "uncorrelated", mkp_profit = "equal";
  double mkp_f = 0.5;
  gen_mkp_cmd->add_option("--m", mkp_m, "Items")->check(CLI::PositiveNumber);
  gen_mkp_cmd->add_option("--n", mkp_n, "Knapsacks")->check(CLI::PositiveNumber);
  gen_mkp_cmd->add_option("--class", mkp_class)
      ->check(CLI::IsMember({"uncorrelated", "weakly", "strongly", "subset_sum"}));
  gen_mkp_cmd->add_option("--f", mkp_f, "Symmetry factor")->check(CLI::Range(0.0, 1.0));
  gen_mkp_cmd->add_option("--profit-mode", mkp_profit)->check(CLI::IsMember({"equal", "free"}));

  auto* gen_mucp_cmd = gen->add_subcommand("mucp", "Unit commitment instances");
  int mucp_periods = 4;
  std::vector<int> mucp_units{2};
  gen_mucp_cmd->add_option("--periods", mucp_periods)->check(CLI::PositiveNumber);
  gen_mucp_cmd->add_option("--units", mucp_units, "Units per type")->delimiter(',');

  for (auto* cmd : {gen_mkp_cmd, gen_mucp_cmd}) {
    cmd->add_option("--seed", gen_seed, "First seed");
    cmd->add_option("--count", gen_count, "Instances (seeds seed, seed+1, ...)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("-o,--out", gen_out, "Output directory");
  }

  // solve ---------------------------------------------------------------------
  auto* solve_cmd = app.add_subcommand("solve", "Solve one instance");
  std::string solve_path, solve_setting = "act";
  SolverFlags solve_flags;
  solve_cmd->add_option("instance", solve_path)->required()->check(CLI::ExistingFile);
  solve_cmd->add_option("--setting", solve_setting);
  solve_flags.attach(solve_cmd);

  // bench ---------------------------------------------------------------------
  auto* bench_cmd = app.add_subcommand("bench", "Solve instances under several settings");
  std::vector<std::string> bench_paths, bench_settings;
  std::string bench_out;
  int bench_workers = 1;
  SolverFlags bench_flags;
  bench_cmd->add_option("instances", bench_paths)->required();
  bench_cmd->add_option("--settings", bench_settings, "Default: all supported")->delimiter(',');
  bench_cmd->add_option("-j,--workers", bench_workers, "Concurrent solves")
      ->check(CLI::PositiveNumber);
  bench_cmd->add_option("-o,--out", bench_out, "CSV file (default: stdout)");
  bench_flags.attach(bench_cmd);

  // summarize -----------------------------------------------------------------
  auto* sum_cmd = app.add_subcommand("summarize", "Shifted-geometric-mean tables");
  std::string sum_path;
  std::vector<std::string> sum_bounds{"0", "inf"};
  double sum_shift = 1.0;
  sum_cmd->add_option("csv", sum_path)->required()->check(CLI::ExistingFile);
  sum_cmd->add_option("--bounds", sum_bounds, "Class bounds, e.g. 0,10,100,inf")->delimiter(',');
  sum_cmd->add_option("--shift", sum_shift);

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen_mkp_cmd->parsed() || gen_mucp_cmd->parsed()) {
      fs::create_directories(gen_out);
      nlohmann::ordered_json manifest;
      manifest["format_version"] = kInstanceFormatVersion;
      manifest["seed"] = gen_seed;
      manifest["count"] = gen_count;
      nlohmann::ordered_json files = nlohmann::ordered_json::array();
      for (int i = 0; i < gen_count; ++i) {
        const std::uint64_t seed = gen_seed + static_cast<std::uint64_t>(i);
        std::string name, text;
        if (gen_mkp_cmd->parsed()) {
          const auto data = gen_mkp(seed, mkp_m, mkp_n, parse_mkp_class(mkp_class), mkp_f,
                                    parse_profit_mode(mkp_profit));
          name = "mkp-" + mkp_class + "-m" + std::to_string(mkp_m) + "-n" +
                 std::to_string(mkp_n) + "-s" + std::to_string(seed);
          text = mkp_to_json(data, name);
        } else {
          const auto data = gen_mucp(seed, {mucp_periods, mucp_units});
          name = "mucp-T" + std::to_string(mucp_periods) + "-s" + std::to_string(seed);
          text = mucp_to_json(data, name);
        }
        write_file(fs::path(gen_out) / (name + ".json"), text);
        files.push_back(name + ".json");
      }
      if (gen_mkp_cmd->parsed()) {
        manifest["generator"] = "mkp";
        manifest["parameters"] = {{"m", mkp_m},         {"n", mkp_n},
                                  {"class", mkp_class}, {"f", mkp_f},
                                  {"profit_mode", mkp_profit}};
      } else {
        manifest["generator"] = "mucp";
        manifest["parameters"] = {{"periods", mucp_periods}, {"units", mucp_units}};
      }
      manifest["files"] = std::move(files);
      write_file(fs::path(gen_out) / "manifest.json", manifest.dump(1) + "\n");
      std::cout << "wrote " << gen_count << " instances to " << gen_out << "\n";
      return 0;
    }

    if (solve_cmd->parsed()) {
      const Instance instance = load_instance(solve_path, solve_flags.colors);
      FormulateOptions fo;
      fo.mkp_partitioning = solve_flags.mkp_partitioning;
      const Setting setting = parse_setting(solve_setting);
      const Formulation f = formulate(instance, setting, fo);
      SolverConfig config = solve_flags.config();
      config.setting = std::string(to_string(setting));
      const SolveReport report = solve(f.program, config, f.plugins);
      std::cout << "instance  " << instance.name << "\n"
                << "setting   " << report.setting << "\n"
                << "status    " << to_string(report.status) << "\n"
                << "objective " << (report.objective ? to_string(*report.objective) : "-") << "\n"
                << "nodes     " << report.nodes << "\n"
                << "time_s    " << report.time_s << "\n";
      return 0;
    }

    if (bench_cmd->parsed()) {
      BenchOptions options;
      options.settings = parse_settings(bench_settings);
      options.config = bench_flags.config();
      options.formulate.mkp_partitioning = bench_flags.mkp_partitioning;
      options.workers = bench_workers;
      std::vector<BenchJob> jobs;
      for (const auto& p : bench_paths) jobs.push_back({p, bench_flags.colors});
      const std::string csv = write_csv(run_bench(jobs, options));
      if (bench_out.empty()) {
        std::cout << csv;
      } else {
        write_file(bench_out, csv);
      }
      return 0;
    }

    if (sum_cmd->parsed()) {
      std::vector<double> bounds;
      for (const auto& b : sum_bounds) {
        bounds.push_back(b == "inf" ? std::numeric_limits<double>::infinity() : std::stod(b));
      }
      std::cout << format_summary(summarize(read_csv(read_file(sum_path)), bounds, sum_shift));
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
