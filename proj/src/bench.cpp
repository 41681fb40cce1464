#include "subsym/bench.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <limits>
#include <map>
#include <set>
#include <sstream>

namespace subsym {

namespace {

std::string job_name(const BenchJob& job) {
  std::string stem = job.path.substr(job.path.find_last_of('/') + 1);
  if (const auto dot = stem.find_last_of('.'); dot != std::string::npos) stem.resize(dot);
  return stem;
}

// (job, setting) pairs in output order; settings of unloadable instances
// fall back to the explicit list or a single error row.
struct Task {
  std::size_t job;
  std::optional<Setting> setting;
};

std::vector<Task> plan(const std::vector<BenchJob>& jobs, const BenchOptions& options) {
  std::vector<Task> tasks;
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    std::vector<Setting> settings = options.settings;
    if (settings.empty()) {
      try {
        settings = supported_settings(load_instance(jobs[j].path, jobs[j].colors));
      } catch (const std::exception&) {
        tasks.push_back({j, std::nullopt});
        continue;
      }
    }
    for (Setting s : settings) tasks.push_back({j, s});
  }
  return tasks;
}

BenchRow run_task(const std::vector<BenchJob>& jobs, const Task& task,
                  const BenchOptions& options) {
  if (task.setting) return solve_row(jobs[task.job], *task.setting, options);
  BenchRow row;
  row.instance = job_name(jobs[task.job]);
  row.setting = "-";
  row.seed = options.config.random_seed;
  return row;
}

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> split_csv_line(const std::string& line, std::size_t number) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back() += c;
    }
  }
  if (quoted) throw std::invalid_argument("csv line " + std::to_string(number) + ": open quote");
  return fields;
}

std::string format_bound(double b) {
  if (std::isinf(b)) return "inf";
  std::ostringstream out;
  out << b;
  return out.str();
}

int setting_rank(const std::string& name) {
  try {
    return static_cast<int>(parse_setting(name));
  } catch (const std::invalid_argument&) {
    return std::numeric_limits<int>::max();
  }
}

}  // namespace

BenchRow solve_row(const BenchJob& job, Setting setting, const BenchOptions& options) {
  BenchRow row;
  row.instance = job_name(job);
  row.setting = std::string(to_string(setting));
  row.seed = options.config.random_seed;
  try {
    const Instance instance = load_instance(job.path, job.colors);
    row.instance = instance.name;
    const Formulation f = formulate(instance, setting, options.formulate);
    SolverConfig config = options.config;
    config.setting = row.setting;
    const SolveReport report = solve(f.program, config, f.plugins);
    row.status = report.status;
    row.objective = report.objective;
    row.nodes = report.nodes;
    row.time_s = report.status == SolveStatus::time_limit ? config.time_limit_s : report.time_s;
  } catch (const std::exception&) {
    row.status = SolveStatus::error;
  }
  return row;
}

std::vector<BenchRow> run_bench(const std::vector<BenchJob>& jobs, const BenchOptions& options) {
  const auto tasks = plan(jobs, options);
  std::vector<BenchRow> rows(tasks.size());
  const int workers = std::max(1, options.workers);
#pragma omp parallel for schedule(dynamic) num_threads(workers)
  for (std::size_t t = 0; t < tasks.size(); ++t) rows[t] = run_task(jobs, tasks[t], options);
  return rows;
}

std::vector<BenchRow> run_bench_serial(const std::vector<BenchJob>& jobs,
                                       const BenchOptions& options) {
  std::vector<BenchRow> rows;
  for (const auto& task : plan(jobs, options)) rows.push_back(run_task(jobs, task, options));
  return rows;
}

std::string write_csv(const std::vector<BenchRow>& rows) {
  std::ostringstream out;
  out << kCsvHeader << '\n';
  for (const auto& r : rows) {
    char time[32];
    std::snprintf(time, sizeof time, "%.6f", r.time_s);
    out << csv_field(r.instance) << ',' << csv_field(r.setting) << ',' << to_string(r.status) << ','
        << (r.objective ? to_string(*r.objective) : "") << ',' << r.nodes << ',' << time << ','
        << r.seed << '\n';
  }
  return out.str();
}

std::vector<BenchRow> read_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t number = 0;
  auto fail = [&](const std::string& what) {
    return std::invalid_argument("csv line " + std::to_string(number) + ": " + what);
  };
  if (!std::getline(in, line)) throw std::invalid_argument("csv: missing header");
  ++number;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader) throw fail("unexpected header");
  std::vector<BenchRow> rows;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split_csv_line(line, number);
    if (f.size() != 7) throw fail("expected 7 fields");
    BenchRow row;
    row.instance = f[0];
    row.setting = f[1];
    try {
      row.status = parse_solve_status(f[2]);
      if (!f[3].empty()) row.objective = parse_rational(f[3]);
      std::size_t used = 0;
      row.nodes = std::stol(f[4], &used);
      if (used != f[4].size()) throw fail("bad node count");
      row.time_s = std::stod(f[5], &used);
      if (used != f[5].size() || row.time_s < 0) throw fail("bad time");
      row.seed = std::stoull(f[6], &used);
      if (used != f[6].size()) throw fail("bad seed");
    } catch (const std::invalid_argument& e) {
      throw fail(e.what());
    } catch (const std::out_of_range&) {
      throw fail("number out of range");
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

double shifted_geometric_mean(std::span<const double> times, double shift) {
  if (times.empty()) return 0;
  double sum = 0;
  for (double t : times) sum += std::log(t + shift);
  return std::exp(sum / double(times.size())) - shift;
}

Summary summarize(const std::vector<BenchRow>& rows, const std::vector<double>& bounds,
                  double shift) {
  std::set<std::string> setting_names;
  std::map<std::string, std::map<std::string, const BenchRow*>> by_instance;
  for (const auto& r : rows) {
    if (r.status == SolveStatus::error) continue;
    setting_names.insert(r.setting);
    by_instance[r.instance][r.setting] = &r;
  }
  Summary summary;
  summary.settings.assign(setting_names.begin(), setting_names.end());
  std::stable_sort(summary.settings.begin(), summary.settings.end(),
                   [](const std::string& a, const std::string& b) {
                     return setting_rank(a) < setting_rank(b);
                   });

  struct Kept {
    double max_time;
    const std::map<std::string, const BenchRow*>* rows;
  };
  std::vector<Kept> kept;
  for (const auto& [name, settings] : by_instance) {
    bool all_limit = true;
    double max_time = 0;
    for (const auto& [s, r] : settings) {
      all_limit &= r->status == SolveStatus::time_limit;
      max_time = std::max(max_time, r->time_s);
    }
    if (all_limit) {
      ++summary.excluded;
      continue;
    }
    kept.push_back({max_time, &settings});
  }

  auto make_row = [&](std::string label, const std::vector<const Kept*>& members) {
    SummaryRow row;
    row.label = std::move(label);
    row.instances = static_cast<long>(members.size());
    for (const auto& s : summary.settings) {
      SettingStats stats{s, 0, 0};
      std::vector<double> times;
      for (const Kept* k : members) {
        const auto it = k->rows->find(s);
        if (it == k->rows->end()) continue;
        const BenchRow& r = *it->second;
        if (r.status == SolveStatus::optimal || r.status == SolveStatus::infeasible) ++stats.solved;
        times.push_back(r.time_s);
      }
      stats.mean_time = shifted_geometric_mean(times, shift);
      row.settings.push_back(std::move(stats));
    }
    return row;
  };

  std::vector<const Kept*> all;
  for (const auto& k : kept) all.push_back(&k);
  if (!all.empty()) summary.rows.push_back(make_row("All", all));
  for (std::size_t c = 0; c + 1 < bounds.size(); ++c) {
    const double lo = bounds[c], hi = bounds[c + 1];
    std::vector<const Kept*> members;
    for (const auto& k : kept) {
      if (k.max_time >= lo && k.max_time < hi) members.push_back(&k);
    }
    if (members.empty()) continue;
    summary.rows.push_back(
        make_row("[" + format_bound(lo) + "," + format_bound(hi) + ")", members));
  }
  return summary;
}

std::string format_summary(const Summary& summary) {
  std::ostringstream out;
  std::vector<int> widths;
  for (const auto& s : summary.settings) widths.push_back(std::max<int>(14, int(s.size()) + 2));
  out << std::left << std::setw(16) << "class" << std::right << std::setw(6) << "";
  for (std::size_t k = 0; k < widths.size(); ++k)
    out << std::setw(6 + widths[k]) << summary.settings[k];
  out << '\n' << std::left << std::setw(16) << "" << std::right << std::setw(6) << "#";
  for (const int w : widths) out << std::setw(6) << "opt" << std::setw(w) << "time";
  out << '\n' << std::fixed << std::setprecision(1);
  for (const auto& row : summary.rows) {
    out << std::left << std::setw(16) << row.label << std::right << std::setw(6) << row.instances;
    for (std::size_t k = 0; k < row.settings.size(); ++k)
      out << std::setw(6) << row.settings[k].solved << std::setw(widths[k]) << row.settings[k].mean_time;
    out << '\n';
  }
  out << "excluded (all settings at the time limit): " << summary.excluded << '\n';
  return out.str();
}

}  // namespace subsym
