// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.

#include "subsym/bench.hpp"

#include "support.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>

using namespace subsym;
using namespace subsym::testing;

namespace {

// Pinned tolerances and budgets.
constexpr double kMeanTolerance = 1e-9;
constexpr double kNodeRatio = 0.5;
constexpr long kBenefitNodeLimit = 20000;
constexpr std::size_t kSurvivorBinaryCap = 22;
constexpr double kMinutes = 60.0;

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* format, auto... args) {
  char buffer[512];
  std::snprintf(buffer, sizeof buffer, format, args...);
  return buffer;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

const MkpClass kClasses[] = {MkpClass::uncorrelated, MkpClass::weakly, MkpClass::strongly,
                             MkpClass::subset_sum};

// --- 1 ---------------------------------------------------------------------

Outcome oracle_optimality() {
  Outcome out;
  const int count = 320;
  long solves = 0, mismatches = 0;
  std::string first;
  for (int k = 0; k < count; ++k) {
    const auto cls = kClasses[k % 4];
    const double f = (k / 4) % 2 ? 0.25 : 0.5;
    const std::size_t m = 1 + static_cast<std::size_t>((k * 7 + k / 8) % 8);
    const std::size_t n = 1 + static_cast<std::size_t>((k / 8) % 3);
    const auto mode = (k / 24) % 2 ? ProfitMode::free : ProfitMode::equal;
    const Instance inst{"acc1-" + std::to_string(k), gen_mkp(5000 + k, m, n, cls, f, mode)};
    const auto expected = oracle_optimum(inst);
    for (auto s : supported_settings(inst)) {
      const auto form = formulate(inst, s);
      const auto r = solve(form.program, quick_config(s), form.plugins);
      ++solves;
      if (r.status != SolveStatus::optimal || r.objective != expected) {
        ++mismatches;
        if (first.empty()) first = inst.name + " " + std::string(to_string(s));
      }
    }
  }
  out.pass = mismatches == 0;
  out.detail = fmt("%d instances, %ld solves, %ld mismatches", count, solves, mismatches);
  if (!first.empty()) out.detail += ", first " + first;
  return out;
}

// --- 2 ---------------------------------------------------------------------

Outcome propagator_exactness() {
  Outcome out;
  long grids = 0, mismatches = 0;
  for (std::size_t m = 1; m <= 9; ++m) {
    for (std::size_t n = 1; m * n <= 9; ++n) {
      std::uint32_t total = 1;
      for (std::size_t k = 0; k < m * n; ++k) total *= 3;
      for (auto kind : {OrbitopeKind::full, OrbitopeKind::packing, OrbitopeKind::partitioning}) {
        for (std::uint32_t code = 0; code < total; ++code) {
          DomainGrid g(m, n);
          std::uint32_t c = code;
          for (auto& cell : g.cells) {
            cell = static_cast<Domain>(c % 3);
            c /= 3;
          }
          ++grids;
          const auto got = propagate_orbitope(g, kind);
          const auto want = forced_cells(g, kind);
          if (got.infeasible != want.infeasible ||
              (!got.infeasible && got.fixings != want.fixings)) {
            ++mismatches;
          }
        }
      }
    }
  }
  out.pass = mismatches == 0;
  out.detail = fmt("%ld grids, %ld mismatches", grids, mismatches);
  return out;
}

// --- 3 ---------------------------------------------------------------------

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void join(std::size_t a, std::size_t b) { parent_[find(a)] = find(b); }

 private:
  std::vector<std::size_t> parent_;
};

struct SurvivalTally {
  long instances = 0, classes = 0, lost_classes = 0;
  long group_orbits = 0, group_orbits_without_survivor = 0;
};

// Classes of the equivalence generated by the setting's global groups and by
// every sub-symmetry the handler reported during the enumeration; each class
// must keep a survivor. Orbits of single groups are tallied for reference.
void check_survival(const Instance& inst, Setting s, SurvivalTally& tally) {
  const auto plain = build(inst);
  const auto form = formulate(inst, s);
  if (form.program.num_binaries() > kSurvivorBinaryCap) return;
  const auto points = enumerate_feasible(plain);
  const auto bits = pattern_bits(plain);

  std::vector<std::pair<NodeState, Activation>> reported;
  std::set<std::pair<std::vector<std::int8_t>, std::vector<std::size_t>>> seen;
  const auto kept = enumerate_survivors(
      form.program, form.plugins, plain.num_binaries(),
      [&](const NodeState& node, const Activation& a) {
        std::vector<std::int8_t> fixed(node.fixed.begin(),
                                       node.fixed.begin() + std::ptrdiff_t(plain.variables.size()));
        std::vector<std::size_t> shape = a.target.rows;
        shape.push_back(std::numeric_limits<std::size_t>::max());
        shape.insert(shape.end(), a.target.cols.begin(), a.target.cols.end());
        shape.push_back(a.target.matrix);
        if (seen.insert({std::move(fixed), std::move(shape)}).second) reported.push_back({node, a});
      });
  const std::set<std::uint64_t> survivors(kept.begin(), kept.end());

  std::map<std::uint64_t, std::size_t> index;
  for (std::size_t k = 0; k < points.size(); ++k) index[points[k].pattern] = k;
  UnionFind classes(points.size());
  auto absorb = [&](const std::vector<Orbit>& orbits) {
    for (const auto& o : orbits) {
      ++tally.group_orbits;
      bool alive = false;
      for (auto member : o.members) {
        classes.join(index.at(member), index.at(o.members.front()));
        alive |= survivors.count(member) > 0;
      }
      if (!alive) ++tally.group_orbits_without_survivor;
    }
  };

  for (const auto& g : global_orbitopes(plain, inst)) absorb(enumerate_orbits(plain, points, g.target));

  for (const auto& [node, a] : reported) {
    std::set<std::uint64_t> completions;
    for (const auto& p : points) {
      bool match = true;
      for (std::size_t k = 0; k < plain.variables.size() && match; ++k) {
        if (bits[k] >= 0 && node.fixed[k] >= 0)
          match = int((p.pattern >> bits[k]) & 1U) == node.fixed[k];
      }
      if (match) completions.insert(p.pattern);
    }
    // The sub-symmetry acts on the node's subset: keep orbits that meet it.
    std::vector<Orbit> relevant;
    for (auto& o : enumerate_orbits(plain, points, a.target)) {
      if (std::any_of(o.members.begin(), o.members.end(),
                      [&](std::uint64_t m) { return completions.count(m) > 0; })) {
        relevant.push_back(std::move(o));
      }
    }
    absorb(relevant);
  }

  std::map<std::size_t, bool> alive;
  for (std::size_t k = 0; k < points.size(); ++k) {
    auto& flag = alive[classes.find(k)];
    flag = flag || survivors.count(points[k].pattern) > 0;
  }
  ++tally.instances;
  for (const auto& [root, ok] : alive) {
    ++tally.classes;
    if (!ok) ++tally.lost_classes;
  }
}

Outcome representative_survival() {
  Outcome out;
  Rng rng(303);
  std::map<std::string, SurvivalTally> tallies;
  for (int trial = 0; trial < 120; ++trial) {
    const Instance inst = trial % 3 == 0   ? random_tiny_mkp(rng, trial % 2 ? 3 : 4, 3)
                          : trial % 3 == 1 ? random_tiny_mucp(rng, 3)
                                           : random_tiny_mkcs(rng);
    for (auto s : supported_settings(inst)) {
      if (s == Setting::no_sym) continue;
      const std::string key =
          std::string(std::holds_alternative<MkpData>(inst.data)    ? "mkp/"
                      : std::holds_alternative<MucpData>(inst.data) ? "mucp/"
                                                                    : "mkcs/") +
          std::string(to_string(s));
      check_survival(inst, s, tallies[key]);
    }
  }
  long lost = 0, classes = 0, orbits = 0, bare = 0;
  bool coverage = true;
  for (const auto& [key, t] : tallies) {
    lost += t.lost_classes;
    classes += t.classes;
    orbits += t.group_orbits;
    bare += t.group_orbits_without_survivor;
    coverage &= t.instances >= 10;
  }
  out.pass = lost == 0 && coverage;
  out.detail = fmt("%zu problem/setting pairs, %ld classes, %ld without survivor; "
                   "single-group orbits without survivor %ld/%ld (not required)",
                   tallies.size(), classes, lost, bare, orbits);
  if (!coverage) out.detail += ", too few instances for some setting";
  return out;
}

// --- 4 ---------------------------------------------------------------------

Outcome shi_safety() {
  Outcome out;
  Rng rng(404);
  long mkp_checked = 0, mucp_checked = 0, changed = 0;
  for (int trial = 0; trial < 110; ++trial) {
    const auto inst = random_tiny_mkp(rng, 3, 3);
    const auto plain = build(inst);
    auto with = plain;
    add_mkp_shis(with, std::get<MkpData>(inst.data));
    ++mkp_checked;
    if (best_objective(with, enumerate_feasible(with)) !=
        best_objective(plain, enumerate_feasible(plain))) {
      ++changed;
    }
  }
  for (int trial = 0; trial < 110; ++trial) {
    const auto inst = random_tiny_mucp(rng, 3);
    const auto plain = build(inst);
    const auto expected = best_objective(plain, enumerate_feasible(plain));
    for (bool strengthened : {true, false}) {
      auto with = plain;
      add_mucp_shis(with, std::get<MucpData>(inst.data), strengthened);
      if (best_objective(with, enumerate_feasible(with)) != expected) ++changed;
    }
    ++mucp_checked;
  }

  // u_{3,2} <= x_{1,1} + x_{3,1} + u_{2,1} for min-down 2 at period 3.
  MucpUnitType type;
  type.count = 2;
  type.p_min = 10;
  type.p_max = 30;
  type.min_up = 1;
  type.min_down = 2;
  type.startup_cost = 100;
  type.fixed_cost = 20;
  type.production_cost = 3;
  const MucpData data{3, {15, 15, 15}, {type}};
  auto program = build_mucp(data);
  add_mucp_shis(program, data, true);
  const VarMatrix& x = program.matrices[0];
  const auto& u = x.linked[0];
  std::set<std::pair<std::uint32_t, Rational>> want{
      {u[2 * 2 + 1].index, 1}, {x.at(0, 0).index, -1}, {x.at(2, 0).index, -1}, {u[1 * 2 + 0].index, -1}};
  bool golden = false;
  for (const auto& c : program.constraints) {
    if (c.name != "shi_up[0,1,3]") continue;
    std::set<std::pair<std::uint32_t, Rational>> got;
    for (const auto& t : c.terms) got.insert({t.var.index, t.coeff});
    golden = got == want && !c.lower && c.upper && *c.upper == 0;
  }
  out.pass = changed == 0 && golden && mkp_checked >= 100 && mucp_checked >= 100;
  out.detail = fmt("%ld MKP + %ld MUCP instances, %ld optimum changes, golden constraint %s",
                   mkp_checked, mucp_checked, changed, golden ? "matches" : "differs");
  return out;
}

// --- 5 ---------------------------------------------------------------------

Outcome handler_soundness() {
  Outcome out;
  Rng rng(505);
  long activations = 0, violations = 0, instances = 0;
  std::set<std::pair<long, std::vector<std::int8_t>>> nodes;
  std::string first;
  for (long trial = 0; trial < 600 && (nodes.size() < 1500 || instances < 90); ++trial) {
    const Instance inst = trial % 3 == 0   ? random_tiny_mkp(rng, 5, 3)
                          : trial % 3 == 1 ? random_tiny_mucp(rng, 3)
                                           : random_tiny_mkcs(rng);
    const std::vector<Setting> settings =
        std::holds_alternative<MkcsData>(inst.data)
            ? std::vector<Setting>{Setting::act_consec, Setting::act_allpairs}
            : std::vector<Setting>{Setting::act};
    for (auto s : settings) {
      const auto form = formulate(inst, s);
      if (form.program.num_binaries() > 20) continue;
      ++instances;
      const auto points = enumerate_feasible(form.program);
      auto check = [&](const NodeState& node, const Activation& a) {
        ++activations;
        nodes.insert({trial * 8 + long(s), node.fixed});
        if (auto v = activation_violation(form.program, points, node, a)) {
          ++violations;
          if (first.empty()) first = inst.name + ": " + *v;
        }
      };
      for (auto selection : {NodeSelection::best_first, NodeSelection::depth_first}) {
        SolverConfig config = quick_config(s);
        config.selection = selection;
        config.on_activation = check;
        solve(form.program, config, form.plugins);
      }
      enumerate_survivors(form.program, form.plugins, form.program.num_binaries(), check);
    }
  }
  out.pass = violations == 0 && nodes.size() >= 1000;
  out.detail = fmt("%ld instances, %zu distinct nodes, %ld activations checked, %ld violations",
                   instances, nodes.size(), activations, violations);
  if (!first.empty()) out.detail += ", first " + first;
  return out;
}

// --- 6 ---------------------------------------------------------------------

double median(std::vector<long> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? double(v[n / 2]) : (double(v[n / 2 - 1]) + double(v[n / 2])) / 2;
}

Outcome symmetry_benefit() {
  Outcome out;
  std::map<Setting, std::vector<long>> nodes;
  long capped = 0;
  for (int k = 0; k < 50; ++k) {
    const Instance inst{"acc6-" + std::to_string(k),
                        gen_mkp(1000 + k, 20, 4, kClasses[k % 4], 0.5, ProfitMode::equal)};
    for (auto s : {Setting::no_sym, Setting::orbitope, Setting::act}) {
      const auto form = formulate(inst, s);
      SolverConfig config = quick_config(s);
      config.node_limit = kBenefitNodeLimit;
      const auto r = solve(form.program, config, form.plugins);
      if (r.status == SolveStatus::node_limit) ++capped;
      nodes[s].push_back(r.nodes);
    }
  }
  const double none = median(nodes[Setting::no_sym]);
  const double orb = median(nodes[Setting::orbitope]);
  const double act = median(nodes[Setting::act]);
  out.pass = act <= orb && orb <= none && act <= kNodeRatio * none;
  out.detail = fmt("median nodes act %.1f, orbitope %.1f, no-sym %.1f (ratio %.4f); "
                   "%ld of 150 solves stopped at %ld nodes",
                   act, orb, none, act / none, capped, kBenefitNodeLimit);
  return out;
}

// --- 7 ---------------------------------------------------------------------

BenchRow bench_row(std::string inst, std::string setting, SolveStatus status, double time) {
  BenchRow r;
  r.instance = std::move(inst);
  r.setting = std::move(setting);
  r.status = status;
  r.time_s = time;
  return r;
}

Outcome protocol_fidelity() {
  Outcome out;
  std::vector<std::string> failures;
  auto expect = [&](bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  };
  auto close = [](double a, double b) { return std::abs(a - b) <= kMeanTolerance; };
  expect(close(shifted_geometric_mean(std::vector<double>{3.25}), 3.25), "single");
  expect(close(shifted_geometric_mean(std::vector<double>{0, 0}), 0), "zeros");
  expect(close(shifted_geometric_mean(std::vector<double>{1, 3}), 2 * std::sqrt(2.0) - 1), "[1,3]");

  using S = SolveStatus;
  const std::vector<BenchRow> rows{
      bench_row("i1", "no-sym", S::optimal, 2),      bench_row("i1", "act", S::optimal, 1),
      bench_row("i2", "no-sym", S::time_limit, 100), bench_row("i2", "act", S::optimal, 50),
      bench_row("i3", "no-sym", S::time_limit, 100), bench_row("i3", "act", S::time_limit, 100),
      bench_row("i4", "no-sym", S::optimal, 20),     bench_row("i4", "act", S::infeasible, 5),
      bench_row("i5", "no-sym", S::node_limit, 3),   bench_row("i5", "act", S::optimal, 7),
  };
  const auto s = summarize(read_csv(write_csv(rows)),
                           {0, 10, 100, std::numeric_limits<double>::infinity()});
  struct Expected {
    std::string label;
    long instances;
    long solved_none, solved_act;
    double mean_none, mean_act;
  };
  const std::vector<Expected> table{
      {"All", 4, 2, 4, std::pow(3.0 * 101 * 21 * 4, 0.25) - 1, std::pow(2.0 * 51 * 6 * 8, 0.25) - 1},
      {"[0,10)", 2, 1, 2, std::sqrt(12.0) - 1, 3},
      {"[10,100)", 1, 1, 1, 20, 5},
      {"[100,inf)", 1, 0, 1, 100, 50},
  };
  expect(s.excluded == 1, "excluded count");
  expect(s.settings == std::vector<std::string>{"no-sym", "act"}, "setting order");
  expect(s.rows.size() == table.size(), "class count");
  for (std::size_t k = 0; k < std::min(s.rows.size(), table.size()); ++k) {
    const auto& got = s.rows[k];
    const auto& want = table[k];
    const bool ok = got.label == want.label && got.instances == want.instances &&
                    got.settings.size() == 2 && got.settings[0].solved == want.solved_none &&
                    got.settings[1].solved == want.solved_act &&
                    close(got.settings[0].mean_time, want.mean_none) &&
                    close(got.settings[1].mean_time, want.mean_act);
    expect(ok, "row " + want.label);
  }
  out.pass = failures.empty();
  out.detail = fmt("3 mean examples, %zu class rows checked", table.size());
  for (const auto& f : failures) out.detail += ", failed " + f;
  return out;
}

// --- 8 ---------------------------------------------------------------------

Outcome mkcs_sanity() {
  Outcome out;
  std::vector<std::string> failures;
  const Graph g = petersen();
  std::string optima;
  for (int k : {2, 3}) {
    const long expected = brute_force_mkcs(g, k);
    optima += fmt(" k=%d:%ld", k, expected);
    const Instance inst{"petersen", MkcsData{g, k}};
    for (auto s : supported_settings(inst)) {
      const auto form = formulate(inst, s);
      const auto r = solve(form.program, quick_config(s), form.plugins);
      if (r.status != SolveStatus::optimal || r.objective != Rational(expected)) {
        failures.push_back(fmt("k=%d %s", k, std::string(to_string(s)).c_str()));
      }
    }
  }
  auto strip = [](const std::string& text) {
    std::istringstream in(text);
    std::string line, kept;
    while (std::getline(in, line))
      if (line.rfind("c", 0) != 0) kept += line + "\n";
    return kept;
  };
  for (const char* name : {"myciel3.col", "petersen.col"}) {
    const std::string text = read_file(std::string(SUBSYM_GOLDEN_DIR) + "/" + name);
    try {
      const auto parsed = parse_dimacs(text);
      const std::string written = write_dimacs(parsed.graph, name);
      if (strip(written) != strip(text) || !parsed.warnings.empty()) failures.push_back(name);
      const auto again = parse_dimacs(written).graph;
      if (again.vertices != parsed.graph.vertices || again.edges != parsed.graph.edges)
        failures.push_back(std::string(name) + " reparse");
    } catch (const std::exception& e) {
      failures.push_back(std::string(name) + ": " + e.what());
    }
  }
  const auto file = parse_dimacs(read_file(std::string(SUBSYM_GOLDEN_DIR) + "/petersen.col")).graph;
  std::set<std::pair<std::size_t, std::size_t>> a(file.edges.begin(), file.edges.end()),
      b(g.edges.begin(), g.edges.end());
  if (a != b) failures.push_back("petersen golden differs from the built graph");
  out.pass = failures.empty();
  out.detail = "petersen optima" + optima + ", 2 golden files";
  for (const auto& f : failures) out.detail += ", failed " + f;
  return out;
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "oracle optimality", 10 * kMinutes, oracle_optimality},
      {2, "propagator exactness", 5 * kMinutes, propagator_exactness},
      {3, "representative survival", 10 * kMinutes, representative_survival},
      {4, "SHI safety", 10 * kMinutes, shi_safety},
      {5, "handler soundness", 10 * kMinutes, handler_soundness},
      {6, "symmetry benefit", 30 * kMinutes, symmetry_benefit},
      {7, "protocol fidelity", 1 * kMinutes, protocol_fidelity},
      {8, "MKCS sanity", 5 * kMinutes, mkcs_sanity},
  };
  bool all = true;
  for (const auto& c : criteria) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double elapsed = since(t0);
    if (elapsed > c.budget_s) {
      o.pass = false;
      o.detail += fmt(", over the %.0f s budget", c.budget_s);
    }
    all &= o.pass;
    std::printf("%s criterion %d (%s): %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", c.id, c.name,
                o.detail.c_str(), elapsed);
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
