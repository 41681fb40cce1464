#include "subsym/instances.hpp"

#include "subsym/random.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace subsym {

using json = nlohmann::ordered_json;

namespace {

constexpr std::int64_t kMinWeight = 10;
constexpr std::int64_t kMaxWeight = 1000;
constexpr std::int64_t kSpread = (kMaxWeight - kMinWeight) / 10;

std::string tag(std::initializer_list<std::size_t> indices) {
  std::string out = "[";
  for (auto it = indices.begin(); it != indices.end(); ++it) {
    if (it != indices.begin()) out += ',';
    out += std::to_string(*it + 1);
  }
  return out + "]";
}

}  // namespace

std::string_view to_string(MkpClass item_class) {
  switch (item_class) {
    case MkpClass::uncorrelated: return "uncorrelated";
    case MkpClass::weakly: return "weakly";
    case MkpClass::strongly: return "strongly";
    case MkpClass::subset_sum: return "subset_sum";
  }
  return "uncorrelated";
}

MkpClass parse_mkp_class(std::string_view text) {
  for (auto c : {MkpClass::uncorrelated, MkpClass::weakly, MkpClass::strongly,
                 MkpClass::subset_sum}) {
    if (text == to_string(c)) return c;
  }
  throw std::invalid_argument("unknown item class: " + std::string(text));
}

std::string_view to_string(ProfitMode mode) {
  return mode == ProfitMode::equal ? "equal" : "free";
}

ProfitMode parse_profit_mode(std::string_view text) {
  if (text == "equal") return ProfitMode::equal;
  if (text == "free") return ProfitMode::free;
  throw std::invalid_argument("unknown profit mode: " + std::string(text));
}

MkpData gen_mkp(std::uint64_t seed, std::size_t m, std::size_t n, MkpClass item_class,
                double f, ProfitMode profit_mode) {
  if (m == 0 || n == 0) throw std::invalid_argument("gen_mkp: m and n must be positive");
  SplitMix64 weight_rng(seed, 1), dup_rng(seed, 2), profit_rng(seed, 3);
  const auto max_dup =
      std::max<std::int64_t>(1, static_cast<std::int64_t>(std::floor(f * double(m) + 1e-9)));
  auto draw_profit = [&](std::int64_t w) -> std::int64_t {
    switch (item_class) {
      case MkpClass::uncorrelated: return profit_rng.uniform(kMinWeight, kMaxWeight);
      case MkpClass::weakly:
        return profit_rng.uniform(std::max<std::int64_t>(1, w - kSpread), w + kSpread);
      case MkpClass::strongly: return w + kSpread;
      case MkpClass::subset_sum: return w;
    }
    return w;
  };
  MkpData data;
  while (data.weights.size() < m) {
    const std::int64_t w = weight_rng.uniform(kMinWeight, kMaxWeight);
    const std::int64_t d = dup_rng.uniform(1, max_dup);
    const std::int64_t group_profit = draw_profit(w);
    for (std::int64_t r = 0; r < d && data.weights.size() < m; ++r) {
      data.weights.push_back(w);
      data.profits.push_back(profit_mode == ProfitMode::equal || r == 0 ? group_profit
                                                                        : draw_profit(w));
    }
  }
  std::int64_t total = 0;
  for (auto w : data.weights) total += w;
  data.capacities.assign(n, total / (2 * static_cast<std::int64_t>(n)));
  return data;
}

MucpData gen_mucp(std::uint64_t seed, const MucpGenParams& params) {
  if (params.periods < 1) throw std::invalid_argument("gen_mucp: periods must be positive");
  if (std::none_of(params.unit_counts.begin(), params.unit_counts.end(),
                   [](int c) { return c >= 2; })) {
    throw std::invalid_argument("gen_mucp: need a unit type with at least two units");
  }
  SplitMix64 type_rng(seed, 1), demand_rng(seed, 2);
  MucpData data;
  data.periods = params.periods;
  const std::int64_t max_window = std::min(params.periods, 4);
  std::int64_t capacity = 0;
  for (int count : params.unit_counts) {
    if (count < 1) throw std::invalid_argument("gen_mucp: unit counts must be positive");
    MucpUnitType type;
    type.count = count;
    type.p_min = type_rng.uniform(10, 50);
    type.p_max = type.p_min + type_rng.uniform(10, 100);
    type.min_up = static_cast<int>(type_rng.uniform(1, max_window));
    type.min_down = static_cast<int>(type_rng.uniform(1, max_window));
    type.startup_cost = type_rng.uniform(50, 500);
    type.fixed_cost = type_rng.uniform(10, 100);
    type.production_cost = type_rng.uniform(1, 10);
    capacity += count * type.p_max;
    data.types.push_back(type);
  }
  const std::int64_t lo = (3 * capacity + 9) / 10;
  const std::int64_t hi = (8 * capacity) / 10;
  for (int t = 0; t < params.periods; ++t) data.demand.push_back(demand_rng.uniform(lo, hi));
  return data;
}

MixedBinaryProgram build_mkp(const MkpData& data, std::string name) {
  const std::size_t m = data.items(), n = data.knapsacks();
  MixedBinaryProgram program;
  program.name = std::move(name);
  program.sense = Sense::maximize;
  VarMatrix y{kKnapsackMatrix, m, n, std::vector<VarId>(m * n), OrbitopeKind::packing, {}};
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < m; ++i) {
      y.entries[i * n + j] = program.add_binary("y" + tag({i, j}), data.profits[i]);
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<Term> terms;
    for (std::size_t i = 0; i < m; ++i) terms.push_back({y.at(i, j), data.weights[i]});
    program.add_constraint(std::move(terms), std::nullopt, Rational(data.capacities[j]),
                           "capacity" + tag({j}));
  }
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<Term> terms;
    for (std::size_t j = 0; j < n; ++j) terms.push_back({y.at(i, j), 1});
    program.add_constraint(std::move(terms), std::nullopt, Rational(1), "assign" + tag({i}));
  }
  program.add_matrix(y);

  std::map<std::pair<std::int64_t, std::int64_t>, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < m; ++i) groups[{data.weights[i], data.profits[i]}].push_back(i);
  std::vector<std::vector<std::size_t>> ordered;
  for (auto& [key, items] : groups) {
    if (items.size() >= 2) ordered.push_back(items);
  }
  std::sort(ordered.begin(), ordered.end());
  for (std::size_t g = 0; g < ordered.size(); ++g) {
    const auto& items = ordered[g];
    VarMatrix group{item_group_label(g), n, items.size(), {}, OrbitopeKind::full, {}};
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t i : items) group.entries.push_back(y.at(i, j));
    }
    program.add_matrix(std::move(group));
  }
  return program;
}

MixedBinaryProgram build_mucp(const MucpData& data, std::string name) {
  MixedBinaryProgram program;
  program.name = std::move(name);
  program.sense = Sense::minimize;
  const auto periods = static_cast<std::size_t>(data.periods);
  if (data.demand.size() != periods) throw std::invalid_argument("demand length != periods");
  std::vector<std::vector<VarId>> power(periods);
  for (std::size_t h = 0; h < data.types.size(); ++h) {
    const auto& type = data.types[h];
    const auto units = static_cast<std::size_t>(type.count);
    VarMatrix x{unit_type_label(h), periods, units, {}, OrbitopeKind::full, {}};
    std::vector<VarId> u, p;
    for (std::size_t t = 0; t < periods; ++t)
      for (std::size_t j = 0; j < units; ++j)
        x.entries.push_back(program.add_binary("x" + tag({h, t, j}), type.fixed_cost));
    for (std::size_t t = 0; t < periods; ++t)
      for (std::size_t j = 0; j < units; ++j)
        u.push_back(program.add_binary("u" + tag({h, t, j}), type.startup_cost));
    for (std::size_t t = 0; t < periods; ++t)
      for (std::size_t j = 0; j < units; ++j)
        p.push_back(program.add_continuous("p" + tag({h, t, j}), 0, type.p_max,
                                           type.production_cost));
    auto at = [units](const std::vector<VarId>& grid, std::size_t t, std::size_t j) {
      return grid[t * units + j];
    };
    const auto up = static_cast<std::size_t>(type.min_up);
    const auto down = static_cast<std::size_t>(type.min_down);
    for (std::size_t j = 0; j < units; ++j) {
      for (std::size_t t = 0; t < periods; ++t) {
        const std::string id = tag({h, t, j});
        const VarId xt = x.at(t, j), pt = at(p, t, j), ut = at(u, t, j);
        power[t].push_back(pt);
        program.add_constraint({{pt, 1}, {xt, -type.p_min}}, Rational(0), std::nullopt,
                               "pmin" + id);
        program.add_constraint({{pt, 1}, {xt, -type.p_max}}, std::nullopt, Rational(0),
                               "pmax" + id);
        std::vector<Term> startup{{ut, 1}, {xt, -1}};
        if (t > 0) startup.push_back({x.at(t - 1, j), 1});
        program.add_constraint(std::move(startup), Rational(0), std::nullopt, "startup" + id);
        std::vector<Term> min_up;
        for (std::size_t s = t + 1 >= up ? t + 1 - up : 0; s <= t; ++s)
          min_up.push_back({at(u, s, j), 1});
        min_up.push_back({xt, -1});
        program.add_constraint(std::move(min_up), std::nullopt, Rational(0), "minup" + id);
        std::vector<Term> min_down;
        for (std::size_t s = t + 1 >= down ? t + 1 - down : 0; s <= t; ++s)
          min_down.push_back({at(u, s, j), 1});
        if (t >= down) min_down.push_back({x.at(t - down, j), 1});
        program.add_constraint(std::move(min_down), std::nullopt, Rational(1), "mindown" + id);
      }
    }
    x.linked.push_back(std::move(u));
    program.add_matrix(std::move(x));
  }
  for (std::size_t t = 0; t < periods; ++t) {
    std::vector<Term> terms;
    for (VarId v : power[t]) terms.push_back({v, 1});
    program.add_constraint(std::move(terms), Rational(data.demand[t]), std::nullopt,
                           "demand" + tag({t}));
  }
  return program;
}

MixedBinaryProgram build_mkcs(const MkcsData& data, std::string name) {
  MixedBinaryProgram program;
  program.name = std::move(name);
  program.sense = Sense::maximize;
  const std::size_t n = data.graph.vertices;
  const auto k = static_cast<std::size_t>(data.colors);
  VarMatrix x{kColorMatrix, n, k, {}, OrbitopeKind::packing, {}};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t r = 0; r < k; ++r) x.entries.push_back(program.add_binary("x" + tag({i, r}), 1));
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Term> terms;
    for (std::size_t r = 0; r < k; ++r) terms.push_back({x.at(i, r), 1});
    program.add_constraint(std::move(terms), std::nullopt, Rational(1), "vertex" + tag({i}));
  }
  for (const auto& [a, b] : data.graph.edges) {
    for (std::size_t r = 0; r < k; ++r) {
      program.add_constraint({{x.at(a, r), 1}, {x.at(b, r), 1}}, std::nullopt, Rational(1),
                             "edge" + tag({a, b, r}));
    }
  }
  program.add_matrix(std::move(x));
  return program;
}

// --- DIMACS ------------------------------------------------------------------

DimacsGraph parse_dimacs(std::string_view text) {
  DimacsGraph out;
  bool have_header = false;
  std::set<std::pair<std::size_t, std::size_t>> seen;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    std::istringstream fields(line);
    std::string kind;
    if (!(fields >> kind) || kind == "c") continue;
    if (kind == "p") {
      std::string format;
      long long vertices = -1, edges = -1;
      if (have_header) throw ParseError(number, "duplicate problem line");
      if (!(fields >> format >> vertices >> edges) || (format != "edge" && format != "edges") ||
          vertices < 0 || edges < 0) {
        throw ParseError(number, "malformed problem line");
      }
      out.graph.vertices = static_cast<std::size_t>(vertices);
      have_header = true;
    } else if (kind == "e") {
      if (!have_header) throw ParseError(number, "edge before problem line");
      long long a = 0, b = 0;
      if (!(fields >> a >> b)) throw ParseError(number, "malformed edge line");
      const auto n = static_cast<long long>(out.graph.vertices);
      if (a < 1 || b < 1 || a > n || b > n) {
        throw ParseError(number, "vertex index out of range");
      }
      if (a == b) {
        out.warnings.push_back("line " + std::to_string(number) + ": self loop dropped");
        continue;
      }
      std::pair<std::size_t, std::size_t> edge{std::min(a, b) - 1, std::max(a, b) - 1};
      if (!seen.insert(edge).second) {
        out.warnings.push_back("line " + std::to_string(number) + ": duplicate edge dropped");
        continue;
      }
      out.graph.edges.push_back(edge);
    } else {
      throw ParseError(number, "unknown line type '" + kind + "'");
    }
  }
  if (!have_header) throw ParseError(number, "missing problem line");
  return out;
}

std::string write_dimacs(const Graph& graph, std::string_view comment) {
  std::ostringstream out;
  if (!comment.empty()) out << "c " << comment << '\n';
  out << "p edge " << graph.vertices << ' ' << graph.edges.size() << '\n';
  for (const auto& [a, b] : graph.edges) out << "e " << a + 1 << ' ' << b + 1 << '\n';
  return out.str();
}

// --- JSON --------------------------------------------------------------------

std::string mkp_to_json(const MkpData& data, std::string_view name) {
  json doc;
  doc["format"] = "mkp/" + std::to_string(kInstanceFormatVersion);
  doc["name"] = name;
  doc["weights"] = data.weights;
  doc["profits"] = data.profits;
  doc["capacities"] = data.capacities;
  return doc.dump(1) + "\n";
}

MkpData mkp_from_json(std::string_view text) {
  const json doc = json::parse(text);
  if (doc.at("format") != "mkp/1") throw std::invalid_argument("not an mkp/1 document");
  MkpData data;
  data.weights = doc.at("weights").get<std::vector<std::int64_t>>();
  data.profits = doc.at("profits").get<std::vector<std::int64_t>>();
  data.capacities = doc.at("capacities").get<std::vector<std::int64_t>>();
  if (data.weights.size() != data.profits.size() || data.weights.empty() ||
      data.capacities.empty()) {
    throw std::invalid_argument("mkp: inconsistent sizes");
  }
  return data;
}

std::string mucp_to_json(const MucpData& data, std::string_view name) {
  json doc;
  doc["format"] = "mucp/" + std::to_string(kInstanceFormatVersion);
  doc["name"] = name;
  doc["periods"] = data.periods;
  doc["demand"] = data.demand;
  json types = json::array();
  for (const auto& t : data.types) {
    json entry;
    entry["count"] = t.count;
    entry["p_min"] = t.p_min;
    entry["p_max"] = t.p_max;
    entry["min_up"] = t.min_up;
    entry["min_down"] = t.min_down;
    entry["startup_cost"] = t.startup_cost;
    entry["fixed_cost"] = t.fixed_cost;
    entry["production_cost"] = t.production_cost;
    types.push_back(std::move(entry));
  }
  doc["types"] = std::move(types);
  return doc.dump(1) + "\n";
}

MucpData mucp_from_json(std::string_view text) {
  const json doc = json::parse(text);
  if (doc.at("format") != "mucp/1") throw std::invalid_argument("not a mucp/1 document");
  MucpData data;
  data.periods = doc.at("periods").get<int>();
  data.demand = doc.at("demand").get<std::vector<std::int64_t>>();
  for (const auto& entry : doc.at("types")) {
    MucpUnitType t;
    t.count = entry.at("count").get<int>();
    t.p_min = entry.at("p_min").get<std::int64_t>();
    t.p_max = entry.at("p_max").get<std::int64_t>();
    t.min_up = entry.at("min_up").get<int>();
    t.min_down = entry.at("min_down").get<int>();
    t.startup_cost = entry.at("startup_cost").get<std::int64_t>();
    t.fixed_cost = entry.at("fixed_cost").get<std::int64_t>();
    t.production_cost = entry.at("production_cost").get<std::int64_t>();
    if (t.count < 1 || t.p_min < 1 || t.p_min > t.p_max || t.min_up < 1 || t.min_down < 1 ||
        t.min_up > data.periods || t.min_down > data.periods) {
      throw std::invalid_argument("mucp: invalid unit type");
    }
    data.types.push_back(t);
  }
  if (data.periods < 1 || data.demand.size() != static_cast<std::size_t>(data.periods)) {
    throw std::invalid_argument("mucp: demand length must equal periods");
  }
  return data;
}

Instance load_instance(const std::string& path, int colors) {
  std::ifstream file(path);
  if (!file) throw std::runtime_error("cannot open " + path);
  std::stringstream buffer;
  buffer << file.rdbuf();
  const std::string text = buffer.str();
  std::string stem = path.substr(path.find_last_of('/') + 1);
  const auto dot = stem.find_last_of('.');
  const std::string ext = dot == std::string::npos ? "" : stem.substr(dot);
  if (dot != std::string::npos) stem.resize(dot);

  Instance instance;
  instance.name = stem;
  if (ext == ".col") {
    if (colors < 1) throw std::invalid_argument("a color count is required for " + path);
    instance.data = MkcsData{parse_dimacs(text).graph, colors};
    instance.name += "-k" + std::to_string(colors);
    return instance;
  }
  const json doc = json::parse(text);
  const std::string format = doc.at("format").get<std::string>();
  if (doc.contains("name")) instance.name = doc["name"].get<std::string>();
  if (format == "mkp/1") {
    instance.data = mkp_from_json(text);
  } else if (format == "mucp/1") {
    instance.data = mucp_from_json(text);
  } else {
    throw std::invalid_argument("unknown instance format: " + format);
  }
  return instance;
}

MixedBinaryProgram build(const Instance& instance) {
  return std::visit(
      [&](const auto& data) -> MixedBinaryProgram {
        using T = std::decay_t<decltype(data)>;
        if constexpr (std::is_same_v<T, MkpData>) return build_mkp(data, instance.name);
        else if constexpr (std::is_same_v<T, MucpData>) return build_mucp(data, instance.name);
        else return build_mkcs(data, instance.name);
      },
      instance.data);
}

}  // namespace subsym
