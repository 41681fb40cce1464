#include "subsym/model.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <set>
#include <unordered_set>

namespace subsym {

std::string_view to_string(VarKind kind) {
  return kind == VarKind::binary ? "binary" : "continuous";
}

std::string_view to_string(Sense sense) {
  return sense == Sense::maximize ? "maximize" : "minimize";
}

std::string_view to_string(OrbitopeKind kind) {
  switch (kind) {
    case OrbitopeKind::full: return "full";
    case OrbitopeKind::packing: return "packing";
    case OrbitopeKind::partitioning: return "partitioning";
  }
  return "full";
}

OrbitopeKind parse_orbitope_kind(std::string_view text) {
  if (text == "full") return OrbitopeKind::full;
  if (text == "packing") return OrbitopeKind::packing;
  if (text == "partitioning") return OrbitopeKind::partitioning;
  throw std::invalid_argument("unknown orbitope kind: " + std::string(text));
}

VarId MixedBinaryProgram::add_binary(std::string var_name, Rational objective) {
  variables.push_back({std::move(var_name), VarKind::binary, 0, 1, std::move(objective)});
  return VarId{static_cast<std::uint32_t>(variables.size() - 1)};
}

VarId MixedBinaryProgram::add_continuous(std::string var_name, Rational lower, Rational upper,
                                         Rational objective) {
  variables.push_back({std::move(var_name), VarKind::continuous, std::move(lower),
                       std::move(upper), std::move(objective)});
  return VarId{static_cast<std::uint32_t>(variables.size() - 1)};
}

std::size_t MixedBinaryProgram::add_constraint(std::vector<Term> terms, Bound lower, Bound upper,
                                               std::string constraint_name) {
  constraints.push_back({std::move(terms), std::move(lower), std::move(upper),
                         std::move(constraint_name)});
  return constraints.size() - 1;
}

std::size_t MixedBinaryProgram::add_matrix(VarMatrix matrix) {
  matrices.push_back(std::move(matrix));
  return matrices.size() - 1;
}

std::size_t MixedBinaryProgram::num_binaries() const {
  return static_cast<std::size_t>(std::count_if(
      variables.begin(), variables.end(),
      [](const VariableDecl& v) { return v.kind == VarKind::binary; }));
}

std::size_t MixedBinaryProgram::matrix_index(std::string_view label) const {
  for (std::size_t k = 0; k < matrices.size(); ++k) {
    if (matrices[k].label == label) return k;
  }
  throw std::out_of_range("no matrix labelled " + std::string(label));
}

namespace {

// True if some constraint is exactly "sum of `row` <= 1" (and ">= 1" when
// `need_equality`), up to term order.
bool has_row_rule(const MixedBinaryProgram& program, const std::vector<VarId>& row,
                  bool need_equality) {
  if (row.size() == 1 && !need_equality) return true;
  const std::set<VarId> wanted(row.begin(), row.end());
  for (const auto& con : program.constraints) {
    if (con.terms.size() != wanted.size()) continue;
    if (!con.upper || *con.upper > 1) continue;
    if (need_equality && (!con.lower || *con.lower < 1)) continue;
    bool match = true;
    for (const auto& term : con.terms) {
      if (term.coeff != 1 || !wanted.count(term.var)) {
        match = false;
        break;
      }
    }
    if (match) return true;
  }
  return false;
}

}  // namespace

std::vector<std::string> validate(const MixedBinaryProgram& program) {
  std::vector<std::string> out;
  const std::size_t nvars = program.variables.size();

  std::unordered_set<std::string> names;
  for (std::size_t k = 0; k < nvars; ++k) {
    const auto& v = program.variables[k];
    if (!names.insert(v.name).second) out.push_back("duplicate variable name '" + v.name + "'");
    if (v.lower > v.upper) out.push_back("variable '" + v.name + "' has lower > upper");
    if (v.kind == VarKind::binary) {
      const bool ok = (v.lower == 0 || v.lower == 1) && (v.upper == 0 || v.upper == 1);
      if (!ok) out.push_back("binary variable '" + v.name + "' has bounds outside {0,1}");
    }
  }

  for (std::size_t c = 0; c < program.constraints.size(); ++c) {
    const auto& con = program.constraints[c];
    const std::string label = "constraint '" + (con.name.empty() ? std::to_string(c) : con.name) + "'";
    std::set<std::uint32_t> seen;
    for (const auto& term : con.terms) {
      if (term.var.index >= nvars) {
        out.push_back(label + " references unknown variable id " + std::to_string(term.var.index));
        continue;
      }
      if (!seen.insert(term.var.index).second) {
        out.push_back(label + " repeats variable '" + program.variables[term.var.index].name + "'");
      }
    }
    if (con.lower && con.upper && *con.lower > *con.upper) out.push_back(label + " has lower > upper");
  }

  for (const auto& mat : program.matrices) {
    const std::string label = "matrix '" + mat.label + "'";
    if (mat.entries.size() != mat.rows * mat.cols) {
      out.push_back(label + " has " + std::to_string(mat.entries.size()) + " entries, expected " +
                    std::to_string(mat.rows * mat.cols));
      continue;
    }
    std::set<std::uint32_t> seen;
    bool entries_ok = true;
    auto check_grid = [&](const std::vector<VarId>& grid, const std::string& what) {
      if (grid.size() != mat.rows * mat.cols) {
        out.push_back(label + " " + what + " has wrong size");
        entries_ok = false;
        return;
      }
      for (const VarId id : grid) {
        if (id.index >= nvars) {
          out.push_back(label + " references unknown variable id " + std::to_string(id.index));
          entries_ok = false;
        } else if (program.variables[id.index].kind != VarKind::binary) {
          out.push_back(label + " contains non-binary variable '" + program.variables[id.index].name + "'");
          entries_ok = false;
        } else if (!seen.insert(id.index).second) {
          out.push_back(label + " repeats variable '" + program.variables[id.index].name + "'");
          entries_ok = false;
        }
      }
    };
    check_grid(mat.entries, "grid");
    for (std::size_t k = 0; k < mat.linked.size(); ++k) check_grid(mat.linked[k], "linked grid " + std::to_string(k));
    if (!entries_ok || mat.kind == OrbitopeKind::full) continue;
    const bool equality = mat.kind == OrbitopeKind::partitioning;
    for (std::size_t r = 0; r < mat.rows; ++r) {
      std::vector<VarId> row(mat.entries.begin() + static_cast<std::ptrdiff_t>(r * mat.cols),
                             mat.entries.begin() + static_cast<std::ptrdiff_t>((r + 1) * mat.cols));
      if (!has_row_rule(program, row, equality)) {
        out.push_back(label + " row " + std::to_string(r) + " lacks a row-sum " +
                      (equality ? "= 1" : "<= 1") + " constraint");
      }
    }
  }
  return out;
}

Evaluation evaluate(const MixedBinaryProgram& program, const Assignment& values) {
  if (values.size() != program.variables.size()) {
    throw std::invalid_argument("incomplete assignment");
  }
  Evaluation result;
  result.feasible = true;
  for (std::size_t k = 0; k < values.size(); ++k) {
    const auto& v = program.variables[k];
    const Rational& x = values[k];
    result.objective += v.objective * x;
    if (x < v.lower || x > v.upper) result.feasible = false;
    if (v.kind == VarKind::binary && x != 0 && x != 1) result.feasible = false;
  }
  if (!result.feasible) return result;
  for (const auto& con : program.constraints) {
    Rational activity = 0;
    for (const auto& term : con.terms) activity += term.coeff * values[term.var.index];
    if ((con.lower && activity < *con.lower) || (con.upper && activity > *con.upper)) {
      result.feasible = false;
      break;
    }
  }
  return result;
}

namespace {

using Json = nlohmann::ordered_json;

Json bound_json(const Bound& b) { return b ? Json(to_string(*b)) : Json(nullptr); }

Bound bound_from(const Json& j) {
  if (j.is_null()) return std::nullopt;
  return parse_rational(j.get<std::string>());
}

Json grid_json(const std::vector<VarId>& grid) {
  Json arr = Json::array();
  for (const VarId id : grid) arr.push_back(id.index);
  return arr;
}

std::vector<VarId> grid_from(const Json& j) {
  std::vector<VarId> grid;
  for (const auto& e : j) grid.push_back(VarId{e.get<std::uint32_t>()});
  return grid;
}

}  // namespace

std::string to_json(const MixedBinaryProgram& program) {
  Json root;
  root["format"] = "mbp/1";
  root["name"] = program.name;
  root["sense"] = std::string(to_string(program.sense));
  Json vars = Json::array();
  for (const auto& v : program.variables) {
    Json jv;
    jv["name"] = v.name;
    jv["kind"] = std::string(to_string(v.kind));
    jv["lower"] = to_string(v.lower);
    jv["upper"] = to_string(v.upper);
    jv["objective"] = to_string(v.objective);
    vars.push_back(std::move(jv));
  }
  root["variables"] = std::move(vars);
  Json cons = Json::array();
  for (const auto& c : program.constraints) {
    Json jc;
    jc["name"] = c.name;
    Json terms = Json::array();
    for (const auto& t : c.terms) terms.push_back(Json::array({t.var.index, to_string(t.coeff)}));
    jc["terms"] = std::move(terms);
    jc["lower"] = bound_json(c.lower);
    jc["upper"] = bound_json(c.upper);
    cons.push_back(std::move(jc));
  }
  root["constraints"] = std::move(cons);
  Json mats = Json::array();
  for (const auto& m : program.matrices) {
    Json jm;
    jm["label"] = m.label;
    jm["kind"] = std::string(to_string(m.kind));
    jm["rows"] = m.rows;
    jm["cols"] = m.cols;
    jm["entries"] = grid_json(m.entries);
    Json linked = Json::array();
    for (const auto& g : m.linked) linked.push_back(grid_json(g));
    jm["linked"] = std::move(linked);
    mats.push_back(std::move(jm));
  }
  root["matrices"] = std::move(mats);
  return root.dump(1) + "\n";
}

MixedBinaryProgram program_from_json(std::string_view text) {
  const Json root = Json::parse(text);
  if (root.value("format", "") != "mbp/1") throw std::invalid_argument("not an mbp/1 document");
  MixedBinaryProgram p;
  p.name = root.at("name").get<std::string>();
  p.sense = root.at("sense").get<std::string>() == "minimize" ? Sense::minimize : Sense::maximize;
  for (const auto& jv : root.at("variables")) {
    VariableDecl v;
    v.name = jv.at("name").get<std::string>();
    v.kind = jv.at("kind").get<std::string>() == "binary" ? VarKind::binary : VarKind::continuous;
    v.lower = parse_rational(jv.at("lower").get<std::string>());
    v.upper = parse_rational(jv.at("upper").get<std::string>());
    v.objective = parse_rational(jv.at("objective").get<std::string>());
    p.variables.push_back(std::move(v));
  }
  for (const auto& jc : root.at("constraints")) {
    LinearConstraint c;
    c.name = jc.at("name").get<std::string>();
    for (const auto& t : jc.at("terms")) {
      c.terms.push_back({VarId{t.at(0).get<std::uint32_t>()}, parse_rational(t.at(1).get<std::string>())});
    }
    c.lower = bound_from(jc.at("lower"));
    c.upper = bound_from(jc.at("upper"));
    p.constraints.push_back(std::move(c));
  }
  for (const auto& jm : root.at("matrices")) {
    VarMatrix m;
    m.label = jm.at("label").get<std::string>();
    m.kind = parse_orbitope_kind(jm.at("kind").get<std::string>());
    m.rows = jm.at("rows").get<std::size_t>();
    m.cols = jm.at("cols").get<std::size_t>();
    m.entries = grid_from(jm.at("entries"));
    for (const auto& g : jm.at("linked")) m.linked.push_back(grid_from(g));
    p.matrices.push_back(std::move(m));
  }
  return p;
}

}  // namespace subsym
