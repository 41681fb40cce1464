#include "subsym/settings.hpp"

#include "subsym/handlers.hpp"

#include <map>
#include <numeric>

namespace subsym {

namespace {

std::vector<std::size_t> all_of(std::size_t n) {
  std::vector<std::size_t> out(n);
  std::iota(out.begin(), out.end(), std::size_t{0});
  return out;
}

bool is_item_group(const VarMatrix& matrix) { return matrix.label.rfind("items[", 0) == 0; }

}  // namespace

std::string_view to_string(Setting setting) {
  switch (setting) {
    case Setting::no_sym: return "no-sym";
    case Setting::orbitope: return "orbitope";
    case Setting::ineq: return "ineq";
    case Setting::act: return "act";
    case Setting::act_consec: return "act-consec";
    case Setting::act_allpairs: return "act-allpairs";
  }
  return "no-sym";
}

Setting parse_setting(std::string_view text) {
  for (auto s : {Setting::no_sym, Setting::orbitope, Setting::ineq, Setting::act,
                 Setting::act_consec, Setting::act_allpairs}) {
    if (text == to_string(s)) return s;
  }
  throw std::invalid_argument("unknown setting: " + std::string(text));
}

std::vector<Setting> supported_settings(const Instance& instance) {
  if (std::holds_alternative<MkcsData>(instance.data)) {
    return {Setting::no_sym, Setting::orbitope, Setting::act_consec, Setting::act_allpairs};
  }
  return {Setting::no_sym, Setting::orbitope, Setting::ineq, Setting::act};
}

std::vector<Activation> global_orbitopes(const MixedBinaryProgram& program,
                                         const Instance& instance) {
  std::vector<Activation> out;
  for (std::size_t index = 0; index < program.matrices.size(); ++index) {
    const VarMatrix& matrix = program.matrices[index];
    if (matrix.cols < 2) continue;
    if (const auto* mkp = std::get_if<MkpData>(&instance.data);
        mkp && matrix.label == kKnapsackMatrix) {
      std::map<std::int64_t, std::vector<std::size_t>> classes;
      for (std::size_t j = 0; j < matrix.cols; ++j) classes[mkp->capacities[j]].push_back(j);
      for (auto& [cap, cols] : classes) {
        if (cols.size() >= 2) {
          out.push_back({Submatrix{index, all_of(matrix.rows), std::move(cols)}, matrix.kind});
        }
      }
      continue;
    }
    out.push_back({Submatrix{index, all_of(matrix.rows), all_of(matrix.cols)}, matrix.kind});
  }
  return out;
}

Formulation formulate(const Instance& instance, Setting setting, const FormulateOptions& options) {
  Formulation out{build(instance), {}};
  auto unsupported = [&] {
    return std::invalid_argument("setting " + std::string(to_string(setting)) +
                                 " is not available for this problem class");
  };
  if (setting == Setting::no_sym) return out;
  const auto globals = global_orbitopes(out.program, instance);

  if (const auto* mkp = std::get_if<MkpData>(&instance.data)) {
    std::vector<Activation> items;
    for (const auto& a : globals) {
      if (is_item_group(out.program.matrices[a.target.matrix])) items.push_back(a);
    }
    switch (setting) {
      case Setting::orbitope:
        out.plugins.static_orbitopes = globals;
        break;
      case Setting::ineq:
        add_mkp_shis(out.program, *mkp);
        out.plugins.static_orbitopes = items;
        break;
      case Setting::act:
        out.plugins.static_orbitopes = globals;
        out.plugins.handlers.push_back(
            std::make_shared<MkpHandler>(*mkp, out.program, options.mkp_partitioning));
        break;
      default: throw unsupported();
    }
    return out;
  }
  if (const auto* mucp = std::get_if<MucpData>(&instance.data)) {
    switch (setting) {
      case Setting::orbitope:
        out.plugins.static_orbitopes = globals;
        break;
      case Setting::ineq:
        add_mucp_shis(out.program, *mucp, true);
        break;
      case Setting::act:
        out.plugins.static_orbitopes = globals;
        out.plugins.handlers.push_back(std::make_shared<MucpHandler>(*mucp));
        break;
      default: throw unsupported();
    }
    return out;
  }
  const auto& mkcs = std::get<MkcsData>(instance.data);
  switch (setting) {
    case Setting::orbitope:
      out.plugins.static_orbitopes = globals;
      break;
    case Setting::act:
    case Setting::act_allpairs:
    case Setting::act_consec: {
      const PairMode mode =
          setting == Setting::act_consec ? PairMode::consecutive : PairMode::all_pairs;
      out.plugins.static_orbitopes = globals;
      out.plugins.handlers.push_back(std::make_shared<MkcsHandler>(mkcs, out.program, mode));
      break;
    }
    default: throw unsupported();
  }
  return out;
}

}  // namespace subsym
