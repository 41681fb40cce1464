#include "subsym/handlers.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace subsym {

std::vector<std::vector<std::size_t>> Graph::adjacency() const {
  std::vector<std::vector<std::size_t>> adj(vertices);
  for (const auto& [u, v] : edges) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  for (auto& list : adj) std::sort(list.begin(), list.end());
  return adj;
}

std::string item_group_label(std::size_t group) { return "items[" + std::to_string(group) + "]"; }
std::string unit_type_label(std::size_t type) { return "x[" + std::to_string(type) + "]"; }

namespace {

std::vector<std::size_t> iota_range(std::size_t from, std::size_t to) {
  std::vector<std::size_t> out(to - from);
  std::iota(out.begin(), out.end(), from);
  return out;
}

}  // namespace

// --- MKP --------------------------------------------------------------------

std::vector<Activation> mkp_activations(const NodeState& node, const MkpData& data,
                                        const VarMatrix& y, std::size_t y_index,
                                        bool partitioning_variant) {
  std::vector<Activation> out;
  const std::size_t m = y.rows, n = y.cols;
  std::vector<std::int64_t> remaining(data.capacities.begin(), data.capacities.end());
  for (std::size_t i = 0; i < m; ++i) {
    // Rows < i are decided here: group knapsacks by remaining capacity.
    std::map<std::int64_t, std::vector<std::size_t>> groups;
    for (std::size_t j = 0; j < n; ++j) groups[remaining[j]].push_back(j);
    for (auto& [cap, cols] : groups) {
      if (cols.size() < 2) continue;
      const OrbitopeKind kind = partitioning_variant && cols.size() == n
                                    ? OrbitopeKind::partitioning
                                    : OrbitopeKind::packing;
      out.push_back({Submatrix{y_index, iota_range(i, m), std::move(cols)}, kind});
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (!node.is_fixed(y.at(i, j))) return out;
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (node.in_f1(y.at(i, j))) remaining[j] -= data.weights[i];
    }
  }
  return out;
}

MkpHandler::MkpHandler(MkpData data, const MixedBinaryProgram& program, bool partitioning_variant)
    : data_(std::move(data)),
      y_index_(program.matrix_index(kKnapsackMatrix)),
      partitioning_variant_(partitioning_variant) {}

std::vector<Activation> MkpHandler::activations(const NodeState& node,
                                                const MixedBinaryProgram& program) const {
  return mkp_activations(node, data_, program.matrices[y_index_], y_index_, partitioning_variant_);
}

ShiAddition add_mkp_shis(MixedBinaryProgram& program, const MkpData& data) {
  ShiAddition out;
  const VarMatrix y = program.matrices.at(program.matrix_index(kKnapsackMatrix));
  const std::size_t m = data.items(), n = data.knapsacks();
  auto add_con = [&](std::vector<Term> terms, Bound lo, Bound hi, std::string name) {
    out.constraints.push_back(program.add_constraint(std::move(terms), std::move(lo), std::move(hi),
                                                     std::move(name)));
  };
  std::int64_t prefix_weight = 0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j + 1 < n; ++j) {
      const std::size_t k = j + 1;
      const std::string tag = "[" + std::to_string(i + 1) + "," + std::to_string(j + 1) + "]";
      const Rational big_m = std::max(data.capacities[j], data.capacities[k]) + prefix_weight;
      const VarId ap = program.add_continuous("alpha+" + tag, 0, big_m);
      const VarId am = program.add_continuous("alpha-" + tag, 0, big_m);
      const VarId zp = program.add_binary("z+" + tag);
      const VarId zm = program.add_binary("z-" + tag);
      out.variables.insert(out.variables.end(), {ap, am, zp, zm});

      add_con({{ap, 1}, {zp, -big_m}}, std::nullopt, Rational(0), "shi_m+" + tag);
      add_con({{am, 1}, {zm, -big_m}}, std::nullopt, Rational(0), "shi_m-" + tag);
      add_con({{ap, 1}, {am, 1}, {zp, -1}, {zm, -1}}, Rational(0), std::nullopt, "shi_z" + tag);
      // c_j - c_k - sum_{r<i} w_r (y_{r,j} - y_{r,k}) = alpha+ - alpha-
      std::vector<Term> alpha;
      for (std::size_t r = 0; r < i; ++r) {
        alpha.push_back({y.at(r, j), -data.weights[r]});
        alpha.push_back({y.at(r, k), data.weights[r]});
      }
      alpha.push_back({ap, -1});
      alpha.push_back({am, 1});
      const Rational rhs = data.capacities[k] - data.capacities[j];
      add_con(std::move(alpha), rhs, rhs, "shi_alpha" + tag);
      add_con({{zp, 1}, {zm, 1}}, std::nullopt, Rational(1), "shi_or" + tag);
      add_con({{y.at(i, k), 1}, {zp, -1}, {zm, -1}, {y.at(i, j), -1}}, std::nullopt, Rational(0),
              "shi" + tag);
      ++out.inequalities;
    }
    prefix_weight += data.weights[i];
  }
  return out;
}

// --- MUCP -------------------------------------------------------------------

std::vector<Activation> mucp_activations(const NodeState& node, const MucpData& data,
                                         const MixedBinaryProgram& program) {
  std::vector<Activation> out;
  const std::size_t periods = static_cast<std::size_t>(data.periods);
  for (std::size_t h = 0; h < data.types.size(); ++h) {
    const auto& type = data.types[h];
    if (type.count < 2) continue;
    const std::size_t index = program.matrix_index(unit_type_label(h));
    const VarMatrix& x = program.matrices[index];
    const std::size_t units = x.cols;
    const std::size_t down = static_cast<std::size_t>(type.min_down);
    const std::size_t up = static_cast<std::size_t>(type.min_up);
    // Length of the run of F0 (resp. F1) fixings ending in the previous period.
    std::vector<std::size_t> zeros(units, 0), ones(units, 0);
    for (std::size_t t = 0; t < periods; ++t) {
      if (t > 0) {
        for (std::size_t j = 0; j < units; ++j) {
          const VarId v = x.at(t - 1, j);
          zeros[j] = node.in_f0(v) ? zeros[j] + 1 : 0;
          ones[j] = node.in_f1(v) ? ones[j] + 1 : 0;
        }
      }
      std::vector<std::size_t> ready_up, ready_down;
      for (std::size_t j = 0; j < units; ++j) {
        if (t >= down && zeros[j] >= down) ready_up.push_back(j);
        if (t >= up && ones[j] >= up) ready_down.push_back(j);
      }
      if (ready_up.size() >= 2) {
        out.push_back({Submatrix{index, iota_range(t, periods), std::move(ready_up)},
                       OrbitopeKind::full});
      }
      if (ready_down.size() >= 2) {
        out.push_back({Submatrix{index, iota_range(t, periods), std::move(ready_down)},
                       OrbitopeKind::full});
      }
    }
  }
  return out;
}

ShiAddition add_mucp_shis(MixedBinaryProgram& program, const MucpData& data, bool strengthened) {
  ShiAddition out;
  const int periods = data.periods;
  for (std::size_t h = 0; h < data.types.size(); ++h) {
    const auto& type = data.types[h];
    const VarMatrix x = program.matrices.at(program.matrix_index(unit_type_label(h)));
    const auto& u = x.linked.at(0);
    auto uid = [&](int t, std::size_t j) { return u[static_cast<std::size_t>(t) * x.cols + j]; };
    auto xid = [&](int t, std::size_t j) { return x.at(static_cast<std::size_t>(t), j); };
    const int l = type.min_down, big_l = type.min_up;
    for (std::size_t j = 0; j + 1 < x.cols; ++j) {
      const std::size_t k = j + 1;
      // 0-based period t corresponds to period t+1; windows need t >= l.
      for (int t = l; t < periods; ++t) {
        const std::string tag = "[" + std::to_string(h) + "," + std::to_string(j + 1) + "," +
                                std::to_string(t + 1) + "]";
        std::vector<Term> terms;
        if (strengthened) {
          terms.push_back({uid(t, k), 1});
          terms.push_back({xid(t - l, j), -1});
          terms.push_back({xid(t, j), -1});
          for (int s = t - l + 1; s <= t - 1; ++s) terms.push_back({uid(s, j), -1});
        } else {
          terms.push_back({xid(t, k), 1});
          terms.push_back({xid(t, j), -1});
          for (int s = t - l; s <= t - 1; ++s) {
            terms.push_back({xid(s, j), -1});
            terms.push_back({xid(s, k), -1});
          }
        }
        out.constraints.push_back(
            program.add_constraint(std::move(terms), std::nullopt, Rational(0), "shi_up" + tag));
        ++out.inequalities;
      }
      for (int t = big_l; t < periods; ++t) {
        const std::string tag = "[" + std::to_string(h) + "," + std::to_string(j + 1) + "," +
                                std::to_string(t + 1) + "]";
        // x_{t,k} <= x_{t,j} + sum_{s=t-L}^{t-1} ((1 - x_{s,j}) + (1 - x_{s,k}))
        std::vector<Term> terms{{xid(t, k), 1}, {xid(t, j), -1}};
        for (int s = t - big_l; s <= t - 1; ++s) {
          terms.push_back({xid(s, j), 1});
          terms.push_back({xid(s, k), 1});
        }
        out.constraints.push_back(program.add_constraint(std::move(terms), std::nullopt,
                                                         Rational(2 * big_l), "shi_down" + tag));
        ++out.inequalities;
      }
    }
  }
  return out;
}

// --- MKCS -------------------------------------------------------------------

namespace {

std::vector<Activation> mkcs_activations_impl(const NodeState& node, std::size_t colors,
                                              const std::vector<std::vector<std::size_t>>& adj,
                                              const VarMatrix& x, std::size_t x_index,
                                              PairMode mode) {
  std::vector<Activation> out;
  const std::size_t n = adj.size();
  std::vector<char> in_r(n);
  std::vector<long> component(n);
  std::vector<std::size_t> stack;
  auto handle_pair = [&](std::size_t c1, std::size_t c2) {
    for (std::size_t i = 0; i < n; ++i) {
      in_r[i] = !(node.in_f0(x.at(i, c1)) && node.in_f0(x.at(i, c2)));
      component[i] = -1;
    }
    long next = 0;
    for (std::size_t s = 0; s < n; ++s) {
      if (!in_r[s] || component[s] >= 0) continue;
      std::vector<std::size_t> members;
      component[s] = next;
      stack.assign(1, s);
      while (!stack.empty()) {
        const std::size_t v = stack.back();
        stack.pop_back();
        members.push_back(v);
        for (const std::size_t w : adj[v]) {
          if (in_r[w] && component[w] < 0) {
            component[w] = next;
            stack.push_back(w);
          }
        }
      }
      ++next;
      if (members.size() < 2) continue;
      std::sort(members.begin(), members.end());
      out.push_back({Submatrix{x_index, std::move(members), {c1, c2}}, OrbitopeKind::packing});
    }
  };
  if (mode == PairMode::consecutive) {
    for (std::size_t c = 0; c + 1 < colors; ++c) handle_pair(c, c + 1);
  } else {
    for (std::size_t c1 = 0; c1 < colors; ++c1)
      for (std::size_t c2 = c1 + 1; c2 < colors; ++c2) handle_pair(c1, c2);
  }
  return out;
}

}  // namespace

std::vector<Activation> mkcs_activations(const NodeState& node, const MkcsData& data,
                                         const VarMatrix& x, std::size_t x_index, PairMode mode) {
  return mkcs_activations_impl(node, static_cast<std::size_t>(data.colors), data.graph.adjacency(),
                               x, x_index, mode);
}

MkcsHandler::MkcsHandler(MkcsData data, const MixedBinaryProgram& program, PairMode mode)
    : data_(std::move(data)),
      adjacency_(data_.graph.adjacency()),
      x_index_(program.matrix_index(kColorMatrix)),
      mode_(mode) {}

std::vector<Activation> MkcsHandler::activations(const NodeState& node,
                                                 const MixedBinaryProgram& program) const {
  return mkcs_activations_impl(node, static_cast<std::size_t>(data_.colors), adjacency_,
                               program.matrices[x_index_], x_index_, mode_);
}

}  // namespace subsym
