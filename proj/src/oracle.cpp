#include "subsym/oracle.hpp"

#include "subsym/lp.hpp"

#include <omp.h>

#include <algorithm>
#include <exception>
#include <map>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

namespace subsym {

std::vector<VarId> binary_order(const MixedBinaryProgram& program) {
  std::vector<VarId> out;
  for (std::size_t k = 0; k < program.variables.size(); ++k) {
    if (program.variables[k].kind == VarKind::binary) out.push_back(VarId{std::uint32_t(k)});
  }
  return out;
}

std::vector<int> pattern_bits(const MixedBinaryProgram& program) {
  std::vector<int> bits(program.variables.size(), -1);
  int next = 0;
  for (std::size_t k = 0; k < program.variables.size(); ++k) {
    if (program.variables[k].kind == VarKind::binary) bits[k] = next++;
  }
  return bits;
}

namespace {

void check_cap(std::size_t binaries) {
  if (binaries > kOracleMaxBinaries) {
    throw std::invalid_argument("oracle: " + std::to_string(binaries) +
                                " binaries exceed the cap of " +
                                std::to_string(kOracleMaxBinaries));
  }
}

bool bit(std::uint64_t pattern, int k) { return (pattern >> k) & 1U; }

// Compiled feasibility check of 0/1 patterns. Rows over binaries only are
// scaled to integers; rows touching continuous variables form a reduced LP
// over the continuous variables, solved exactly per pattern.
class PatternEvaluator {
 public:
  explicit PatternEvaluator(const MixedBinaryProgram& program)
      : program_(program), bits_(pattern_bits(program)) {
    binaries_ = binary_order(program);
    check_cap(binaries_.size());
    for (std::size_t k = 0; k < program.variables.size(); ++k) {
      const auto& v = program.variables[k];
      if (v.kind == VarKind::binary) {
        if (v.lower > 0) must_one_ |= std::uint64_t{1} << bits_[k];
        if (v.upper < 1) must_zero_ |= std::uint64_t{1} << bits_[k];
        objective_.emplace_back(bits_[k], v.objective);
      } else {
        cont_index_.emplace(k, reduced_.variables.size());
        reduced_.variables.push_back(v);
        continuous_.push_back(k);
      }
    }
    reduced_.sense = program.sense;
    for (const auto& con : program.constraints) {
      bool has_continuous = false;
      for (const auto& t : con.terms) has_continuous |= bits_[t.var.index] < 0;
      if (has_continuous) {
        MixedRow row{{}, con.lower, con.upper};
        LinearConstraint reduced_con;
        for (const auto& t : con.terms) {
          if (bits_[t.var.index] < 0) {
            reduced_con.terms.push_back({VarId{std::uint32_t(cont_index_.at(t.var.index))}, t.coeff});
          } else {
            row.binary_terms.emplace_back(bits_[t.var.index], t.coeff);
          }
        }
        reduced_.constraints.push_back(std::move(reduced_con));
        mixed_.push_back(std::move(row));
      } else {
        compile_binary_row(con);
      }
    }
  }

  std::size_t binaries() const { return binaries_.size(); }

  std::optional<FeasiblePoint> operator()(std::uint64_t pattern) const {
    if ((pattern & must_one_) != must_one_ || (pattern & must_zero_) != 0) return std::nullopt;
    for (const auto& row : int_rows_) {
      long long act = 0;
      for (const auto& [b, a] : row.terms) act += bit(pattern, b) ? a : 0;
      if ((row.has_lower && act < row.lower) || (row.has_upper && act > row.upper)) {
        return std::nullopt;
      }
    }
    for (const auto& row : rational_rows_) {
      Rational act = 0;
      for (const auto& [b, a] : row.terms) {
        if (bit(pattern, b)) act += a;
      }
      if ((row.lower && act < *row.lower) || (row.upper && act > *row.upper)) return std::nullopt;
    }
    FeasiblePoint point;
    point.pattern = pattern;
    point.values.assign(program_.variables.size(), Rational(0));
    for (std::size_t b = 0; b < binaries_.size(); ++b) {
      if (bit(pattern, int(b))) point.values[binaries_[b].index] = 1;
    }
    point.objective = 0;
    for (const auto& [b, c] : objective_) {
      if (bit(pattern, b)) point.objective += c;
    }
    if (continuous_.empty()) return point;

    MixedBinaryProgram reduced = reduced_;
    for (std::size_t r = 0; r < mixed_.size(); ++r) {
      Rational shift = 0;
      for (const auto& [b, a] : mixed_[r].binary_terms) {
        if (bit(pattern, b)) shift += a;
      }
      auto& con = reduced.constraints[r];
      if (mixed_[r].lower) con.lower = *mixed_[r].lower - shift;
      if (mixed_[r].upper) con.upper = *mixed_[r].upper - shift;
    }
    const ExactLpResult lp = solve_lp_exact(reduced);
    if (lp.status != LpStatus::optimal) return std::nullopt;
    for (std::size_t c = 0; c < continuous_.size(); ++c) point.values[continuous_[c]] = lp.values[c];
    point.objective += lp.objective;
    return point;
  }

 private:
  struct IntRow {
    std::vector<std::pair<int, long long>> terms;
    long long lower = 0, upper = 0;
    bool has_lower = false, has_upper = false;
  };
  struct RationalRow {
    std::vector<std::pair<int, Rational>> terms;
    Bound lower, upper;
  };
  struct MixedRow {
    std::vector<std::pair<int, Rational>> binary_terms;
    Bound lower, upper;
  };

  void compile_binary_row(const LinearConstraint& con) {
    using boost::multiprecision::cpp_int;
    cpp_int scale = 1;
    auto absorb = [&](const Rational& q) {
      const cpp_int d = boost::multiprecision::denominator(q);
      scale = scale / boost::multiprecision::gcd(scale, d) * d;
    };
    for (const auto& t : con.terms) absorb(t.coeff);
    if (con.lower) absorb(*con.lower);
    if (con.upper) absorb(*con.upper);
    const cpp_int limit = cpp_int(1) << 40;
    bool fits = true;
    auto to_int = [&](const Rational& q) -> long long {
      const Rational scaled = q * Rational(scale);
      const cpp_int n = boost::multiprecision::numerator(scaled);
      if (abs(n) > limit) {
        fits = false;
        return 0;
      }
      return n.convert_to<long long>();
    };
    IntRow row;
    for (const auto& t : con.terms) row.terms.emplace_back(bits_[t.var.index], to_int(t.coeff));
    if (con.lower) {
      row.has_lower = true;
      row.lower = to_int(*con.lower);
    }
    if (con.upper) {
      row.has_upper = true;
      row.upper = to_int(*con.upper);
    }
    if (fits && row.terms.size() < (std::size_t{1} << 20)) {
      int_rows_.push_back(std::move(row));
      return;
    }
    RationalRow fallback{{}, con.lower, con.upper};
    for (const auto& t : con.terms) fallback.terms.emplace_back(bits_[t.var.index], t.coeff);
    rational_rows_.push_back(std::move(fallback));
  }

  const MixedBinaryProgram& program_;
  std::vector<int> bits_;
  std::vector<VarId> binaries_;
  std::uint64_t must_one_ = 0, must_zero_ = 0;
  std::vector<std::pair<int, Rational>> objective_;
  std::vector<IntRow> int_rows_;
  std::vector<RationalRow> rational_rows_;
  std::vector<MixedRow> mixed_;
  std::map<std::size_t, std::size_t> cont_index_;
  std::vector<std::size_t> continuous_;
  MixedBinaryProgram reduced_;
};

}  // namespace

std::vector<FeasiblePoint> enumerate_feasible(const MixedBinaryProgram& program) {
  const PatternEvaluator evaluator(program);
  const long long total = 1LL << evaluator.binaries();
  std::vector<std::vector<FeasiblePoint>> found(static_cast<std::size_t>(omp_get_max_threads()));
  std::exception_ptr error;
#pragma omp parallel
  {
    auto& local = found[static_cast<std::size_t>(omp_get_thread_num())];
#pragma omp for schedule(static)
    for (long long p = 0; p < total; ++p) {
      try {
        if (auto point = evaluator(static_cast<std::uint64_t>(p))) local.push_back(std::move(*point));
      } catch (...) {
#pragma omp critical
        if (!error) error = std::current_exception();
      }
    }
  }
  if (error) std::rethrow_exception(error);
  std::vector<FeasiblePoint> out;
  for (auto& chunk : found) std::move(chunk.begin(), chunk.end(), std::back_inserter(out));
  std::sort(out.begin(), out.end(),
            [](const FeasiblePoint& a, const FeasiblePoint& b) { return a.pattern < b.pattern; });
  return out;
}

std::vector<FeasiblePoint> enumerate_feasible_serial(const MixedBinaryProgram& program) {
  const auto binaries = binary_order(program);
  check_cap(binaries.size());
  const bool has_continuous = binaries.size() < program.variables.size();
  std::vector<FeasiblePoint> out;
  for (std::uint64_t p = 0; p < (std::uint64_t{1} << binaries.size()); ++p) {
    Assignment values(program.variables.size(), Rational(0));
    for (std::size_t b = 0; b < binaries.size(); ++b) values[binaries[b].index] = bit(p, int(b));
    if (has_continuous) {
      std::vector<ExactInterval> bounds;
      for (std::size_t k = 0; k < program.variables.size(); ++k) {
        const auto& v = program.variables[k];
        if (v.kind == VarKind::binary) {
          bounds.push_back({values[k], values[k]});
        } else {
          bounds.push_back({v.lower, v.upper});
        }
      }
      bool in_bounds = true;
      for (VarId v : binaries) {
        const auto& decl = program.var(v);
        in_bounds &= values[v.index] >= decl.lower && values[v.index] <= decl.upper;
      }
      if (!in_bounds) continue;
      auto lp = solve_lp_exact(program, bounds);
      if (lp.status != LpStatus::optimal) continue;
      values = std::move(lp.values);
    }
    const Evaluation eval = evaluate(program, values);
    if (eval.feasible) out.push_back({p, std::move(values), eval.objective});
  }
  return out;
}

std::optional<Rational> best_objective(const MixedBinaryProgram& program,
                                       const std::vector<FeasiblePoint>& points) {
  std::optional<Rational> best;
  for (const auto& p : points) {
    if (!best || (program.sense == Sense::maximize ? p.objective > *best : p.objective < *best)) {
      best = p.objective;
    }
  }
  return best;
}

namespace {

// Pattern bit positions of a group's cells: cells[c][g * rows + r] is the
// bit of row r, column c of grid g (0 = primary, then the linked grids).
std::vector<std::vector<int>> group_cells(const MixedBinaryProgram& program,
                                          const Submatrix& group) {
  const auto bits = pattern_bits(program);
  const VarMatrix& matrix = program.matrices.at(group.matrix);
  std::vector<const std::vector<VarId>*> grids{&matrix.entries};
  for (const auto& grid : matrix.linked) grids.push_back(&grid);
  std::vector<std::vector<int>> cells;
  for (std::size_t c : group.cols) {
    std::vector<int> column;
    for (const auto* grid : grids) {
      for (std::size_t r : group.rows) column.push_back(bits[(*grid)[r * matrix.cols + c].index]);
    }
    cells.push_back(std::move(column));
  }
  return cells;
}

// Pattern rank with the first binary most significant.
std::uint64_t lex_rank(std::uint64_t pattern, std::size_t binaries) {
  std::uint64_t rank = 0;
  for (std::size_t b = 0; b < binaries; ++b) rank = (rank << 1) | bit(pattern, int(b));
  return rank;
}

std::uint64_t permute(std::uint64_t pattern, const std::vector<std::vector<int>>& cells,
                      const std::vector<std::size_t>& perm) {
  std::uint64_t out = pattern;
  for (const auto& column : cells)
    for (int b : column) out &= ~(std::uint64_t{1} << b);
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const auto& from = cells[perm[c]];
    for (std::size_t e = 0; e < from.size(); ++e) {
      if (bit(pattern, from[e])) out |= std::uint64_t{1} << cells[c][e];
    }
  }
  return out;
}

}  // namespace

std::vector<Orbit> enumerate_orbits(const MixedBinaryProgram& program,
                                    const std::vector<FeasiblePoint>& points,
                                    const Submatrix& group) {
  const auto cells = group_cells(program, group);
  const std::size_t binaries = binary_order(program).size();
  std::map<std::uint64_t, std::size_t> by_key;
  std::vector<Orbit> orbits;
  for (const auto& point : points) {
    // Canonical form: columns sorted in non-increasing order.
    std::vector<std::vector<int>> columns;
    for (const auto& column : cells) {
      std::vector<int> values;
      for (int b : column) values.push_back(bit(point.pattern, b));
      columns.push_back(std::move(values));
    }
    std::vector<std::size_t> order(columns.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return columns[a] > columns[b]; });
    const std::uint64_t key = permute(point.pattern, cells, order);
    auto [it, inserted] = by_key.emplace(key, orbits.size());
    if (inserted) orbits.push_back({});
    Orbit& orbit = orbits[it->second];
    orbit.members.push_back(point.pattern);
    if (orbit.members.size() == 1 ||
        lex_rank(point.pattern, binaries) > lex_rank(orbit.representative, binaries)) {
      orbit.representative = point.pattern;
    }
  }
  for (auto& orbit : orbits) std::sort(orbit.members.begin(), orbit.members.end());
  std::sort(orbits.begin(), orbits.end(),
            [](const Orbit& a, const Orbit& b) { return a.members.front() < b.members.front(); });
  return orbits;
}

std::vector<Orbit> enumerate_orbits(const MixedBinaryProgram& program, const Submatrix& group) {
  return enumerate_orbits(program, enumerate_feasible(program), group);
}

FixDelta forced_cells(const DomainGrid& grid, OrbitopeKind kind) {
  const std::size_t m = grid.rows, n = grid.cols, cells = m * n;
  if (cells > kOracleMaxCells) throw std::invalid_argument("forced_cells: grid too large");
  std::vector<int> seen_zero(cells, 0), seen_one(cells, 0);
  bool any = false;
  std::vector<int> a(m), b(m);
  for (std::uint32_t mask = 0; mask < (1U << cells); ++mask) {
    auto cell = [&](std::size_t r, std::size_t c) { return int((mask >> (r * n + c)) & 1U); };
    bool ok = true;
    for (std::size_t k = 0; k < cells && ok; ++k) {
      const int v = int((mask >> k) & 1U);
      ok = !(grid.cells[k] == Domain::only0 && v == 1) && !(grid.cells[k] == Domain::only1 && v == 0);
    }
    for (std::size_t r = 0; r < m && ok; ++r) {
      int sum = 0;
      for (std::size_t c = 0; c < n; ++c) sum += cell(r, c);
      if (kind == OrbitopeKind::packing) ok = sum <= 1;
      if (kind == OrbitopeKind::partitioning) ok = sum == 1;
    }
    for (std::size_t c = 0; c + 1 < n && ok; ++c) {
      for (std::size_t r = 0; r < m; ++r) {
        a[r] = cell(r, c);
        b[r] = cell(r, c + 1);
      }
      ok = lex_cmp(a, b) != LexOrder::less;
    }
    if (!ok) continue;
    any = true;
    for (std::size_t k = 0; k < cells; ++k) ((mask >> k) & 1U ? seen_one : seen_zero)[k] = 1;
  }
  FixDelta delta;
  if (!any) {
    delta.infeasible = true;
    return delta;
  }
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      const std::size_t k = r * n + c;
      if (grid.cells[k] != Domain::free) continue;
      if (!seen_one[k]) delta.fixings.push_back({r, c, 0});
      if (!seen_zero[k]) delta.fixings.push_back({r, c, 1});
    }
  }
  return delta;
}

std::optional<std::string> activation_violation(const MixedBinaryProgram& program,
                                                const std::vector<FeasiblePoint>& points,
                                                const NodeState& node,
                                                const Activation& activation) {
  const auto bits = pattern_bits(program);
  std::uint64_t fixed_mask = 0, fixed_value = 0;
  for (std::size_t k = 0; k < program.variables.size(); ++k) {
    if (bits[k] < 0 || node.fixed[k] < 0) continue;
    fixed_mask |= std::uint64_t{1} << bits[k];
    if (node.fixed[k] == 1) fixed_value |= std::uint64_t{1} << bits[k];
  }
  std::unordered_map<std::uint64_t, const Rational*> objective;
  for (const auto& p : points) objective.emplace(p.pattern, &p.objective);

  const auto cells = group_cells(program, activation.target);
  std::vector<std::size_t> perm(cells.size());
  for (const auto& p : points) {
    if ((p.pattern & fixed_mask) != fixed_value) continue;
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    while (std::next_permutation(perm.begin(), perm.end())) {
      const std::uint64_t image = permute(p.pattern, cells, perm);
      const auto it = objective.find(image);
      if (it == objective.end()) {
        return "pattern " + std::to_string(p.pattern) + " maps to infeasible " +
               std::to_string(image);
      }
      if (*it->second != p.objective) {
        return "pattern " + std::to_string(p.pattern) + " maps to " + std::to_string(image) +
               " with objective " + to_string(*it->second) + " != " + to_string(p.objective);
      }
    }
  }
  return std::nullopt;
}

std::vector<std::uint64_t> enumerate_survivors(const MixedBinaryProgram& program,
                                               const Plugins& plugins,
                                               std::size_t original_binaries,
                                               const ActivationObserver& observer) {
  const PatternEvaluator evaluator(program);
  const auto bits = pattern_bits(program);
  const Propagator propagator(program, plugins);
  const std::uint64_t keep = original_binaries >= 64 ? ~std::uint64_t{0}
                                                     : (std::uint64_t{1} << original_binaries) - 1;
  std::vector<std::uint64_t> out;
  std::vector<NodeState> stack{NodeState::root(program)};
  while (!stack.empty()) {
    NodeState node = std::move(stack.back());
    stack.pop_back();
    if (propagator.run(node, 1000, observer).infeasible) continue;
    std::size_t free = program.variables.size();
    for (std::size_t k = 0; k < program.variables.size() && free == program.variables.size(); ++k) {
      if (bits[k] >= 0 && node.fixed[k] < 0) free = k;
    }
    if (free == program.variables.size()) {
      std::uint64_t pattern = 0;
      for (std::size_t k = 0; k < program.variables.size(); ++k) {
        if (bits[k] >= 0 && node.fixed[k] == 1) pattern |= std::uint64_t{1} << bits[k];
      }
      if (evaluator(pattern)) out.push_back(pattern & keep);
      continue;
    }
    NodeState zero = node, one = node;
    zero.fixed[free] = 0;
    one.fixed[free] = 1;
    zero.depth = one.depth = node.depth + 1;
    stack.push_back(std::move(zero));
    stack.push_back(std::move(one));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace subsym
