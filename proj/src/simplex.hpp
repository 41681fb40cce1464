#pragma once

// Dense bounded-variable primal simplex, shared by the floating-point and
// exact rational LP paths.
//
// The working system is  A x - s + E a = 0  where s are row activities
// (bounded by the row bounds) and a are phase-one artificials. The tableau
// holds B^-1 [A | -I | E] explicitly.

#include "subsym/lp.hpp"

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

namespace subsym::detail {

template <class T>
struct DenseLp {
  std::size_t num_cols = 0;
  std::vector<T> lower, upper, cost;  // structural columns, finite bounds
  std::vector<std::vector<std::pair<std::size_t, T>>> rows;
  std::vector<std::optional<T>> row_lower, row_upper;
};

template <class T>
struct DenseLpSolution {
  LpStatus status = LpStatus::infeasible;
  T objective{};
  std::vector<T> values;
  std::vector<T> row_duals;  // for the minimization as stated
  long iterations = 0;
};

template <class T>
struct SimplexTolerances {
  T feas{};
  T opt{};
  T pivot{};
};

template <class T>
class DenseSimplex {
 public:
  DenseSimplex(const DenseLp<T>& lp, SimplexTolerances<T> tol, int bland_after, long iteration_limit)
      : lp_(lp), tol_(tol), bland_after_(bland_after), iteration_limit_(iteration_limit) {}

  DenseLpSolution<T> solve() {
    setup();
    DenseLpSolution<T> out;
    if (num_art_ > 0) {
      set_phase_costs(/*phase_one=*/true);
      const LpStatus s1 = iterate(/*allow_unbounded=*/false);
      out.iterations = iterations_;
      if (s1 == LpStatus::iteration_limit) {
        out.status = s1;
        return out;
      }
      recompute_basics();
      T infeas{};
      for (std::size_t j = art_begin(); j < width_; ++j) infeas += value_of(j);
      if (infeas > tol_.feas) {
        out.status = LpStatus::infeasible;
        return out;
      }
      for (std::size_t j = art_begin(); j < width_; ++j) {
        has_upper_[j] = true;
        upper_[j] = T{};
      }
    }
    set_phase_costs(/*phase_one=*/false);
    const LpStatus s2 = iterate(/*allow_unbounded=*/true);
    out.iterations = iterations_;
    out.status = s2;
    if (s2 != LpStatus::optimal) return out;
    recompute_basics();
    out.values.resize(lp_.num_cols);
    for (std::size_t j = 0; j < lp_.num_cols; ++j) {
      out.values[j] = value_of(j);
      out.objective += lp_.cost[j] * out.values[j];
    }
    out.row_duals.resize(m_);
    for (std::size_t r = 0; r < m_; ++r) {
      const std::size_t s = lp_.num_cols + r;
      const T d = reduced_[s];
      const bool negligible = (d > T{} ? d : -d) <= tol_.opt;
      out.row_duals[r] = basic_row_[s] >= 0 || negligible ? T{} : d;
    }
    return out;
  }

 private:
  std::size_t art_begin() const { return lp_.num_cols + m_; }

  void setup() {
    m_ = lp_.rows.size();
    const std::size_t n = lp_.num_cols;
    // Structural columns start at their lower bound.
    std::vector<T> start(n);
    for (std::size_t j = 0; j < n; ++j) start[j] = lp_.lower[j];

    std::vector<T> activity(m_);
    std::vector<int> art_sign(m_, 0);
    std::vector<T> slack_start(m_);
    for (std::size_t r = 0; r < m_; ++r) {
      T act{};
      for (const auto& [j, a] : lp_.rows[r]) act += a * start[j];
      activity[r] = act;
      const bool below = lp_.row_lower[r] && act < *lp_.row_lower[r];
      const bool above = lp_.row_upper[r] && act > *lp_.row_upper[r];
      if (below || above) {
        slack_start[r] = below ? *lp_.row_lower[r] : *lp_.row_upper[r];
        art_sign[r] = (act - slack_start[r]) > T{} ? -1 : 1;
        ++num_art_;
      }
    }

    width_ = n + m_ + num_art_;
    tableau_.assign(m_, std::vector<T>(width_));
    lower_.assign(width_, T{});
    upper_.assign(width_, T{});
    has_lower_.assign(width_, true);
    has_upper_.assign(width_, true);
    at_upper_.assign(width_, false);
    basic_row_.assign(width_, -1);
    head_.assign(m_, 0);
    beta_.assign(m_, T{});

    for (std::size_t j = 0; j < n; ++j) {
      lower_[j] = lp_.lower[j];
      upper_[j] = lp_.upper[j];
    }
    for (std::size_t r = 0; r < m_; ++r) {
      const std::size_t s = n + r;
      has_lower_[s] = lp_.row_lower[r].has_value();
      has_upper_[s] = lp_.row_upper[r].has_value();
      if (has_lower_[s]) lower_[s] = *lp_.row_lower[r];
      if (has_upper_[s]) upper_[s] = *lp_.row_upper[r];
    }

    std::size_t next_art = art_begin();
    for (std::size_t r = 0; r < m_; ++r) {
      auto& row = tableau_[r];
      const std::size_t s = n + r;
      if (art_sign[r] == 0) {
        // Slack is basic; scale the row by -1 so its column is +e_r.
        for (const auto& [j, a] : lp_.rows[r]) row[j] = -a;
        row[s] = T{1};
        head_[r] = s;
        basic_row_[s] = static_cast<long>(r);
        beta_[r] = activity[r];
      } else {
        const std::size_t a = next_art++;
        const T sign = art_sign[r] > 0 ? T{1} : T{-1};
        for (const auto& [j, coeff] : lp_.rows[r]) row[j] = coeff / sign;
        row[s] = T{-1} / sign;
        row[a] = T{1};
        has_upper_[a] = false;
        head_[r] = a;
        basic_row_[a] = static_cast<long>(r);
        at_upper_[s] = has_upper_[s] && slack_start[r] == upper_[s] &&
                       !(has_lower_[s] && slack_start[r] == lower_[s]);
        const T residual = activity[r] - slack_start[r];
        beta_[r] = residual > T{} ? residual : -residual;
      }
    }
  }

  T value_of(std::size_t j) const {
    if (basic_row_[j] >= 0) return beta_[static_cast<std::size_t>(basic_row_[j])];
    return at_upper_[j] ? upper_[j] : lower_[j];
  }

  void set_phase_costs(bool phase_one) {
    cost_.assign(width_, T{});
    if (phase_one) {
      for (std::size_t j = art_begin(); j < width_; ++j) cost_[j] = T{1};
    } else {
      for (std::size_t j = 0; j < lp_.num_cols; ++j) cost_[j] = lp_.cost[j];
    }
    reduced_ = cost_;
    for (std::size_t r = 0; r < m_; ++r) {
      const T& cb = cost_[head_[r]];
      if (cb == T{}) continue;
      const auto& row = tableau_[r];
      for (std::size_t j = 0; j < width_; ++j) {
        if (row[j] != T{}) reduced_[j] -= cb * row[j];
      }
    }
    bland_ = false;
    degenerate_run_ = 0;
  }

  void recompute_basics() {
    for (std::size_t r = 0; r < m_; ++r) {
      T v{};
      const auto& row = tableau_[r];
      for (std::size_t j = 0; j < width_; ++j) {
        if (basic_row_[j] >= 0 || row[j] == T{}) continue;
        v -= row[j] * (at_upper_[j] ? upper_[j] : lower_[j]);
      }
      beta_[r] = v;
    }
  }

  static T abs(const T& v) { return v < T{} ? -v : v; }

  LpStatus iterate(bool allow_unbounded) {
    for (;;) {
      if (iterations_ >= iteration_limit_) return LpStatus::iteration_limit;

      // Pricing.
      std::size_t enter = width_;
      int dir = 0;
      T best{};
      for (std::size_t j = 0; j < width_; ++j) {
        if (basic_row_[j] >= 0) continue;
        if (has_lower_[j] && has_upper_[j] && lower_[j] == upper_[j]) continue;
        const T& d = reduced_[j];
        int cand = 0;
        if (!at_upper_[j] && d < -tol_.opt) cand = 1;
        if (at_upper_[j] && d > tol_.opt) cand = -1;
        if (cand == 0) continue;
        if (bland_) {
          enter = j;
          dir = cand;
          break;
        }
        const T mag = abs(d);
        if (enter == width_ || mag > best) {
          enter = j;
          dir = cand;
          best = mag;
        }
      }
      if (enter == width_) return LpStatus::optimal;
      ++iterations_;

      // Ratio test. Outside Bland mode a two-pass (Harris) test: bounds are
      // relaxed by the feasibility tolerance to find the step limit, then the
      // largest pivot among rows blocking within that limit leaves.
      bool bounded = has_lower_[enter] && has_upper_[enter];
      T theta = bounded ? upper_[enter] - lower_[enter] : T{};
      long leave = -1;
      T leave_alpha{};
      auto ratio_of = [&](std::size_t r, const T& alpha, const T& slack, T& ratio) {
        const std::size_t b = head_[r];
        if (alpha > T{}) {
          if (!has_lower_[b]) return false;
          ratio = (beta_[r] - lower_[b] + slack) / alpha;
        } else {
          if (!has_upper_[b]) return false;
          ratio = (upper_[b] - beta_[r] + slack) / -alpha;
        }
        if (ratio < T{}) ratio = T{};
        return true;
      };
      if (bland_) {
        for (std::size_t r = 0; r < m_; ++r) {
          const T alpha = dir > 0 ? tableau_[r][enter] : -tableau_[r][enter];
          if (abs(alpha) <= tol_.pivot) continue;
          T ratio;
          if (!ratio_of(r, alpha, T{}, ratio)) continue;
          if (!bounded || ratio < theta ||
              (ratio == theta && leave >= 0 && head_[r] < head_[static_cast<std::size_t>(leave)])) {
            theta = ratio;
            leave = static_cast<long>(r);
            leave_alpha = alpha;
            bounded = true;
          }
        }
      } else {
        bool limited = false;
        T limit{};
        for (std::size_t r = 0; r < m_; ++r) {
          const T alpha = dir > 0 ? tableau_[r][enter] : -tableau_[r][enter];
          if (abs(alpha) <= tol_.pivot) continue;
          T ratio;
          if (!ratio_of(r, alpha, tol_.feas, ratio)) continue;
          if (!limited || ratio < limit) limit = ratio;
          limited = true;
        }
        if (limited && !(bounded && theta <= limit)) {
          for (std::size_t r = 0; r < m_; ++r) {
            const T alpha = dir > 0 ? tableau_[r][enter] : -tableau_[r][enter];
            if (abs(alpha) <= tol_.pivot) continue;
            T ratio;
            if (!ratio_of(r, alpha, T{}, ratio) || ratio > limit) continue;
            if (leave < 0 || abs(alpha) > abs(leave_alpha)) {
              theta = ratio;
              leave = static_cast<long>(r);
              leave_alpha = alpha;
            }
          }
          bounded = true;
        }
      }
      if (!bounded) {
        if (allow_unbounded) return LpStatus::unbounded;
        return LpStatus::iteration_limit;
      }

      if (theta <= tol_.feas) {
        if (++degenerate_run_ >= bland_after_) bland_ = true;
      } else {
        degenerate_run_ = 0;
      }

      const T step = dir > 0 ? theta : -theta;
      if (step != T{}) {
        for (std::size_t r = 0; r < m_; ++r) {
          const T& a = tableau_[r][enter];
          if (a != T{}) beta_[r] -= step * a;
        }
      }

      if (leave < 0) {
        at_upper_[enter] = !at_upper_[enter];
        continue;
      }

      const std::size_t lr = static_cast<std::size_t>(leave);
      const std::size_t out = head_[lr];
      const T entering_value = (at_upper_[enter] ? upper_[enter] : lower_[enter]) + step;
      at_upper_[out] = leave_alpha < T{};
      basic_row_[out] = -1;
      head_[lr] = enter;
      basic_row_[enter] = static_cast<long>(lr);
      at_upper_[enter] = false;
      beta_[lr] = entering_value;
      pivot(lr, enter);
      if (iterations_ % 64 == 0) recompute_basics();
    }
  }

  void pivot(std::size_t pr, std::size_t pc) {
    auto& prow = tableau_[pr];
    const T inv = T{1} / prow[pc];
    for (std::size_t j = 0; j < width_; ++j) {
      if (prow[j] != T{}) prow[j] *= inv;
    }
    prow[pc] = T{1};
    nz_.clear();
    for (std::size_t j = 0; j < width_; ++j) {
      if (prow[j] != T{}) nz_.push_back(j);
    }
    for (std::size_t r = 0; r < m_; ++r) {
      if (r == pr) continue;
      auto& row = tableau_[r];
      const T f = row[pc];
      if (f == T{}) continue;
      for (const std::size_t j : nz_) row[j] -= f * prow[j];
      row[pc] = T{};
    }
    const T f = reduced_[pc];
    if (f != T{}) {
      for (const std::size_t j : nz_) reduced_[j] -= f * prow[j];
      reduced_[pc] = T{};
    }
  }

  const DenseLp<T>& lp_;
  SimplexTolerances<T> tol_;
  int bland_after_;
  long iteration_limit_;

  std::size_t m_ = 0;
  std::size_t width_ = 0;
  std::size_t num_art_ = 0;
  std::vector<std::vector<T>> tableau_;
  std::vector<T> lower_, upper_, cost_, reduced_, beta_;
  std::vector<bool> has_lower_, has_upper_, at_upper_;
  std::vector<long> basic_row_;
  std::vector<std::size_t> head_;
  std::vector<std::size_t> nz_;
  long iterations_ = 0;
  bool bland_ = false;
  int degenerate_run_ = 0;
};

}  // namespace subsym::detail
