#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "symbd/core.hpp"

namespace symbd {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Relation { LE, EQ, GE };

struct LinearRow {
  std::vector<std::pair<int, double>> coeffs;  // (variable, coefficient)
  Relation rel = Relation::LE;
  double rhs = 0.0;
};

struct LinearProgram {
  int num_vars = 0;
  std::vector<double> objective;  // minimized
  std::vector<double> lower, upper;
  std::vector<LinearRow> rows;

  int add_var(double obj, double lo, double up) {
    objective.push_back(obj);
    lower.push_back(lo);
    upper.push_back(up);
    return num_vars++;
  }
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  double objective = 0.0;
  std::vector<double> primal;  // per variable
  std::vector<double> duals;   // per row, y with c'x = y'b + sum of nonbasic reduced-cost terms
  int iterations = 0;
};

namespace detail {

enum class ColState : unsigned char { Basic, AtLower, AtUpper, Free };

// Dense bounded-variable primal simplex, two phases with artificial columns.
// Dantzig pricing, Bland fallback once the degenerate-pivot budget is spent.
class Simplex {
 public:
  explicit Simplex(const LinearProgram& lp) : lp_(lp) { validate(); }

  LpSolution run() {
    build();
    LpSolution out;
    if (!phase1()) {
      out.status = LpStatus::Infeasible;
      out.iterations = iters_;
      return out;
    }
    const bool bounded = phase2();
    out.iterations = iters_;
    if (!bounded) {
      out.status = LpStatus::Unbounded;
      return out;
    }
    out.status = LpStatus::Optimal;
    out.primal.assign(lp_.num_vars, 0.0);
    for (int j = 0; j < lp_.num_vars; ++j) out.primal[j] = value_of(j);
    out.objective = 0.0;
    for (int j = 0; j < lp_.num_vars; ++j) out.objective += lp_.objective[j] * out.primal[j];
    out.duals.assign(m_, 0.0);
    for (int i = 0; i < m_; ++i) out.duals[i] = -redcost_[n_ + i];
    return out;
  }

 private:
  const LinearProgram& lp_;
  int m_ = 0, n_ = 0, ncols_ = 0;
  std::vector<double> tab_;      // m x ncols, row-major: B^-1 [A I Art]
  std::vector<double> xb_;       // basic values per row
  std::vector<int> basis_;       // column basic in each row
  std::vector<ColState> state_;  // per column
  std::vector<double> lo_, up_;  // per column
  std::vector<double> cost_;     // current phase costs
  std::vector<double> redcost_;
  std::vector<int> art_cols_;
  double bscale_ = 1.0;
  int iters_ = 0;
  long degen_ = 0;
  bool bland_ = false;

  double& t(int i, int j) { return tab_[static_cast<std::size_t>(i) * ncols_ + j]; }

  void validate() const {
    if (static_cast<int>(lp_.objective.size()) != lp_.num_vars ||
        static_cast<int>(lp_.lower.size()) != lp_.num_vars ||
        static_cast<int>(lp_.upper.size()) != lp_.num_vars)
      throw Error(ErrorKind::MalformedModel, "variable array sizes disagree");
    for (int j = 0; j < lp_.num_vars; ++j) {
      if (std::isnan(lp_.objective[j]) || std::isnan(lp_.lower[j]) || std::isnan(lp_.upper[j]))
        throw Error(ErrorKind::MalformedModel, "nan in variable data");
      if (lp_.lower[j] > lp_.upper[j] + kFeasTol)
        throw Error(ErrorKind::MalformedModel, "crossed bounds on variable " + std::to_string(j));
    }
    for (const LinearRow& r : lp_.rows) {
      if (std::isnan(r.rhs) || std::isinf(r.rhs))
        throw Error(ErrorKind::MalformedModel, "bad rhs");
      for (auto [j, a] : r.coeffs) {
        if (j < 0 || j >= lp_.num_vars)
          throw Error(ErrorKind::MalformedModel, "row references unknown variable");
        if (std::isnan(a) || std::isinf(a))
          throw Error(ErrorKind::MalformedModel, "bad coefficient");
      }
    }
  }

  double value_of(int j) const {
    switch (state_[j]) {
      case ColState::AtLower: return lo_[j];
      case ColState::AtUpper: return up_[j];
      case ColState::Free: return 0.0;
      case ColState::Basic: break;
    }
    for (int i = 0; i < m_; ++i)
      if (basis_[i] == j) return xb_[i];
    return 0.0;
  }

  void build() {
    m_ = static_cast<int>(lp_.rows.size());
    n_ = lp_.num_vars;
    // Columns: structural, slack per row, artificials appended on demand.
    std::vector<double> art_coef;  // +-1, per artificial
    std::vector<int> art_row;
    lo_.assign(n_ + m_, 0.0);
    up_.assign(n_ + m_, 0.0);
    state_.assign(n_ + m_, ColState::AtLower);
    for (int j = 0; j < n_; ++j) {
      lo_[j] = lp_.lower[j];
      up_[j] = lp_.upper[j];
      if (std::isfinite(lo_[j]))
        state_[j] = ColState::AtLower;
      else if (std::isfinite(up_[j]))
        state_[j] = ColState::AtUpper;
      else
        state_[j] = ColState::Free;
    }
    bscale_ = 1.0;
    for (int i = 0; i < m_; ++i) {
      const LinearRow& r = lp_.rows[i];
      bscale_ = std::max(bscale_, std::fabs(r.rhs));
      switch (r.rel) {
        case Relation::LE: lo_[n_ + i] = 0.0; up_[n_ + i] = kInf; break;
        case Relation::GE: lo_[n_ + i] = -kInf; up_[n_ + i] = 0.0; break;
        case Relation::EQ: lo_[n_ + i] = 0.0; up_[n_ + i] = 0.0; break;
      }
    }
    basis_.assign(m_, -1);
    xb_.assign(m_, 0.0);
    std::vector<double> shat(m_, 0.0);
    for (int i = 0; i < m_; ++i) {
      double act = 0.0;
      for (auto [j, a] : lp_.rows[i].coeffs) act += a * value_of(j);
      shat[i] = lp_.rows[i].rhs - act;
    }
    for (int i = 0; i < m_; ++i) {
      const int sc = n_ + i;
      if (shat[i] >= lo_[sc] - kFeasTol && shat[i] <= up_[sc] + kFeasTol) {
        basis_[i] = sc;
        state_[sc] = ColState::Basic;
        double v = shat[i];
        if (std::isfinite(lo_[sc])) v = std::max(v, lo_[sc]);
        if (std::isfinite(up_[sc])) v = std::min(v, up_[sc]);
        xb_[i] = v;
      } else if (shat[i] > up_[sc]) {
        state_[sc] = ColState::AtUpper;
        art_coef.push_back(1.0);
        art_row.push_back(i);
        xb_[i] = shat[i] - up_[sc];
      } else {
        state_[sc] = ColState::AtLower;
        art_coef.push_back(-1.0);
        art_row.push_back(i);
        xb_[i] = lo_[sc] - shat[i];
      }
    }
    const int nart = static_cast<int>(art_coef.size());
    ncols_ = n_ + m_ + nart;
    tab_.assign(static_cast<std::size_t>(m_) * ncols_, 0.0);
    for (int i = 0; i < m_; ++i) {
      for (auto [j, a] : lp_.rows[i].coeffs) t(i, j) += a;
      t(i, n_ + i) = 1.0;
    }
    art_cols_.clear();
    for (int k = 0; k < nart; ++k) {
      const int col = n_ + m_ + k;
      const int i = art_row[k];
      art_cols_.push_back(col);
      lo_.push_back(0.0);
      up_.push_back(kInf);
      state_.push_back(ColState::Basic);
      t(i, col) = art_coef[k];
      if (art_coef[k] < 0.0)  // normalize the basic column to +1
        for (int j = 0; j < ncols_; ++j) t(i, j) = -t(i, j);
      basis_[i] = col;
    }
  }

  void compute_redcosts() {
    redcost_ = cost_;
    for (int i = 0; i < m_; ++i) {
      const double cb = cost_[basis_[i]];
      if (cb == 0.0) continue;
      for (int j = 0; j < ncols_; ++j) redcost_[j] -= cb * t(i, j);
    }
    for (int i = 0; i < m_; ++i) redcost_[basis_[i]] = 0.0;
  }

  bool phase1() {
    if (art_cols_.empty()) {
      cost_.assign(ncols_, 0.0);
      for (int j = 0; j < n_; ++j) cost_[j] = lp_.objective[j];
      compute_redcosts();
      return true;
    }
    cost_.assign(ncols_, 0.0);
    for (int c : art_cols_) cost_[c] = 1.0;
    compute_redcosts();
    if (!iterate(true)) throw Error(ErrorKind::NumericalBreakdown, "phase 1 unbounded");
    double infeas = 0.0;
    for (int i = 0; i < m_; ++i)
      if (basis_[i] >= n_ + m_) infeas += xb_[i];
    if (infeas > kFeasTol * (1.0 + bscale_)) return false;
    for (int c : art_cols_) {  // pin artificials at zero for phase 2
      lo_[c] = up_[c] = 0.0;
      if (state_[c] != ColState::Basic) state_[c] = ColState::AtLower;
    }
    for (int i = 0; i < m_; ++i)
      if (basis_[i] >= n_ + m_) xb_[i] = 0.0;
    cost_.assign(ncols_, 0.0);
    for (int j = 0; j < n_; ++j) cost_[j] = lp_.objective[j];
    compute_redcosts();
    return true;
  }

  bool phase2() { return iterate(false); }

  // Returns false on unboundedness. Throws on breakdown.
  bool iterate(bool in_phase1) {
    const long max_iters = 5000L + 200L * (m_ + ncols_);
    const long degen_budget = 50L * std::max(1, m_);
    for (;;) {
      if (++iters_ > max_iters)
        throw Error(ErrorKind::NumericalBreakdown, "iteration limit exceeded");
      int enter = -1, dir = 0;
      double best = 1e-9;
      for (int j = 0; j < ncols_; ++j) {
        if (state_[j] == ColState::Basic) continue;
        if (up_[j] - lo_[j] <= 0.0 && state_[j] != ColState::Free) continue;  // fixed
        const double d = redcost_[j];
        int dj = 0;
        if (state_[j] == ColState::AtLower && d < -1e-9)
          dj = 1;
        else if (state_[j] == ColState::AtUpper && d > 1e-9)
          dj = -1;
        else if (state_[j] == ColState::Free && std::fabs(d) > 1e-9)
          dj = d < 0 ? 1 : -1;
        if (dj == 0) continue;
        if (bland_) {
          enter = j;
          dir = dj;
          break;
        }
        if (std::fabs(d) > best) {
          best = std::fabs(d);
          enter = j;
          dir = dj;
        }
      }
      if (enter < 0) return true;  // optimal for this phase

      // Ratio test.
      double span = up_[enter] - lo_[enter];
      if (state_[enter] == ColState::Free) span = kInf;
      double step = span;
      int lrow = -1;
      for (int i = 0; i < m_; ++i) {
        const double w = t(i, enter);
        const double delta = dir * w;
        const int bcol = basis_[i];
        double tt;
        if (delta > kPivotTol) {
          if (!std::isfinite(lo_[bcol])) continue;
          tt = (xb_[i] - lo_[bcol]) / delta;
        } else if (delta < -kPivotTol) {
          if (!std::isfinite(up_[bcol])) continue;
          tt = (up_[bcol] - xb_[i]) / (-delta);
        } else {
          continue;
        }
        if (tt < 0.0) tt = 0.0;
        if (tt < step - 1e-12) {
          step = tt;
          lrow = i;
        }
      }
      if (!std::isfinite(step)) {
        if (in_phase1) throw Error(ErrorKind::NumericalBreakdown, "phase 1 ray");
        return false;
      }
      if (step <= 1e-9) {
        if (++degen_ > degen_budget) bland_ = true;
      }
      const double move = dir * step;
      for (int i = 0; i < m_; ++i) xb_[i] -= move * t(i, enter);
      if (lrow < 0) {  // bound flip
        state_[enter] = (dir > 0) ? ColState::AtUpper : ColState::AtLower;
        continue;
      }
      const int leave = basis_[lrow];
      const double delta = dir * t(lrow, enter);
      state_[leave] = (delta > 0.0) ? ColState::AtLower : ColState::AtUpper;
      if (!std::isfinite(lo_[leave]) && state_[leave] == ColState::AtLower)
        state_[leave] = ColState::Free;
      double entering_value;
      switch (state_[enter]) {
        case ColState::AtLower: entering_value = lo_[enter] + move; break;
        case ColState::AtUpper: entering_value = up_[enter] + move; break;
        default: entering_value = move; break;
      }
      const double pv = t(lrow, enter);
      if (std::fabs(pv) < kPivotTol)
        throw Error(ErrorKind::NumericalBreakdown, "pivot below tolerance");
      const double inv = 1.0 / pv;
      for (int j = 0; j < ncols_; ++j) t(lrow, j) *= inv;
      for (int i = 0; i < m_; ++i) {
        if (i == lrow) continue;
        const double f = t(i, enter);
        if (f == 0.0) continue;
        for (int j = 0; j < ncols_; ++j) t(i, j) -= f * t(lrow, j);
        t(i, enter) = 0.0;
      }
      const double fr = redcost_[enter];
      if (fr != 0.0) {
        for (int j = 0; j < ncols_; ++j) redcost_[j] -= fr * t(lrow, j);
        redcost_[enter] = 0.0;
      }
      basis_[lrow] = enter;
      state_[enter] = ColState::Basic;
      xb_[lrow] = entering_value;
    }
  }
};

}  // namespace detail

inline LpSolution solve_lp(const LinearProgram& lp) { return detail::Simplex(lp).run(); }

// Mutable LP with stable row handles. Solves re-run from scratch; removal by
// handle never disturbs other handles.
class LpModel {
 public:
  LpModel() = default;
  explicit LpModel(LinearProgram base) : base_(std::move(base)) {}

  LinearProgram& base() { return base_; }
  const LinearProgram& base() const { return base_; }

  int add_row(LinearRow row) {
    added_.emplace_back(next_handle_, std::move(row));
    return next_handle_++;
  }

  void remove_row(int handle) {
    auto it = std::find_if(added_.begin(), added_.end(),
                           [handle](const auto& p) { return p.first == handle; });
    if (it == added_.end()) throw Error(ErrorKind::UnknownHandle, "no such row handle");
    added_.erase(it);
  }

  bool has_row(int handle) const {
    return std::any_of(added_.begin(), added_.end(),
                       [handle](const auto& p) { return p.first == handle; });
  }

  // Base rows first, then added rows in handle order.
  LinearProgram materialize() const {
    LinearProgram lp = base_;
    for (const auto& [h, row] : added_) lp.rows.push_back(row);
    return lp;
  }

  LpSolution solve() const { return solve_lp(materialize()); }

 private:
  LinearProgram base_;
  std::vector<std::pair<int, LinearRow>> added_;
  int next_handle_ = 0;
};

}  // namespace symbd
