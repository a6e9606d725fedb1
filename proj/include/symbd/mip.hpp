#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <queue>
#include <vector>

#include "symbd/core.hpp"
#include "symbd/cuts.hpp"
#include "symbd/lp.hpp"
#include "symbd/partition.hpp"

namespace symbd {

// Slot-major block of assignment variables z[slot][item] inside the master.
struct AssignmentLayout {
  int num_slots = 0;
  int num_items = 0;
  std::vector<int> z_index;

  int z(int slot, int item) const { return z_index[slot * num_items + item]; }
};

// What the subproblem reports for one slot's assignment. An infeasible or
// bound-violated assignment comes back with the z-space rows to add and the
// abstract forms that feed the pool and the zeta rows.
struct OracleResult {
  bool feasible = true;
  std::vector<LinearRow> concrete;
  std::vector<AbstractCut> abstracts;
};

using Oracle = std::function<OracleResult(int slot, const std::vector<int>& items, double xhat)>;

struct MasterModel {
  LinearProgram base;
  std::vector<char> is_integer;
  AssignmentLayout layout;
  std::vector<GroupPartition> slot_partition;  // per slot, over the items
  GroupPartition column_groups;                // items interchangeable on every slot
  int makespan_var = -1;                       // bounding variable, -1 for pure no-good apps
  Oracle oracle;
};

enum class SolveMode { Plain, Pool, EfRow, EfCons };
enum class SolveStatus { Optimal, Infeasible, NodeLimit, TimeLimit };

struct SolveSettings {
  SolveMode mode = SolveMode::Pool;
  bool symbreak = false;
  int node_limit = std::numeric_limits<int>::max();
  double time_limit = std::numeric_limits<double>::infinity();  // seconds
  int row_age_limit = 5;  // EfRow: consecutive slack solves before a row is dropped
  std::function<void(const std::vector<double>&)> on_incumbent;
};

struct SolveStats {
  int nodes = 0;
  int lp_solves = 0;
  int oracle_calls = 0;
  int pool_hits = 0;             // slots where the pool replaced an oracle call
  int separated_solutions = 0;   // integral candidates that received a cut
  int cuts_added = 0;
  int ef_rows_removed = 0;
  int pool_size = 0;
  double cut_time_sec = 0.0;     // wall time inside separation, pool scans included
  double oracle_time_sec = 0.0;  // portion of cut_time_sec spent in oracle calls
};

struct SolveResult {
  SolveStatus status = SolveStatus::Infeasible;
  double objective = std::numeric_limits<double>::infinity();
  double bound = -std::numeric_limits<double>::infinity();
  std::vector<double> solution;  // full master vector at the incumbent
  std::vector<ZetaBlock> blocks;  // counting blocks, EF modes only
  SolveStats stats;
};

// Lexicographic ordering between interchangeable columns: the slot-indicator
// word of an earlier item weakly dominates the next one's. Weights stay exact
// in doubles up to 40 slots.
inline std::vector<LinearRow> build_symbreak_rows(const AssignmentLayout& layout,
                                                  const GroupPartition& column_groups) {
  if (layout.num_slots > 40)
    throw Error(ErrorKind::TooManySlots, "lexicographic weights exceed exact double range");
  std::vector<LinearRow> rows;
  for (const auto& group : column_groups.groups) {
    for (std::size_t t = 0; t + 1 < group.size(); ++t) {
      LinearRow row;
      for (int i = 0; i < layout.num_slots; ++i) {
        const double w = std::ldexp(1.0, layout.num_slots - 1 - i);
        row.coeffs.push_back({layout.z(i, group[t]), w});
        row.coeffs.push_back({layout.z(i, group[t + 1]), -w});
      }
      row.rel = Relation::GE;
      row.rhs = 0.0;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

namespace detail {

inline double row_activity(const LinearRow& row, const std::vector<double>& x) {
  double act = 0.0;
  for (auto [j, a] : row.coeffs) act += a * x[j];
  return act;
}

class BncEngine {
 public:
  BncEngine(const MasterModel& mm, const SolveSettings& st) : mm_(mm), st_(st) {}

  SolveResult run() {
    start_ = std::chrono::steady_clock::now();
    model_ = LpModel(mm_.base);
    is_integer_ = mm_.is_integer;
    is_integer_.resize(mm_.base.num_vars, 0);
    if (st_.symbreak)
      for (auto& row : build_symbreak_rows(mm_.layout, mm_.column_groups))
        model_.base().rows.push_back(std::move(row));
    if (st_.mode == SolveMode::EfRow || st_.mode == SolveMode::EfCons) {
      for (int s = 0; s < static_cast<int>(mm_.slot_partition.size()); ++s) {
        const GroupPartition& p = mm_.slot_partition[s];
        for (std::size_t gi = 0; gi < p.num_groups(); ++gi) {
          std::vector<int> vars;
          for (int j : p.groups[gi]) vars.push_back(mm_.layout.z(s, j));
          blocks_.push_back(build_zeta_block(model_.base(), is_integer_, s,
                                             static_cast<int>(gi), p.groups[gi], vars));
        }
      }
    }

    SolveResult res;
    std::priority_queue<Node, std::vector<Node>, NodeOrder> queue;
    queue.push({0, -std::numeric_limits<double>::infinity(), {}});
    int next_id = 1;
    bool hit_node_limit = false, hit_time_limit = false;

    while (!queue.empty()) {
      if (elapsed() > st_.time_limit) {
        hit_time_limit = true;
        break;
      }
      if (res.stats.nodes >= st_.node_limit) {
        hit_node_limit = true;
        break;
      }
      Node node = queue.top();
      queue.pop();
      if (node.bound >= incumbent_ - kIntTol) continue;
      ++res.stats.nodes;

      auto saved = apply_fixes(node.fixes);
      std::optional<std::pair<int, double>> branch;
      bool pruned = false;
      for (int round = 0;; ++round) {
        if (round > 2000)
          throw Error(ErrorKind::NumericalBreakdown, "separation failed to make progress");
        const LpSolution sol = model_.solve();
        ++res.stats.lp_solves;
        if (sol.status == LpStatus::Unbounded)
          throw Error(ErrorKind::SubproblemUnbounded, "master relaxation is unbounded");
        if (st_.mode == SolveMode::EfRow && sol.status == LpStatus::Optimal)
          age_managed_rows(sol.primal, res.stats);
        if (sol.status == LpStatus::Infeasible || sol.objective >= incumbent_ - kIntTol) {
          pruned = true;
          break;
        }
        const int frac = most_fractional(sol.primal);
        if (frac >= 0) {
          branch = {frac, sol.primal[frac]};
          node.bound = sol.objective;
          break;
        }
        if (!separate(sol, res.stats)) {
          incumbent_ = sol.objective;
          res.solution = sol.primal;
          if (st_.on_incumbent) st_.on_incumbent(sol.primal);
          break;
        }
      }
      restore_fixes(saved);

      if (pruned || !branch) continue;
      const auto [var, val] = *branch;
      Node down = node, up = node;
      down.id = next_id++;
      down.fixes.push_back({var, effective_low(node.fixes, var), std::floor(val)});
      up.id = next_id++;
      up.fixes.push_back({var, std::ceil(val), effective_high(node.fixes, var)});
      queue.push(std::move(down));
      queue.push(std::move(up));
    }

    res.stats.pool_size = static_cast<int>(pool_.size());
    res.blocks = blocks_;
    double queue_bound = std::numeric_limits<double>::infinity();
    bool surviving = false;
    while (!queue.empty()) {
      if (queue.top().bound < incumbent_ - kIntTol) {
        surviving = true;
        queue_bound = std::min(queue_bound, queue.top().bound);
      }
      queue.pop();
    }
    res.objective = incumbent_;
    if (surviving) {
      res.status = hit_time_limit ? SolveStatus::TimeLimit : SolveStatus::NodeLimit;
      res.bound = std::min(queue_bound, incumbent_);
    } else {
      res.status = std::isfinite(incumbent_) ? SolveStatus::Optimal : SolveStatus::Infeasible;
      res.bound = incumbent_;
    }
    return res;
  }

 private:
  struct Node {
    int id = 0;
    double bound = 0.0;
    std::vector<std::tuple<int, double, double>> fixes;  // var, lo, up
  };
  struct NodeOrder {
    bool operator()(const Node& a, const Node& b) const {
      if (a.bound != b.bound) return a.bound > b.bound;
      return a.id > b.id;
    }
  };
  struct ManagedRow {
    int handle = -1;
    LinearRow row;
    int age = 0;
  };

  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

  std::vector<std::tuple<int, double, double>> apply_fixes(
      const std::vector<std::tuple<int, double, double>>& fixes) {
    std::vector<std::tuple<int, double, double>> saved;
    for (auto [v, lo, up] : fixes) {
      saved.push_back({v, model_.base().lower[v], model_.base().upper[v]});
      model_.base().lower[v] = std::max(model_.base().lower[v], lo);
      model_.base().upper[v] = std::min(model_.base().upper[v], up);
    }
    return saved;
  }

  void restore_fixes(const std::vector<std::tuple<int, double, double>>& saved) {
    for (auto it = saved.rbegin(); it != saved.rend(); ++it) {
      auto [v, lo, up] = *it;
      model_.base().lower[v] = lo;
      model_.base().upper[v] = up;
    }
  }

  // Bounds seen by a node: the assembled master's (zeta included), tightened
  // by its branch fixes. Callers must invoke this with global bounds restored.
  double effective_low(const std::vector<std::tuple<int, double, double>>& fixes, int var) const {
    double lo = model_.base().lower[var];
    for (auto [v, l, u] : fixes)
      if (v == var) lo = std::max(lo, l);
    return lo;
  }

  double effective_high(const std::vector<std::tuple<int, double, double>>& fixes, int var) const {
    double up = model_.base().upper[var];
    for (auto [v, l, u] : fixes)
      if (v == var) up = std::min(up, u);
    return up;
  }

  // Most fractional wins, lowest index on ties; -1 when integral.
  int most_fractional(const std::vector<double>& x) const {
    int best = -1;
    double best_gap = kIntTol;
    for (int j = 0; j < static_cast<int>(is_integer_.size()); ++j) {
      if (!is_integer_[j]) continue;
      const double frac = x[j] - std::floor(x[j]);
      const double gap = std::min(frac, 1.0 - frac);
      if (gap > best_gap) {
        best = j;
        best_gap = gap;
      }
    }
    return best;
  }

  void age_managed_rows(const std::vector<double>& x, SolveStats& stats) {
    for (auto it = managed_.begin(); it != managed_.end();) {
      const double act = row_activity(it->row, x);
      const double tol = kCutTol * (1.0 + std::abs(it->row.rhs));
      const bool slack = it->row.rel == Relation::LE ? act < it->row.rhs - tol
                        : it->row.rel == Relation::GE ? act > it->row.rhs + tol
                                                      : false;
      it->age = slack ? it->age + 1 : 0;
      if (it->age >= st_.row_age_limit) {
        model_.remove_row(it->handle);
        ++stats.ef_rows_removed;
        it = managed_.erase(it);
      } else {
        ++it;
      }
    }
  }

  void emit(LinearRow row, SolveStats& stats) {
    ++stats.cuts_added;
    if (st_.mode == SolveMode::EfRow) {
      LinearRow copy = row;
      const int h = model_.add_row(std::move(row));
      managed_.push_back({h, std::move(copy), 0});
    } else {
      model_.add_row(std::move(row));
    }
  }

  // One pass over the slots of an integral candidate. Pool first, oracle on
  // miss; returns whether any cut was added.
  bool separate(const LpSolution& sol, SolveStats& stats) {
    const auto sep_start = std::chrono::steady_clock::now();
    const double xhat = mm_.makespan_var >= 0 ? sol.primal[mm_.makespan_var] : 0.0;
    bool any = false;
    for (int s = 0; s < mm_.layout.num_slots; ++s) {
      std::vector<int> items;
      std::vector<double> zrow(mm_.layout.num_items, 0.0);
      for (int j = 0; j < mm_.layout.num_items; ++j) {
        zrow[j] = sol.primal[mm_.layout.z(s, j)];
        if (zrow[j] > 0.5) items.push_back(j);
      }
      const GroupPartition& part = mm_.slot_partition[s];
      if (st_.mode != SolveMode::Plain) {
        const RepresentativeVector rep = representative_vector(part, items);
        bool hit = false;
        if (auto idx = dominance_match_nogood(pool_, s, rep)) {
          emit(pool_nogood_row(pool_.cuts()[*idx], part, items, s), stats);
          hit = true;
        } else if (mm_.makespan_var >= 0) {
          for (int idx : pool_.slot_cuts(s)) {
            const AbstractCut& c = pool_.cuts()[idx];
            if (c.kind != CutKind::MakespanBound) continue;
            if (auto alpha = separate_pool_prop1(c, part, zrow, xhat)) {
              emit(pool_bound_row(c, *alpha, s), stats);
              hit = true;
              break;
            }
          }
        }
        if (hit) {
          ++stats.pool_hits;
          any = true;
          continue;
        }
      }
      const auto oracle_start = std::chrono::steady_clock::now();
      const OracleResult res = mm_.oracle(s, items, xhat);
      stats.oracle_time_sec +=
          std::chrono::duration<double>(std::chrono::steady_clock::now() - oracle_start).count();
      ++stats.oracle_calls;
      if (res.feasible) continue;
      any = true;
      if (st_.mode != SolveMode::Plain)
        for (const AbstractCut& a : res.abstracts) pool_.register_cut(a);
      if ((st_.mode == SolveMode::EfRow || st_.mode == SolveMode::EfCons) &&
          !res.abstracts.empty()) {
        for (const AbstractCut& a : res.abstracts)
          emit(ef_cut_from_abstract(a, blocks_, mm_.makespan_var).row, stats);
      } else {
        for (const LinearRow& row : res.concrete) emit(row, stats);
      }
    }
    if (any) ++stats.separated_solutions;
    stats.cut_time_sec +=
        std::chrono::duration<double>(std::chrono::steady_clock::now() - sep_start).count();
    return any;
  }

  // Lowest-index instantiation of a pooled no-good inside the current support.
  LinearRow pool_nogood_row(const AbstractCut& cut, const GroupPartition& part,
                            const std::vector<int>& items, int slot) const {
    if (st_.mode == SolveMode::EfRow || st_.mode == SolveMode::EfCons)
      return ef_cut_from_abstract(cut, blocks_, mm_.makespan_var).row;
    std::vector<int> vars;
    for (std::size_t gi = 0; gi < part.num_groups(); ++gi) {
      int need = cut.rep.counts[gi];
      if (need == 0) continue;
      for (int j : part.groups[gi]) {
        if (need == 0) break;
        if (std::binary_search(items.begin(), items.end(), j)) {
          vars.push_back(mm_.layout.z(slot, j));
          --need;
        }
      }
    }
    return nogood_row(vars);
  }

  LinearRow pool_bound_row(const AbstractCut& cut, const std::vector<double>& alpha,
                           int slot) const {
    if (st_.mode == SolveMode::EfRow || st_.mode == SolveMode::EfCons)
      return ef_cut_from_abstract(cut, blocks_, mm_.makespan_var).row;
    std::vector<std::pair<int, double>> theta_vars;
    for (int j = 0; j < static_cast<int>(alpha.size()); ++j)
      if (alpha[j] != 0.0) theta_vars.push_back({mm_.layout.z(slot, j), alpha[j]});
    return bound_row(mm_.makespan_var, theta_vars, cut.bound);
  }

  const MasterModel& mm_;
  SolveSettings st_;
  LpModel model_;
  std::vector<char> is_integer_;
  std::vector<ZetaBlock> blocks_;
  CutPool pool_;
  std::vector<ManagedRow> managed_;
  double incumbent_ = std::numeric_limits<double>::infinity();
  std::chrono::steady_clock::time_point start_;
};

}  // namespace detail

inline SolveResult solve_bnc(const MasterModel& mm, const SolveSettings& st = {}) {
  if (mm.layout.num_slots <= 0 || mm.layout.num_items <= 0 ||
      static_cast<int>(mm.layout.z_index.size()) != mm.layout.num_slots * mm.layout.num_items)
    throw Error(ErrorKind::MalformedModel, "assignment layout does not match the master");
  if (static_cast<int>(mm.slot_partition.size()) != mm.layout.num_slots)
    throw Error(ErrorKind::MalformedModel, "one item partition per slot is required");
  if (!mm.oracle) throw Error(ErrorKind::MalformedModel, "master has no oracle");
  return detail::BncEngine(mm, st).run();
}

}  // namespace symbd
