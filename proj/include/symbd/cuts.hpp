#pragma once

#include <map>
#include <optional>
#include <set>
#include <tuple>
#include <vector>

#include "symbd/lp.hpp"
#include "symbd/partition.hpp"

namespace symbd {

enum class CutKind { NoGood, MakespanBound };

// A Benders cut stored up to slot symmetry: only the representative vector and
// the per-group data survive, so one entry stands for its whole orbit.
struct AbstractCut {
  CutKind kind = CutKind::NoGood;
  int slot = -1;
  RepresentativeVector rep;   // over the slot's item partition
  double bound = 0.0;         // MakespanBound: oracle makespan of the defining set
  std::vector<double> theta;  // MakespanBound: per-group coefficient, 0 where rep = 0
};

struct ConcreteCut {
  LinearRow row;
  CutKind kind = CutKind::NoGood;
  int slot = -1;
  bool from_pool = false;
};

class CutPool {
 public:
  // Duplicates, detected by (slot, kind, rep), are refused. Dominated entries
  // are kept: matching stays a linear scan and removal would not change which
  // solutions get cut.
  bool register_cut(AbstractCut c) {
    auto key = std::make_tuple(c.slot, static_cast<int>(c.kind), c.rep.counts);
    if (!seen_.insert(std::move(key)).second) return false;
    by_slot_[c.slot].push_back(static_cast<int>(cuts_.size()));
    cuts_.push_back(std::move(c));
    return true;
  }

  const std::vector<AbstractCut>& cuts() const { return cuts_; }
  std::size_t size() const { return cuts_.size(); }

  // Indices of this slot's cuts in insertion order.
  const std::vector<int>& slot_cuts(int slot) const {
    static const std::vector<int> empty;
    auto it = by_slot_.find(slot);
    return it == by_slot_.end() ? empty : it->second;
  }

 private:
  std::vector<AbstractCut> cuts_;
  std::map<int, std::vector<int>> by_slot_;
  std::set<std::tuple<int, int, std::vector<int>>> seen_;
};

// max over within-group permutations pi of <pi^-1(alpha), zhat>, computed by
// sorted matching per group: k-th largest coefficient meets k-th largest
// zhat entry. Ties break on lowest index, so the permuted vector is unique.
// Returns the maximum and the realizing coefficient assignment.
inline std::pair<double, std::vector<double>> best_symmetric_value(
    const std::vector<double>& alpha, const std::vector<double>& zhat,
    const GroupPartition& partition) {
  std::vector<double> permuted(alpha.size(), 0.0);
  double value = 0.0;
  for (const auto& g : partition.groups) {
    std::vector<int> order(g);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return zhat[a] > zhat[b]; });
    std::vector<double> coeffs;
    for (int j : g) coeffs.push_back(alpha[j]);
    std::stable_sort(coeffs.begin(), coeffs.end(), std::greater<double>());
    for (std::size_t t = 0; t < g.size(); ++t) {
      permuted[order[t]] = coeffs[t];
      value += coeffs[t] * zhat[order[t]];
    }
  }
  return {value, std::move(permuted)};
}

// First stored no-good whose representative vector is dominated by rep(N_i):
// the current support then contains a member of the stored infeasible family,
// so the matched instantiation is violated without any oracle work.
inline std::optional<int> dominance_match_nogood(const CutPool& pool, int slot,
                                                const RepresentativeVector& rep) {
  for (int idx : pool.slot_cuts(slot)) {
    const AbstractCut& c = pool.cuts()[idx];
    if (c.kind == CutKind::NoGood && dominates(rep, c.rep)) return idx;
  }
  return std::nullopt;
}

// Prop-1-style separation of a stored bound cut against one slot's zhat row
// and the bounding variable value xhat. Returns the per-item coefficient
// vector of the most violated family member, or nullopt if none is violated
// by more than eps.
inline std::optional<std::vector<double>> separate_pool_prop1(const AbstractCut& cut,
                                                              const GroupPartition& partition,
                                                              const std::vector<double>& zhat,
                                                              double xhat, double eps = kCutTol) {
  std::vector<double> alpha(partition.universe, 0.0);
  double beta = cut.bound;
  for (std::size_t gi = 0; gi < partition.num_groups(); ++gi) {
    const int r = cut.rep.counts[gi];
    if (r == 0) continue;
    const double th = cut.theta[gi];
    for (int t = 0; t < r; ++t) alpha[partition.groups[gi][t]] = th;
    beta -= r * th;
  }
  auto [value, permuted] = best_symmetric_value(alpha, zhat, partition);
  if (value + beta <= xhat + eps) return std::nullopt;
  return permuted;
}

// Counting variables for one (slot, group): zeta^k = 1 iff at least k of the
// group's assignment variables are set.
struct ZetaBlock {
  int slot = -1;
  int group = -1;               // position in the slot's partition
  std::vector<int> members;     // item indices, ascending
  std::vector<int> member_vars; // their assignment variables
  std::vector<int> zeta_vars;   // zeta_vars[k-1] is zeta^k, k = 1..|members|
};

// Appends |G| binary zeta columns and the 2|G| linking rows
//   sum z <= k-1 + (|G|-k+1) zeta^k  and  k zeta^k <= sum z.
// With integral z these force zeta^k = [sum z >= k].
inline ZetaBlock build_zeta_block(LinearProgram& lp, std::vector<char>& is_integer, int slot,
                                  int group, std::vector<int> members,
                                  std::vector<int> member_vars) {
  ZetaBlock b;
  b.slot = slot;
  b.group = group;
  b.members = std::move(members);
  b.member_vars = std::move(member_vars);
  const int g = static_cast<int>(b.members.size());
  for (int k = 1; k <= g; ++k) {
    const int zv = lp.add_var(0.0, 0.0, 1.0);
    is_integer.push_back(1);
    b.zeta_vars.push_back(zv);
    LinearRow up;  // sum z - (g-k+1) zeta^k <= k-1
    for (int v : b.member_vars) up.coeffs.push_back({v, 1.0});
    up.coeffs.push_back({zv, -static_cast<double>(g - k + 1)});
    up.rel = Relation::LE;
    up.rhs = k - 1.0;
    lp.rows.push_back(std::move(up));
    LinearRow lo;  // k zeta^k - sum z <= 0
    lo.coeffs.push_back({zv, static_cast<double>(k)});
    for (int v : b.member_vars) lo.coeffs.push_back({v, -1.0});
    lo.rel = Relation::LE;
    lo.rhs = 0.0;
    lp.rows.push_back(std::move(lo));
  }
  return b;
}

inline const ZetaBlock* find_zeta_block(const std::vector<ZetaBlock>& blocks, int slot,
                                        int group) {
  for (const ZetaBlock& b : blocks)
    if (b.slot == slot && b.group == group) return &b;
  return nullptr;
}

// Extended-formulation row covering the cut's whole symmetric family.
//   NoGood:        sum over groups with rep > 0 of zeta^rep  <=  count - 1
//   MakespanBound: T - sum_G theta_G (zeta^1 + .. + zeta^rep) >= bound - sum_G rep theta_G
inline ConcreteCut ef_cut_from_abstract(const AbstractCut& cut,
                                        const std::vector<ZetaBlock>& blocks, int t_var = -1) {
  ConcreteCut out;
  out.kind = cut.kind;
  out.slot = cut.slot;
  LinearRow row;
  int active = 0;
  double rhs_shift = 0.0;
  for (std::size_t gi = 0; gi < cut.rep.counts.size(); ++gi) {
    const int r = cut.rep.counts[gi];
    if (r == 0) continue;
    const ZetaBlock* b = find_zeta_block(blocks, cut.slot, static_cast<int>(gi));
    if (!b) throw Error(ErrorKind::MissingBlock, "no zeta block for this slot and group");
    ++active;
    if (cut.kind == CutKind::NoGood) {
      row.coeffs.push_back({b->zeta_vars[r - 1], 1.0});
    } else {
      const double th = cut.theta[gi];
      for (int h = 1; h <= r; ++h) row.coeffs.push_back({b->zeta_vars[h - 1], -th});
      rhs_shift += r * th;
    }
  }
  if (cut.kind == CutKind::NoGood) {
    row.rel = Relation::LE;
    row.rhs = active - 1.0;
  } else {
    if (t_var < 0)
      throw Error(ErrorKind::MalformedModel, "bound cut needs the bounding variable");
    row.coeffs.insert(row.coeffs.begin(), {t_var, 1.0});
    row.rel = Relation::GE;
    row.rhs = cut.bound - rhs_shift;
  }
  out.row = std::move(row);
  return out;
}

// Plain z-space rows for the same two cut shapes.
inline LinearRow nogood_row(const std::vector<int>& vars) {
  LinearRow row;
  for (int v : vars) row.coeffs.push_back({v, 1.0});
  row.rel = Relation::LE;
  row.rhs = static_cast<double>(vars.size()) - 1.0;
  return row;
}

inline LinearRow bound_row(int t_var, const std::vector<std::pair<int, double>>& theta_vars,
                           double bound) {
  LinearRow row;  // T - sum theta_j z_j >= bound - sum theta_j
  row.coeffs.push_back({t_var, 1.0});
  double shift = 0.0;
  for (auto [v, th] : theta_vars) {
    row.coeffs.push_back({v, -th});
    shift += th;
  }
  row.rel = Relation::GE;
  row.rhs = bound - shift;
  return row;
}

}  // namespace symbd
