#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include "symbd/core.hpp"
#include "symbd/cuts.hpp"
#include "symbd/lp.hpp"
#include "symbd/mip.hpp"
#include "symbd/partition.hpp"
#include "symbd/sdg.hpp"

namespace symbd {

// Makespan minimization on unrelated machines with sequence-dependent setup
// times. Job 0 is the artificial depot, present on every machine: p[i][0] = 0
// and s[i][j][0] = 0 (returning is free), while s[i][0][k] may be positive to
// model machine start-up. Real jobs are 1..n.
struct SchedulingInstance {
  int machines = 0;
  std::vector<std::vector<double>> p;               // [machine][job], indexed 0..n
  std::vector<std::vector<std::vector<double>>> s;  // [machine][from][to], 0..n each
  int num_jobs() const { return p.empty() ? 0 : static_cast<int>(p[0].size()) - 1; }
};

inline void validate_scheduling(const SchedulingInstance& inst) {
  if (inst.machines <= 0 || inst.p.empty() || inst.s.empty())
    throw Error(ErrorKind::EmptyInput, "instance needs machines, p and s");
  if (static_cast<int>(inst.p.size()) != inst.machines ||
      static_cast<int>(inst.s.size()) != inst.machines)
    throw Error(ErrorKind::BadInput, "p and s must have one entry per machine");
  const int n = inst.num_jobs();
  if (n <= 0) throw Error(ErrorKind::EmptyInput, "instance needs at least one real job");
  for (int i = 0; i < inst.machines; ++i) {
    if (static_cast<int>(inst.p[i].size()) != n + 1)
      throw Error(ErrorKind::BadInput, "p row has the wrong length");
    if (inst.p[i][0] != 0.0) throw Error(ErrorKind::BadInput, "depot processing time must be 0");
    for (double v : inst.p[i])
      if (!(v >= 0.0)) throw Error(ErrorKind::BadInput, "negative processing time");
    if (static_cast<int>(inst.s[i].size()) != n + 1)
      throw Error(ErrorKind::BadInput, "s block has the wrong shape");
    for (int a = 0; a <= n; ++a) {
      if (static_cast<int>(inst.s[i][a].size()) != n + 1)
        throw Error(ErrorKind::BadInput, "s block has the wrong shape");
      for (double v : inst.s[i][a])
        if (!(v >= 0.0)) throw Error(ErrorKind::BadInput, "negative setup time");
      if (inst.s[i][a][0] != 0.0) throw Error(ErrorKind::BadInput, "setup into the depot must be 0");
      if (inst.s[i][a][a] != 0.0) throw Error(ErrorKind::BadInput, "setup diagonal must be 0");
    }
    // Triangle with any predecessor, the depot included. The depot rows are
    // what make dropping the first job of a sequence a shortcut, and without
    // that, bound cuts would not survive assignments that add jobs on top of
    // the defining set. Triples through the depot as midpoint are exempt:
    // s[.][0] is pinned to 0, so they would outlaw any positive start-up.
    for (int j = 0; j <= n; ++j)
      for (int k = 1; k <= n; ++k) {
        if (k == j) continue;
        for (int l = 1; l <= n; ++l) {
          if (l == j || l == k) continue;
          if (inst.s[i][j][k] + inst.s[i][k][l] < inst.s[i][j][l] - 1e-9)
            throw Error(ErrorKind::BadInput, "setup times violate the triangle inequality");
        }
      }
  }
}

// Jobs j1, j2 are interchangeable on machine i when they have equal processing
// times, identical setups against everything else including the depot, and a
// symmetric mutual setup. Exact equality on rounded keys; the relation is
// transitive for such data, and group_by_relation fails loudly otherwise.
// Returned partition is over 0-based items, item e standing for job e+1.
inline GroupPartition job_equivalence(const SchedulingInstance& inst, int i) {
  if (i < 0 || i >= inst.machines) throw Error(ErrorKind::BadInput, "machine index out of range");
  const int n = inst.num_jobs();
  const auto& p = inst.p[i];
  const auto& s = inst.s[i];
  auto eq = [](double a, double b) { return numeric_key(a) == numeric_key(b); };
  return group_by_relation(n, [&](int a, int b) {
    const int j1 = a + 1, j2 = b + 1;
    if (!eq(p[j1], p[j2])) return false;
    if (!eq(s[j1][j2], s[j2][j1])) return false;
    for (int k = 0; k <= n; ++k) {
      if (k == j1 || k == j2) continue;
      if (!eq(s[j1][k], s[j2][k]) || !eq(s[k][j1], s[k][j2])) return false;
    }
    return true;
  });
}

// Minimum total setup over all orderings of C on machine i: start at the
// depot, visit every job once, return free. Subset DP over 2^|C| states.
// C holds job ids from 1..n.
inline double tsp_min_setup(const SchedulingInstance& inst, int i, const std::vector<int>& C) {
  const int m = static_cast<int>(C.size());
  if (m == 0) return 0.0;
  if (m > 20) throw Error(ErrorKind::TooLarge, "setup tour limited to 20 jobs");
  const int n = inst.num_jobs();
  for (int j : C)
    if (j < 1 || j > n) throw Error(ErrorKind::UnknownItem, "job id outside the instance");
  const auto& s = inst.s[i];
  const std::size_t full = std::size_t{1} << m;
  std::vector<double> dp(full * m, kInf);
  for (int t = 0; t < m; ++t) dp[(std::size_t{1} << t) * m + t] = s[0][C[t]];
  for (std::size_t mask = 1; mask < full; ++mask)
    for (int last = 0; last < m; ++last) {
      if (!(mask >> last & 1)) continue;
      const double cur = dp[mask * m + last];
      if (cur >= kInf) continue;
      for (int nxt = 0; nxt < m; ++nxt) {
        if (mask >> nxt & 1) continue;
        double& cell = dp[(mask | std::size_t{1} << nxt) * m + nxt];
        cell = std::min(cell, cur + s[C[last]][C[nxt]]);
      }
    }
  double best = kInf;
  for (int last = 0; last < m; ++last) best = std::min(best, dp[(full - 1) * m + last]);
  return best;
}

inline double makespan(const SchedulingInstance& inst, int i, const std::vector<int>& C) {
  double total = tsp_min_setup(inst, i, C);
  for (int j : C) total += inst.p[i][j];
  return total;
}

// One Benders bound cut for machine i and job set C: T >= T_i(C) minus theta_j
// for each missing job. theta_j caps the saving when j leaves the set: its
// processing time plus the largest setup into j from any possible predecessor.
// The depot counts as a predecessor; without it the cut overshoots once C has
// been pared down to nothing, since the last removal also saves the start-up.
struct SchedulingCut {
  double bound = 0.0;         // T_i(C)
  std::vector<int> jobs;      // C, ascending
  std::vector<double> theta;  // aligned with jobs
  AbstractCut abstract;       // group form over the machine's job partition
};

inline SchedulingCut scheduling_cut(const SchedulingInstance& inst, int i, std::vector<int> C,
                                    const GroupPartition& groups) {
  if (C.empty()) throw Error(ErrorKind::EmptyInput, "cut needs a nonempty job set");
  std::sort(C.begin(), C.end());
  SchedulingCut out;
  out.bound = makespan(inst, i, C);
  const auto& s = inst.s[i];
  for (int j : C) {
    double worst = s[0][j];
    for (int k : C)
      if (k != j) worst = std::max(worst, s[k][j]);
    out.theta.push_back(inst.p[i][j] + worst);
  }
  std::vector<int> items;
  for (int j : C) items.push_back(j - 1);
  AbstractCut a;
  a.kind = CutKind::MakespanBound;
  a.slot = i;
  a.rep = representative_vector(groups, items);
  a.bound = out.bound;
  a.theta.assign(groups.num_groups(), 0.0);
  // Same recipe at group level. Another group is a possible predecessor as
  // soon as it has a member in the set; the group itself only when it has two.
  for (std::size_t gi = 0; gi < groups.num_groups(); ++gi) {
    const int r = a.rep.counts[gi];
    if (r == 0) continue;
    const auto& g = groups.groups[gi];
    const int j = g.front() + 1;
    double worst = s[0][j];
    for (std::size_t gh = 0; gh < groups.num_groups(); ++gh) {
      if (a.rep.counts[gh] == 0) continue;
      if (gh == gi) {
        if (r >= 2) worst = std::max(worst, s[g[1] + 1][j]);
      } else {
        worst = std::max(worst, s[groups.groups[gh].front() + 1][j]);
      }
    }
    a.theta[gi] = inst.p[i][j] + worst;
  }
  out.jobs = std::move(C);
  out.abstract = std::move(a);
  return out;
}

struct SchedulingBuild {
  MasterModel master;
  int t_var = -1;
  std::vector<int> xi_vars;
  int y_base = 0;  // first y column; one (n+1)^2 block per machine, row-major
  Sdg sdg;

  int y(int i, int from, int to) const {
    const int n0 = y_stride;
    return y_base + (i * n0 + from) * n0 + to;
  }
  int y_stride = 0;  // n + 1
};

inline Sdg build_sdg_scheduling(const SchedulingInstance& inst, const SchedulingBuild& b);

// Assignment master with an embedded relaxation of each machine's setup tour.
// Arc variables y are continuous: they only tighten the LP bound, the lazy
// bound cuts carry the exact makespans. Self-loops on real jobs are pinned to
// 0 so an assigned job must be entered and left through priced arcs; the
// depot keeps its self-loop free, which is what an empty machine uses.
inline SchedulingBuild build_master_scheduling(const SchedulingInstance& inst) {
  validate_scheduling(inst);
  const int M = inst.machines;
  const int n = inst.num_jobs();
  const int n0 = n + 1;
  if (n > 20) throw Error(ErrorKind::TooLarge, "oracle handles at most 20 jobs per machine");

  SchedulingBuild out;
  MasterModel& mm = out.master;
  mm.layout.num_slots = M;
  mm.layout.num_items = n;
  for (int i = 0; i < M; ++i)
    for (int e = 0; e < n; ++e) {
      mm.layout.z_index.push_back(mm.base.add_var(0.0, 0.0, 1.0));
      mm.is_integer.push_back(1);
    }
  out.y_base = mm.base.num_vars;
  out.y_stride = n0;
  for (int i = 0; i < M; ++i)
    for (int a = 0; a < n0; ++a)
      for (int b = 0; b < n0; ++b) {
        const double hi = (a == b && a != 0) ? 0.0 : 1.0;
        mm.base.add_var(0.0, 0.0, hi);
        mm.is_integer.push_back(0);
      }
  for (int i = 0; i < M; ++i) {
    out.xi_vars.push_back(mm.base.add_var(0.0, 0.0, kInf));
    mm.is_integer.push_back(0);
  }
  out.t_var = mm.base.add_var(1.0, 0.0, kInf);
  mm.is_integer.push_back(0);
  mm.makespan_var = out.t_var;

  for (int e = 0; e < n; ++e) {
    LinearRow row;  // every job on exactly one machine
    for (int i = 0; i < M; ++i) row.coeffs.push_back({mm.layout.z(i, e), 1.0});
    row.rel = Relation::EQ;
    row.rhs = 1.0;
    mm.base.rows.push_back(std::move(row));
  }
  for (int i = 0; i < M; ++i) {
    LinearRow dout;  // the depot leaves once, possibly to itself
    LinearRow din;
    for (int b = 0; b < n0; ++b) dout.coeffs.push_back({out.y(i, 0, b), 1.0});
    for (int a = 0; a < n0; ++a) din.coeffs.push_back({out.y(i, a, 0), 1.0});
    dout.rel = din.rel = Relation::EQ;
    dout.rhs = din.rhs = 1.0;
    mm.base.rows.push_back(std::move(dout));
    mm.base.rows.push_back(std::move(din));
    for (int j = 1; j <= n; ++j) {
      LinearRow o;  // assigned jobs are entered and left exactly once
      LinearRow in;
      for (int b = 0; b < n0; ++b) o.coeffs.push_back({out.y(i, j, b), 1.0});
      for (int a = 0; a < n0; ++a) in.coeffs.push_back({out.y(i, a, j), 1.0});
      o.coeffs.push_back({mm.layout.z(i, j - 1), -1.0});
      in.coeffs.push_back({mm.layout.z(i, j - 1), -1.0});
      o.rel = in.rel = Relation::EQ;
      o.rhs = in.rhs = 0.0;
      mm.base.rows.push_back(std::move(o));
      mm.base.rows.push_back(std::move(in));
    }
    LinearRow xi;  // setup load priced by the chosen arcs
    xi.coeffs.push_back({out.xi_vars[i], 1.0});
    for (int a = 0; a < n0; ++a)
      for (int b = 0; b < n0; ++b) {
        if (a == b || inst.s[i][a][b] == 0.0) continue;
        xi.coeffs.push_back({out.y(i, a, b), -inst.s[i][a][b]});
      }
    xi.rel = Relation::EQ;
    xi.rhs = 0.0;
    mm.base.rows.push_back(std::move(xi));
    LinearRow load;  // T covers processing plus setup on every machine
    load.coeffs.push_back({out.t_var, 1.0});
    for (int e = 0; e < n; ++e)
      if (inst.p[i][e + 1] != 0.0) load.coeffs.push_back({mm.layout.z(i, e), -inst.p[i][e + 1]});
    load.coeffs.push_back({out.xi_vars[i], -1.0});
    load.rel = Relation::GE;
    load.rhs = 0.0;
    mm.base.rows.push_back(std::move(load));
  }

  for (int i = 0; i < M; ++i) mm.slot_partition.push_back(job_equivalence(inst, i));
  // Columns interchangeable on every machine: the meet of the per-machine
  // partitions, keyed by each item's group membership profile.
  {
    std::map<std::vector<int>, std::vector<int>> buckets;
    for (int e = 0; e < n; ++e) {
      std::vector<int> key;
      for (int i = 0; i < M; ++i) key.push_back(mm.slot_partition[i].group_of[e]);
      buckets[key].push_back(e);
    }
    std::vector<std::vector<int>> meet;
    for (auto& [key, members] : buckets) meet.push_back(members);
    mm.column_groups = GroupPartition::from_groups(n, std::move(meet));
  }

  out.sdg = build_sdg_scheduling(inst, out);

  const SchedulingInstance data = inst;
  const AssignmentLayout layout = mm.layout;
  const std::vector<GroupPartition> groups = mm.slot_partition;
  const int t_var = out.t_var;
  mm.oracle = [data, layout, groups, t_var](int slot, const std::vector<int>& items,
                                            double xhat) -> OracleResult {
    if (items.empty()) return {};
    std::vector<int> jobs;
    for (int e : items) jobs.push_back(e + 1);
    SchedulingCut cut = scheduling_cut(data, slot, std::move(jobs), groups[slot]);
    if (xhat >= cut.bound - kCutTol * (1.0 + std::abs(cut.bound))) return {};
    OracleResult res;
    res.feasible = false;  // T undercuts this machine: reject the candidate
    std::vector<std::pair<int, double>> theta_vars;
    for (std::size_t t = 0; t < cut.jobs.size(); ++t)
      theta_vars.push_back({layout.z(slot, cut.jobs[t] - 1), cut.theta[t]});
    res.concrete.push_back(bound_row(t_var, theta_vars, cut.bound));
    res.abstracts.push_back(std::move(cut.abstract));
    return res;
  };
  return out;
}

// Compact detection graph: the master's own structure plus one gadget per
// machine. The gadget hangs every z column off a machine anchor with an edge
// colored by that job's start-up, and adds one dummy node per job pair whose
// two edges carry the ordered setups, seen from each endpoint's side. A
// certified swap must preserve processing times (variable payload), setups
// against everyone else, start-ups, and the mutual setup symmetry.
inline Sdg build_sdg_scheduling(const SchedulingInstance& inst, const SchedulingBuild& b) {
  const int M = inst.machines;
  const int n = inst.num_jobs();
  const LinearProgram& lp = b.master.base;
  ColorInterner ic;
  std::vector<std::int64_t> extra(lp.num_vars, 0);
  for (int i = 0; i < M; ++i)
    for (int e = 0; e < n; ++e) extra[b.master.layout.z(i, e)] = numeric_key(inst.p[i][e + 1]);
  Sdg g = build_mip_sdg(lp, b.master.is_integer, ic, &extra);
  for (int i = 0; i < M; ++i) {
    Sdg gadget;
    const int anc = gadget.add_node(ic.intern({sdgtag::kMachAnchor}));
    gadget.add_anchor(anc);
    for (int e = 0; e < n; ++e) {
      const int key = b.master.layout.z(i, e);
      gadget.add_variable_node(key, g.nodes[g.var_node.at(key)].color);
      gadget.add_edge(anc, gadget.var_node.at(key),
                      ic.intern({sdgtag::kStartup, numeric_key(inst.s[i][0][e + 1])}));
    }
    for (int e1 = 0; e1 < n; ++e1)
      for (int e2 = e1 + 1; e2 < n; ++e2) {
        const int j = e1 + 1, k = e2 + 1;
        const int d = gadget.add_node(ic.intern({sdgtag::kPair}));
        gadget.add_edge(d, gadget.var_node.at(b.master.layout.z(i, e1)),
                        ic.intern({sdgtag::kPairEdge, numeric_key(inst.s[i][j][k]),
                                   numeric_key(inst.s[i][k][j])}));
        gadget.add_edge(d, gadget.var_node.at(b.master.layout.z(i, e2)),
                        ic.intern({sdgtag::kPairEdge, numeric_key(inst.s[i][k][j]),
                                   numeric_key(inst.s[i][j][k])}));
        gadget.add_edge(d, anc, ic.intern({sdgtag::kPair, 1}));
      }
    g = merge_sdgs(g, gadget);
  }
  return g;
}

// Certified swap groups among machine i's assignment columns, over items.
inline GroupPartition detect_scheduling_groups(const SchedulingBuild& b, int i) {
  const int n = b.master.layout.num_items;
  std::vector<char> is_seed(b.master.base.num_vars, 0);
  for (int e = 0; e < n; ++e) is_seed[b.master.layout.z(i, e)] = 1;
  const GroupPartition raw = detect_group_partition(b.sdg, [&is_seed](int key) {
    return key >= 0 && key < static_cast<int>(is_seed.size()) && is_seed[key];
  });
  std::vector<std::vector<int>> item_groups;
  for (const auto& grp : raw.groups) {
    if (!is_seed[grp.front()]) continue;
    std::vector<int> items;
    for (int key : grp) items.push_back(key - b.master.layout.z(i, 0));
    item_groups.push_back(std::move(items));
  }
  return GroupPartition::from_groups(n, std::move(item_groups));
}

}  // namespace symbd
