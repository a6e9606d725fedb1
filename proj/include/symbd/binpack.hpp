#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <vector>

#include "symbd/core.hpp"
#include "symbd/cuts.hpp"
#include "symbd/mip.hpp"
#include "symbd/partition.hpp"
#include "symbd/sdg.hpp"

namespace symbd {

struct RectItem {
  double w = 0.0, h = 0.0;
};
struct RectBin {
  double w = 0.0, h = 0.0;
};

// Two packing flavors share one master shape: assignment variables z[bin][item],
// bin-open variables u, and a subproblem oracle owning the capacity logic.
struct BinPackInstance {
  enum class Kind { Mkp, Rectangle };
  Kind kind = Kind::Mkp;
  std::vector<double> weights;  // Mkp items
  std::vector<double> caps;     // Mkp bins
  std::vector<RectItem> items;  // Rectangle items
  std::vector<RectBin> bins;    // Rectangle bins

  int num_items() const {
    return static_cast<int>(kind == Kind::Mkp ? weights.size() : items.size());
  }
  int num_slots() const {
    return static_cast<int>(kind == Kind::Mkp ? caps.size() : bins.size());
  }
};

inline void validate_binpack(const BinPackInstance& inst) {
  if (inst.num_items() == 0 || inst.num_slots() == 0)
    throw Error(ErrorKind::EmptyInput, "packing instance needs items and bins");
  if (inst.kind == BinPackInstance::Kind::Mkp) {
    for (double w : inst.weights)
      if (!(w > 0.0)) throw Error(ErrorKind::BadInput, "item weights must be positive");
    for (double c : inst.caps)
      if (!(c > 0.0)) throw Error(ErrorKind::BadInput, "capacities must be positive");
  } else {
    for (const RectItem& it : inst.items)
      if (!(it.w > 0.0) || !(it.h > 0.0))
        throw Error(ErrorKind::BadInput, "rectangle sides must be positive");
    for (const RectBin& b : inst.bins)
      if (!(b.w > 0.0) || !(b.h > 0.0))
        throw Error(ErrorKind::BadInput, "bin sides must be positive");
  }
}

struct Placement {
  int item = -1;
  double x = 0.0, y = 0.0;
};

// Exact feasibility of one bin: depth-first search over the canonical raster,
// the subset sums of the other items' widths and heights. If any packing
// exists, a bottom-left-justified one exists on that raster, so the search is
// complete. No rotation.
inline std::optional<std::vector<Placement>> pack_rectangles(double W, double H,
                                                             const std::vector<RectItem>& items,
                                                             std::vector<int> subset) {
  if (subset.size() > 16)
    throw Error(ErrorKind::TooLarge, "rectangle subproblem beyond enumeration size");
  double area = 0.0;
  for (int j : subset) {
    if (items[j].w > W + 1e-9 || items[j].h > H + 1e-9) return std::nullopt;
    area += items[j].w * items[j].h;
  }
  if (area > W * H + 1e-9) return std::nullopt;
  std::sort(subset.begin(), subset.end(), [&](int a, int b) {
    const double aa = items[a].w * items[a].h, ab = items[b].w * items[b].h;
    if (aa != ab) return aa > ab;
    return a < b;
  });
  auto raster = [&](auto side) {
    std::vector<double> pts{0.0};
    for (int j : subset) {
      const std::size_t sz = pts.size();
      for (std::size_t t = 0; t < sz; ++t) pts.push_back(pts[t] + side(items[j]));
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](double a, double b) { return numeric_key(a) == numeric_key(b); }),
              pts.end());
    return pts;
  };
  const std::vector<double> xs = raster([](const RectItem& r) { return r.w; });
  const std::vector<double> ys = raster([](const RectItem& r) { return r.h; });

  std::vector<Placement> placed;
  auto overlaps = [&](double x, double y, double w, double h) {
    for (const Placement& p : placed) {
      const RectItem& q = items[p.item];
      if (x < p.x + q.w - 1e-7 && p.x < x + w - 1e-7 && y < p.y + q.h - 1e-7 &&
          p.y < y + h - 1e-7)
        return true;
    }
    return false;
  };
  std::function<bool(std::size_t)> dfs = [&](std::size_t t) {
    if (t == subset.size()) return true;
    const RectItem& it = items[subset[t]];
    for (double y : ys) {
      if (y + it.h > H + 1e-7) break;
      for (double x : xs) {
        if (x + it.w > W + 1e-7) break;
        if (overlaps(x, y, it.w, it.h)) continue;
        placed.push_back({subset[t], x, y});
        if (dfs(t + 1)) return true;
        placed.pop_back();
      }
    }
    return false;
  };
  if (!dfs(0)) return std::nullopt;
  std::sort(placed.begin(), placed.end(),
            [](const Placement& a, const Placement& b) { return a.item < b.item; });
  return placed;
}

inline bool mkp_bin_fits(const BinPackInstance& inst, int bin, const std::vector<int>& items) {
  double load = 0.0;
  for (int j : items) load += inst.weights[j];
  return load <= inst.caps[bin] + kFeasTol;
}

// Master, detection graph, and oracle for one instance. Slot partitions come
// from the merged graph: the standard MIP graph of the master plus one data
// gadget per bin, so certified swaps respect the capacity data that the
// master rows never see.
struct BinPackBuild {
  MasterModel master;
  std::vector<int> u_vars;
  Sdg sdg;
  GroupPartition item_groups;
};

inline BinPackBuild build_binpack(const BinPackInstance& inst) {
  validate_binpack(inst);
  const int S = inst.num_slots();
  const int N = inst.num_items();

  BinPackBuild out;
  MasterModel& mm = out.master;
  mm.layout.num_slots = S;
  mm.layout.num_items = N;
  for (int s = 0; s < S; ++s)
    for (int j = 0; j < N; ++j) {
      mm.layout.z_index.push_back(mm.base.add_var(0.0, 0.0, 1.0));
      mm.is_integer.push_back(1);
    }
  for (int s = 0; s < S; ++s) {
    out.u_vars.push_back(mm.base.add_var(1.0, 0.0, 1.0));
    mm.is_integer.push_back(1);
  }
  for (int j = 0; j < N; ++j) {
    LinearRow row;
    for (int s = 0; s < S; ++s) row.coeffs.push_back({mm.layout.z(s, j), 1.0});
    row.rel = Relation::EQ;
    row.rhs = 1.0;
    mm.base.rows.push_back(std::move(row));
  }
  if (inst.kind == BinPackInstance::Kind::Rectangle)
    for (int s = 0; s < S; ++s) {
      LinearRow row;  // total item area within the bin area once the bin opens
      for (int j = 0; j < N; ++j)
        row.coeffs.push_back({mm.layout.z(s, j), inst.items[j].w * inst.items[j].h});
      row.coeffs.push_back({out.u_vars[s], -inst.bins[s].w * inst.bins[s].h});
      row.rel = Relation::LE;
      row.rhs = 0.0;
      mm.base.rows.push_back(std::move(row));
    }
  for (int s = 0; s < S; ++s)
    for (int j = 0; j < N; ++j)
      mm.base.rows.push_back(
          {{{mm.layout.z(s, j), 1.0}, {out.u_vars[s], -1.0}}, Relation::LE, 0.0});

  // Merged detection graph: master rows plus per-bin capacity gadgets.
  ColorInterner ic;
  Sdg g = build_mip_sdg(mm.base, mm.is_integer, ic);
  for (int s = 0; s < S; ++s) {
    Sdg gadget;
    if (inst.kind == BinPackInstance::Kind::Mkp) {
      const int cap = gadget.add_node(ic.intern({sdgtag::kCapAnchor, numeric_key(inst.caps[s])}));
      gadget.add_anchor(cap);
      for (int j = 0; j < N; ++j) {
        const int key = mm.layout.z(s, j);
        gadget.add_variable_node(key, g.nodes[g.var_node.at(key)].color);
        gadget.add_edge(cap, gadget.var_node.at(key),
                        ic.intern({sdgtag::kCoef, numeric_key(inst.weights[j])}));
      }
    } else {
      const int anc = gadget.add_node(ic.intern({sdgtag::kBinAnchor, numeric_key(inst.bins[s].w),
                                                 numeric_key(inst.bins[s].h)}));
      gadget.add_anchor(anc);
      for (int j = 0; j < N; ++j) {
        const int key = mm.layout.z(s, j);
        gadget.add_variable_node(key, g.nodes[g.var_node.at(key)].color);
        const int mid = gadget.add_node(ic.intern({sdgtag::kWidth}));
        gadget.add_edge(anc, mid, ic.intern({sdgtag::kWidthEdge, numeric_key(inst.items[j].w)}));
        gadget.add_edge(mid, gadget.var_node.at(key),
                        ic.intern({sdgtag::kHeightEdge, numeric_key(inst.items[j].h)}));
      }
    }
    g = merge_sdgs(g, gadget);
  }
  out.sdg = std::move(g);

  // Certified swaps among the first bin's columns induce the item groups.
  std::vector<char> is_seed(mm.base.num_vars, 0);
  for (int j = 0; j < N; ++j) is_seed[mm.layout.z(0, j)] = 1;
  const GroupPartition raw = detect_group_partition(
      out.sdg, [&is_seed](int key) { return key < static_cast<int>(is_seed.size()) && is_seed[key]; });
  std::vector<std::vector<int>> item_groups;
  for (const auto& grp : raw.groups) {
    if (!is_seed[grp.front()]) continue;
    std::vector<int> items;
    for (int key : grp) items.push_back(key - mm.layout.z(0, 0));
    item_groups.push_back(std::move(items));
  }
  out.item_groups = GroupPartition::from_groups(N, item_groups);
  mm.column_groups = out.item_groups;
  mm.slot_partition.assign(S, out.item_groups);

  const BinPackInstance data = inst;
  const AssignmentLayout layout = mm.layout;
  const GroupPartition part = out.item_groups;
  mm.oracle = [data, layout, part](int slot, const std::vector<int>& items,
                                   double) -> OracleResult {
    bool ok;
    if (data.kind == BinPackInstance::Kind::Mkp)
      ok = mkp_bin_fits(data, slot, items);
    else
      ok = pack_rectangles(data.bins[slot].w, data.bins[slot].h, data.items, items).has_value();
    if (ok) return {};
    OracleResult res;
    res.feasible = false;
    std::vector<int> vars;
    for (int j : items) vars.push_back(layout.z(slot, j));
    res.concrete.push_back(nogood_row(vars));
    AbstractCut a;
    a.kind = CutKind::NoGood;
    a.slot = slot;
    a.rep = representative_vector(part, items);
    res.abstracts.push_back(a);
    return res;
  };
  return out;
}

}  // namespace symbd
