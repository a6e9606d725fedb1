#pragma once

// Brute-force reference oracles for the test suite. Everything here is
// deliberately naive: enumeration over vertices, assignments, placements,
// and permutations. Slow but independently correct at test scale.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <vector>

#include "symbd/lp.hpp"

namespace oracles {

// Solve the square system M x = b by Gaussian elimination with partial
// pivoting. Returns false if near-singular.
inline bool solve_square(std::vector<std::vector<double>> M, std::vector<double> b,
                         std::vector<double>& x) {
  const int n = static_cast<int>(b.size());
  for (int c = 0; c < n; ++c) {
    int p = c;
    for (int r = c + 1; r < n; ++r)
      if (std::fabs(M[r][c]) > std::fabs(M[p][c])) p = r;
    if (std::fabs(M[p][c]) < 1e-9) return false;
    std::swap(M[p], M[c]);
    std::swap(b[p], b[c]);
    for (int r = 0; r < n; ++r) {
      if (r == c) continue;
      const double f = M[r][c] / M[c][c];
      if (f == 0.0) continue;
      for (int k = c; k < n; ++k) M[r][k] -= f * M[c][k];
      b[r] -= f * b[c];
    }
  }
  x.assign(n, 0.0);
  for (int c = 0; c < n; ++c) x[c] = b[c] / M[c][c];
  return true;
}

// Minimum objective over all vertices of the LP's feasible polytope, or
// nullopt when no feasible vertex exists. Requires finite bounds on every
// variable, which makes the region a polytope, so feasible iff a vertex is.
inline std::optional<double> vertex_enumeration_optimum(const symbd::LinearProgram& lp) {
  const int n = lp.num_vars;
  struct Plane {
    std::vector<double> a;
    double rhs;
  };
  std::vector<Plane> planes;
  for (const auto& row : lp.rows) {
    Plane p{std::vector<double>(n, 0.0), row.rhs};
    for (auto [j, a] : row.coeffs) p.a[j] += a;
    planes.push_back(std::move(p));
  }
  for (int j = 0; j < n; ++j) {
    Plane lo{std::vector<double>(n, 0.0), lp.lower[j]};
    lo.a[j] = 1.0;
    planes.push_back(std::move(lo));
    Plane up{std::vector<double>(n, 0.0), lp.upper[j]};
    up.a[j] = 1.0;
    planes.push_back(std::move(up));
  }
  const int H = static_cast<int>(planes.size());
  if (H < n) return std::nullopt;

  const double tol = 1e-6;
  auto feasible = [&](const std::vector<double>& x) {
    for (int j = 0; j < n; ++j)
      if (x[j] < lp.lower[j] - tol || x[j] > lp.upper[j] + tol) return false;
    for (const auto& row : lp.rows) {
      double act = 0.0;
      for (auto [j, a] : row.coeffs) act += a * x[j];
      switch (row.rel) {
        case symbd::Relation::LE:
          if (act > row.rhs + tol) return false;
          break;
        case symbd::Relation::GE:
          if (act < row.rhs - tol) return false;
          break;
        case symbd::Relation::EQ:
          if (std::fabs(act - row.rhs) > tol) return false;
          break;
      }
    }
    return true;
  };

  std::optional<double> best;
  std::vector<int> pick(n);
  for (int i = 0; i < n; ++i) pick[i] = i;
  for (;;) {
    std::vector<std::vector<double>> M;
    std::vector<double> b;
    for (int i : pick) {
      M.push_back(planes[i].a);
      b.push_back(planes[i].rhs);
    }
    std::vector<double> x;
    if (solve_square(std::move(M), std::move(b), x) && feasible(x)) {
      double v = 0.0;
      for (int j = 0; j < n; ++j) v += lp.objective[j] * x[j];
      if (!best || v < *best) best = v;
    }
    int k = n - 1;
    while (k >= 0 && pick[k] == H - n + k) --k;
    if (k < 0) break;
    ++pick[k];
    for (int i = k + 1; i < n; ++i) pick[i] = pick[i - 1] + 1;
  }
  return best;
}

// Exact rectangle-packing feasibility by depth-first search over the
// canonical raster (subset sums of item widths and heights). Items kept in
// input order; completeness follows from left-bottom normalization.
inline bool rect_feasible_raster(double W, double H,
                                 const std::vector<std::pair<double, double>>& items) {
  const int n = static_cast<int>(items.size());
  auto sums = [](std::vector<double> vals, double cap) {
    std::vector<double> out{0.0};
    for (double v : vals) {
      const std::size_t sz = out.size();
      for (std::size_t i = 0; i < sz; ++i) {
        const double s = out[i] + v;
        if (s < cap) out.push_back(s);
      }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end(),
                          [](double a, double b) { return std::fabs(a - b) < 1e-9; }),
              out.end());
    return out;
  };
  std::vector<double> ws, hs;
  for (auto& [w, h] : items) {
    ws.push_back(w);
    hs.push_back(h);
  }
  const std::vector<double> X = sums(ws, W), Y = sums(hs, H);
  std::vector<double> px(n), py(n);
  const double tol = 1e-7;

  std::function<bool(int)> place = [&](int k) {
    if (k == n) return true;
    const double w = items[k].first, h = items[k].second;
    for (double x : X) {
      if (x + w > W + tol) continue;
      for (double y : Y) {
        if (y + h > H + tol) continue;
        bool ok = true;
        for (int q = 0; q < k; ++q) {
          if (x < px[q] + items[q].first - tol && px[q] < x + w - tol &&
              y < py[q] + items[q].second - tol && py[q] < y + h - tol) {
            ok = false;
            break;
          }
        }
        if (!ok) continue;
        px[k] = x;
        py[k] = y;
        if (place(k + 1)) return true;
      }
    }
    return false;
  };
  return place(0);
}

// Minimum assignment cost over all bin assignments of an MKP, or nullopt when
// every assignment breaks some capacity. costs may be empty (all zero).
inline std::optional<double> mkp_enumerate(const std::vector<double>& weights,
                                           const std::vector<double>& caps,
                                           const std::vector<std::vector<double>>& costs) {
  const int n = static_cast<int>(weights.size());
  const int m = static_cast<int>(caps.size());
  std::vector<int> assign(n, 0);
  std::optional<double> best;
  for (;;) {
    std::vector<double> load(m, 0.0);
    for (int j = 0; j < n; ++j) load[assign[j]] += weights[j];
    bool ok = true;
    for (int i = 0; i < m; ++i)
      if (load[i] > caps[i] + 1e-9) ok = false;
    if (ok) {
      double c = 0.0;
      if (!costs.empty())
        for (int j = 0; j < n; ++j) c += costs[assign[j]][j];
      if (!best || c < *best) best = c;
    }
    int k = 0;
    while (k < n && assign[k] == m - 1) assign[k++] = 0;
    if (k == n) break;
    ++assign[k];
  }
  return best;
}

// Minimum number of used bins over all full assignments respecting the
// capacities, or nullopt if none exists.
inline std::optional<int> mkp_bins_enumerate(const std::vector<double>& weights,
                                             const std::vector<double>& caps) {
  const int n = static_cast<int>(weights.size());
  const int m = static_cast<int>(caps.size());
  std::vector<int> assign(n, 0);
  std::optional<int> best;
  for (;;) {
    std::vector<double> load(m, 0.0);
    for (int j = 0; j < n; ++j) load[assign[j]] += weights[j];
    bool ok = true;
    int used = 0;
    for (int i = 0; i < m; ++i) {
      if (load[i] > caps[i] + 1e-9) ok = false;
      if (load[i] > 0.0) ++used;
    }
    if (ok && (!best || used < *best)) best = used;
    int k = 0;
    while (k < n && assign[k] == m - 1) assign[k++] = 0;
    if (k == n) break;
    ++assign[k];
  }
  return best;
}

// Minimum number of used bins over all feasible rectangle assignments, or
// nullopt if none. Feasibility per bin via the raster oracle, memoized on the
// (bin, item subset) pair.
inline std::optional<int> binpack_rect_enumerate(
    const std::vector<std::pair<double, double>>& bins,
    const std::vector<std::pair<double, double>>& items) {
  const int n = static_cast<int>(items.size());
  const int m = static_cast<int>(bins.size());
  std::map<std::pair<int, unsigned>, bool> memo;
  auto bin_ok = [&](int i, unsigned mask) {
    auto it = memo.find({i, mask});
    if (it != memo.end()) return it->second;
    std::vector<std::pair<double, double>> sub;
    for (int j = 0; j < n; ++j)
      if (mask & (1u << j)) sub.push_back(items[j]);
    const bool ok = rect_feasible_raster(bins[i].first, bins[i].second, sub);
    memo[{i, mask}] = ok;
    return ok;
  };
  std::vector<int> assign(n, 0);
  std::optional<int> best;
  for (;;) {
    std::vector<unsigned> mask(m, 0);
    for (int j = 0; j < n; ++j) mask[assign[j]] |= 1u << j;
    bool ok = true;
    int used = 0;
    for (int i = 0; i < m && ok; ++i) {
      if (mask[i]) ++used;
      if (mask[i] && !bin_ok(i, mask[i])) ok = false;
    }
    if (ok && (!best || used < *best)) best = used;
    int k = 0;
    while (k < n && assign[k] == m - 1) assign[k++] = 0;
    if (k == n) break;
    ++assign[k];
  }
  return best;
}

// Minimum total setup time of a route 0 -> all of C (return to 0 free), by
// enumeration over visit orders. s is indexed over {0..n} x {0..n}.
inline double tour_enumerate(const std::vector<std::vector<double>>& s, std::vector<int> C) {
  if (C.empty()) return 0.0;
  std::sort(C.begin(), C.end());
  double best = std::numeric_limits<double>::infinity();
  do {
    double cost = s[0][C[0]];
    for (std::size_t k = 0; k + 1 < C.size(); ++k) cost += s[C[k]][C[k + 1]];
    best = std::min(best, cost);
  } while (std::next_permutation(C.begin(), C.end()));
  return best;
}

// Minimum makespan over all machine assignments; per-machine schedules by
// tour enumeration. p[i][j] and s[i][j][k] are indexed with job 0 at 0.
inline double scheduling_enumerate(int machines, const std::vector<std::vector<double>>& p,
                                   const std::vector<std::vector<std::vector<double>>>& s) {
  const int n = static_cast<int>(p[0].size()) - 1;
  std::vector<int> assign(n, 0);
  double best = std::numeric_limits<double>::infinity();
  for (;;) {
    double mk = 0.0;
    for (int i = 0; i < machines; ++i) {
      std::vector<int> C;
      double ptot = 0.0;
      for (int j = 1; j <= n; ++j)
        if (assign[j - 1] == i) {
          C.push_back(j);
          ptot += p[i][j];
        }
      mk = std::max(mk, ptot + tour_enumerate(s[i], C));
    }
    best = std::min(best, mk);
    int k = 0;
    while (k < n && assign[k] == machines - 1) assign[k++] = 0;
    if (k == n) break;
    ++assign[k];
  }
  return best;
}

// max over within-group permutations pi of <pi^-1(alpha), zhat>, by explicit
// enumeration of the per-group coefficient arrangements.
inline double prop1_bruteforce(const std::vector<double>& alpha, const std::vector<double>& zhat,
                               const std::vector<std::vector<int>>& groups) {
  double total = 0.0;
  for (const auto& g : groups) {
    std::vector<double> vals;
    for (int j : g) vals.push_back(alpha[j]);
    std::sort(vals.begin(), vals.end());
    double best = -std::numeric_limits<double>::infinity();
    do {
      double v = 0.0;
      for (std::size_t t = 0; t < g.size(); ++t) v += vals[t] * zhat[g[t]];
      best = std::max(best, v);
    } while (std::next_permutation(vals.begin(), vals.end()));
    total += best;
  }
  return total;
}

}  // namespace oracles
