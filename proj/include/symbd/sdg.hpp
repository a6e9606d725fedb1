#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "symbd/core.hpp"
#include "symbd/lp.hpp"
#include "symbd/partition.hpp"

namespace symbd {

constexpr std::int64_t kUncolored = 0;

// Interns exact numeric keys into dense color ids (first-seen order). One
// interner must be shared by every graph that will be merged, so equal data
// gets equal colors across components.
class ColorInterner {
 public:
  std::int64_t intern(std::vector<std::int64_t> key) {
    auto [it, fresh] = ids_.try_emplace(std::move(key), next_);
    if (fresh) ++next_;
    return it->second;
  }

 private:
  std::map<std::vector<std::int64_t>, std::int64_t> ids_;
  std::int64_t next_ = 1;  // 0 is the uncolored edge
};

// Colored undirected graph whose color-preserving automorphisms, restricted
// to the variable nodes, are formulation symmetries. Anchored: every node is
// reachable from an anchor by a path with no interior variable node.
struct Sdg {
  struct Node {
    std::int64_t color = 0;
    bool is_variable = false;
    int var_key = -1;
  };
  struct Edge {
    int u = 0, v = 0;
    std::int64_t color = kUncolored;
  };

  std::vector<Node> nodes;
  std::vector<Edge> edges;
  std::map<int, int> var_node;  // variable key -> node
  std::vector<int> anchors;

  int add_node(std::int64_t color) {
    nodes.push_back({color, false, -1});
    return static_cast<int>(nodes.size()) - 1;
  }

  int add_variable_node(int var_key, std::int64_t color) {
    if (var_node.count(var_key))
      throw Error(ErrorKind::BadInput, "duplicate variable key in graph");
    nodes.push_back({color, true, var_key});
    const int id = static_cast<int>(nodes.size()) - 1;
    var_node[var_key] = id;
    return id;
  }

  void add_edge(int u, int v, std::int64_t color = kUncolored) {
    if (u < 0 || v < 0 || u >= static_cast<int>(nodes.size()) ||
        v >= static_cast<int>(nodes.size()))
      throw Error(ErrorKind::BadInput, "edge endpoint out of range");
    edges.push_back({u, v, color});
  }

  void add_anchor(int node) { anchors.push_back(node); }
};

// Disjoint union that identifies nodes carrying the same variable key.
// Anchors accumulate, so a merge of anchored graphs stays anchored.
inline Sdg merge_sdgs(const Sdg& a, const Sdg& b) {
  Sdg out = a;
  std::vector<int> remap(b.nodes.size(), -1);
  for (int id = 0; id < static_cast<int>(b.nodes.size()); ++id) {
    const Sdg::Node& nd = b.nodes[id];
    if (nd.is_variable) {
      auto it = out.var_node.find(nd.var_key);
      if (it != out.var_node.end()) {
        if (out.nodes[it->second].color != nd.color)
          throw Error(ErrorKind::ColorClash, "merged graphs disagree on a variable color");
        remap[id] = it->second;
        continue;
      }
      remap[id] = out.add_variable_node(nd.var_key, nd.color);
    } else {
      remap[id] = out.add_node(nd.color);
    }
  }
  for (const Sdg::Edge& e : b.edges) out.add_edge(remap[e.u], remap[e.v], e.color);
  for (int anc : b.anchors) {
    const int m = remap[anc];
    if (std::find(out.anchors.begin(), out.anchors.end(), m) == out.anchors.end())
      out.anchors.push_back(m);
  }
  return out;
}

struct Coloring {
  std::vector<int> cls;  // per node, dense ids in sorted signature order
  int num_classes = 0;
};

// 1-dimensional Weisfeiler-Leman refinement with edge colors. Classes only
// split, never merge, and ids are assigned by sorted signature, so the result
// is deterministic and independent of node insertion order.
inline Coloring color_refinement(const Sdg& g) {
  const int n = static_cast<int>(g.nodes.size());
  Coloring c;
  c.cls.assign(n, 0);
  {
    std::vector<std::int64_t> colors;
    for (const auto& nd : g.nodes) colors.push_back(nd.color);
    std::sort(colors.begin(), colors.end());
    colors.erase(std::unique(colors.begin(), colors.end()), colors.end());
    for (int v = 0; v < n; ++v)
      c.cls[v] = static_cast<int>(std::lower_bound(colors.begin(), colors.end(),
                                                   g.nodes[v].color) -
                                  colors.begin());
    c.num_classes = static_cast<int>(colors.size());
  }
  for (;;) {
    using Sig = std::pair<int, std::vector<std::pair<std::int64_t, int>>>;
    std::vector<Sig> sig(n);
    for (int v = 0; v < n; ++v) sig[v].first = c.cls[v];
    for (const auto& e : g.edges) {
      sig[e.u].second.push_back({e.color, c.cls[e.v]});
      sig[e.v].second.push_back({e.color, c.cls[e.u]});
    }
    for (int v = 0; v < n; ++v) std::sort(sig[v].second.begin(), sig[v].second.end());
    std::map<Sig, int> ids;
    for (int v = 0; v < n; ++v) ids.emplace(sig[v], 0);
    int next = 0;
    for (auto& [s, id] : ids) id = next++;
    if (next == c.num_classes) break;
    for (int v = 0; v < n; ++v) c.cls[v] = ids.at(sig[v]);
    c.num_classes = next;
  }
  return c;
}

// Exact check that perm preserves node colors, variable-ness, and the edge
// multiset with colors.
inline bool verify_automorphism(const Sdg& g, const std::vector<int>& perm) {
  const int n = static_cast<int>(g.nodes.size());
  if (static_cast<int>(perm.size()) != n) return false;
  std::vector<char> hit(n, 0);
  for (int v = 0; v < n; ++v) {
    const int w = perm[v];
    if (w < 0 || w >= n || hit[w]) return false;
    hit[w] = 1;
    if (g.nodes[v].color != g.nodes[w].color) return false;
    if (g.nodes[v].is_variable != g.nodes[w].is_variable) return false;
  }
  std::map<std::tuple<int, int, std::int64_t>, int> count;
  for (const auto& e : g.edges)
    ++count[{std::min(e.u, e.v), std::max(e.u, e.v), e.color}];
  for (const auto& e : g.edges) {
    const int u = perm[e.u], v = perm[e.v];
    auto it = count.find({std::min(u, v), std::max(u, v), e.color});
    if (it == count.end() || it->second == 0) return false;
    --it->second;
  }
  return true;
}

// Extends the seed swap u <-> v to a full node permutation by breadth of
// forced matches: neighborhoods are bucketed by (edge color, refined class)
// and common neighbors stay fixed. A bucket whose images are underdetermined
// branches over the candidates with backtracking; a wrong choice contradicts
// within a step or two, so the search stays near-linear in practice.
// allow_pair can veto moving a pair of nodes, pruning whole branches; the
// veto never applies to the root swap or to fixed points. Conservative: any
// mismatch abandons the branch, and callers re-verify.
inline std::optional<std::vector<int>> extend_transposition(
    const Sdg& g, const Coloring& ref, int u, int v,
    const std::function<bool(int, int)>& allow_pair = nullptr) {
  const int n = static_cast<int>(g.nodes.size());
  std::vector<std::vector<std::pair<std::int64_t, int>>> adj(n);
  for (const auto& e : g.edges) {
    adj[e.u].push_back({e.color, e.v});
    adj[e.v].push_back({e.color, e.u});
  }
  struct State {
    std::vector<int> perm;
    std::vector<std::pair<int, int>> stack;
  };
  auto pair_nodes = [&](State& st, int a, int b) -> bool {
    if (st.perm[a] == -1 && st.perm[b] == -1) {
      if (ref.cls[a] != ref.cls[b]) return false;
      if (a != b && !(a == u && b == v) && !(a == v && b == u) && allow_pair &&
          !allow_pair(a, b))
        return false;
      st.perm[a] = b;
      st.perm[b] = a;
      st.stack.push_back({a, b});
      return true;
    }
    return st.perm[a] == b && st.perm[b] == a;
  };
  auto run = [&](auto&& self, State st) -> std::optional<std::vector<int>> {
    while (!st.stack.empty()) {
      const auto [a, b] = st.stack.back();
      st.stack.pop_back();
      std::map<std::pair<std::int64_t, int>, std::pair<std::vector<int>, std::vector<int>>>
          buckets;
      for (auto [col, x] : adj[a]) buckets[{col, ref.cls[x]}].first.push_back(x);
      for (auto [col, x] : adj[b]) buckets[{col, ref.cls[x]}].second.push_back(x);
      for (auto& [key, lists] : buckets) {
        auto& [A, B] = lists;
        if (A.size() != B.size()) return std::nullopt;
        std::sort(A.begin(), A.end());
        std::sort(B.begin(), B.end());
        // Consume pairs already decided; the partner must sit in the same bucket.
        std::vector<int> restA, restB = B;
        auto take = [](std::vector<int>& vec, int x) {
          auto it = std::find(vec.begin(), vec.end(), x);
          if (it == vec.end()) return false;
          vec.erase(it);
          return true;
        };
        for (int x : A) {
          if (st.perm[x] == -1) {
            restA.push_back(x);
            continue;
          }
          if (!take(restB, st.perm[x])) return std::nullopt;
        }
        for (int y : restB)
          if (st.perm[y] != -1) return std::nullopt;
        // A fixed node constrains only its mapped neighbors; deciding the rest
        // here would force identity prematurely, so leave them to the swapped
        // frontier and the final identity fill.
        if (a == b) continue;
        // Common neighbors of a and b stay fixed.
        std::vector<int> loneA, loneB;
        for (int x : restA) {
          if (take(restB, x)) {
            if (!pair_nodes(st, x, x)) return std::nullopt;
          } else {
            loneA.push_back(x);
          }
        }
        loneB = restB;
        if (loneA.size() != loneB.size()) return std::nullopt;
        if (loneA.size() == 1) {
          if (!pair_nodes(st, loneA[0], loneB[0])) return std::nullopt;
          continue;
        }
        if (loneA.size() > 1) {
          // Underdetermined: pick the first orphan's image, reprocess this
          // frontier under the choice, and fall back to the next candidate.
          for (int cand : loneB) {
            State next = st;
            if (!pair_nodes(next, loneA[0], cand)) continue;
            next.stack.push_back({a, b});
            if (auto res = self(self, std::move(next))) return res;
          }
          return std::nullopt;
        }
      }
    }
    for (int x = 0; x < n; ++x)
      if (st.perm[x] == -1) st.perm[x] = x;
    return st.perm;
  };
  State init;
  init.perm.assign(n, -1);
  init.stack.clear();
  if (!pair_nodes(init, u, v)) return std::nullopt;
  return run(run, std::move(init));
}

// Certified transposition of two variable nodes (by variable key): the seed
// swap extended over the attached gadgets, verified as a full automorphism.
inline std::optional<std::vector<int>> certify_transposition(const Sdg& g, int key_u, int key_v) {
  auto iu = g.var_node.find(key_u), iv = g.var_node.find(key_v);
  if (iu == g.var_node.end() || iv == g.var_node.end())
    throw Error(ErrorKind::BadInput, "unknown variable key");
  const Coloring ref = color_refinement(g);
  auto perm = extend_transposition(g, ref, iu->second, iv->second);
  if (!perm || !verify_automorphism(g, *perm)) return std::nullopt;
  return perm;
}

// Groups of variable keys on which certified transpositions act: candidates
// share a refined class; a key joins a group only if it certifies against
// every member, otherwise the class splits (sound but possibly finer than
// the true orbits). A certificate must fix every other seed key, so it
// witnesses the pure pairwise swap rather than some wider automorphism that
// drags other seeds along (a block swap of two structurally isomorphic but
// distinct clusters is a real symmetry, yet its endpoints are not pairwise
// interchangeable). seed_filter narrows which variable keys participate;
// everything else stays a singleton.
inline GroupPartition detect_group_partition(
    const Sdg& g, const std::function<bool(int)>& seed_filter = nullptr) {
  const Coloring ref = color_refinement(g);
  int universe = 0;
  for (const auto& [key, node] : g.var_node) universe = std::max(universe, key + 1);
  std::vector<int> seed_nodes;
  std::map<int, std::vector<int>> candidates;  // refined class -> keys
  for (const auto& [key, node] : g.var_node)
    if (!seed_filter || seed_filter(key)) {
      candidates[ref.cls[node]].push_back(key);
      seed_nodes.push_back(node);
    }
  std::vector<char> is_seed_node(g.nodes.size(), 0);
  for (int s : seed_nodes) is_seed_node[s] = 1;
  // Branches that move any third seed are pruned up front, so the search
  // lands on the pure pairwise witness whenever one exists.
  const std::function<bool(int, int)> keep_seeds_fixed = [&is_seed_node](int a, int b) {
    return !is_seed_node[a] && !is_seed_node[b];
  };
  auto pure_swap = [&](const std::vector<int>& perm, int na, int nb) {
    for (int s : seed_nodes)
      if (s != na && s != nb && perm[s] != s) return false;
    return true;
  };
  std::vector<char> grouped(universe, 0);
  std::vector<std::vector<int>> groups;
  for (auto& [cls, keys] : candidates) {
    std::sort(keys.begin(), keys.end());
    std::vector<std::vector<int>> subgroups;
    for (int key : keys) {
      bool placed = false;
      for (auto& sg : subgroups) {
        bool ok = true;
        for (int other : sg) {
          const int na = g.var_node.at(other), nb = g.var_node.at(key);
          auto perm = extend_transposition(g, ref, na, nb, keep_seeds_fixed);
          if (!perm || !verify_automorphism(g, *perm) || !pure_swap(*perm, na, nb)) {
            ok = false;
            break;
          }
        }
        if (ok) {
          sg.push_back(key);
          placed = true;
          break;
        }
      }
      if (!placed) subgroups.push_back({key});
    }
    for (auto& sg : subgroups) {
      for (int key : sg) grouped[key] = 1;
      groups.push_back(std::move(sg));
    }
  }
  for (int key = 0; key < universe; ++key)
    if (!grouped[key]) groups.push_back({key});
  return GroupPartition::from_groups(universe, std::move(groups));
}

namespace sdgtag {
// First element of every interner key; keeps the color spaces of rows,
// variables, coefficients, and app gadget pieces disjoint.
constexpr std::int64_t kRow = 1, kVar = 2, kCoef = 3, kRoot = 4, kRootEdge = 5, kObjLink = 6,
                       kBinAnchor = 7, kWidth = 8, kHeight = 9, kCapAnchor = 10, kMachAnchor = 11,
                       kPair = 12, kPairEdge = 13, kStartup = 14, kWidthEdge = 15, kHeightEdge = 16;
}  // namespace sdgtag

inline std::int64_t bound_key(double b) {
  if (std::isinf(b)) return b > 0 ? std::numeric_limits<std::int64_t>::max()
                                  : std::numeric_limits<std::int64_t>::min();
  return numeric_key(b);
}

// Standard MIP graph of the LP rows: one node per variable colored by
// (objective, integrality, bounds, extra), one per row colored by
// (relation, rhs), edges colored by coefficient. A root anchor adjacent to
// every row (and to row-less variables) keeps the graph anchored without
// distorting symmetry. Variable keys are the LP indices.
inline Sdg build_mip_sdg(const LinearProgram& lp, const std::vector<char>& is_integer,
                         ColorInterner& ic,
                         const std::vector<std::int64_t>* var_extra = nullptr) {
  Sdg g;
  std::vector<char> in_row(lp.num_vars, 0);
  for (int j = 0; j < lp.num_vars; ++j) {
    std::vector<std::int64_t> key{sdgtag::kVar, numeric_key(lp.objective[j]),
                                  j < static_cast<int>(is_integer.size()) ? is_integer[j] : 0,
                                  bound_key(lp.lower[j]), bound_key(lp.upper[j])};
    if (var_extra) key.push_back((*var_extra)[j]);
    g.add_variable_node(j, ic.intern(std::move(key)));
  }
  const int root = g.add_node(ic.intern({sdgtag::kRoot}));
  g.add_anchor(root);
  const std::int64_t root_edge = ic.intern({sdgtag::kRootEdge});
  for (const LinearRow& row : lp.rows) {
    const int rn = g.add_node(ic.intern({sdgtag::kRow, static_cast<std::int64_t>(row.rel),
                                         numeric_key(row.rhs)}));
    g.add_edge(root, rn, root_edge);
    std::map<int, double> coef;
    for (auto [j, a] : row.coeffs) coef[j] += a;
    for (auto [j, a] : coef) {
      if (a == 0.0) continue;
      in_row[j] = 1;
      g.add_edge(rn, g.var_node.at(j), ic.intern({sdgtag::kCoef, numeric_key(a)}));
    }
  }
  for (int j = 0; j < lp.num_vars; ++j)
    if (!in_row[j]) g.add_edge(root, g.var_node.at(j), root_edge);
  return g;
}

inline std::string to_dot(const Sdg& g) {
  std::ostringstream os;
  os << "graph sdg {\n";
  for (int v = 0; v < static_cast<int>(g.nodes.size()); ++v) {
    os << "  n" << v << " [label=\"" << g.nodes[v].color;
    if (g.nodes[v].is_variable) os << " v" << g.nodes[v].var_key;
    os << "\", shape=" << (g.nodes[v].is_variable ? "box" : "ellipse");
    if (std::find(g.anchors.begin(), g.anchors.end(), v) != g.anchors.end())
      os << ", style=bold";
    os << "];\n";
  }
  for (const auto& e : g.edges) {
    os << "  n" << e.u << " -- n" << e.v;
    if (e.color != kUncolored) os << " [label=\"" << e.color << "\"]";
    os << ";\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace symbd
