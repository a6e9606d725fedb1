#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <utility>
#include <vector>

#include "symbd/binpack.hpp"
#include "symbd/core.hpp"
#include "symbd/rng.hpp"
#include "symbd/scheduling.hpp"

namespace symbd {

struct GenSpec {
  enum class Family { Rectangle, Scheduling };
  std::uint64_t seed = 0;
  Family family = Family::Rectangle;
  int batches = 1;
  int batch_size = 1;
};

inline void validate_genspec(const GenSpec& spec) {
  if (spec.batches < 1 || spec.batch_size < 1)
    throw Error(ErrorKind::BadInput, "batches and batch_size must be at least 1");
}

struct GeneratedBinPack {
  BinPackInstance instance;
  std::vector<int> labels;  // per item, its batch
};

// Batches of identical rectangles on the 1-decimal grid, one 15x15 bin per
// item. Batch dimension pairs are redrawn until pairwise distinct so the
// batch labels are exactly the instance's symmetry classes.
inline GeneratedBinPack gen_rectpack(const GenSpec& spec) {
  validate_genspec(spec);
  if (spec.family != GenSpec::Family::Rectangle)
    throw Error(ErrorKind::BadInput, "spec is not for the rectangle family");
  SplitMix64 rng(spec.seed);
  GeneratedBinPack out;
  out.instance.kind = BinPackInstance::Kind::Rectangle;
  std::set<std::pair<std::int64_t, std::int64_t>> seen;
  for (int b = 0; b < spec.batches; ++b) {
    double w = 0.0, h = 0.0;
    do {
      w = rng.decimal(1.0, 10.0);
      h = rng.decimal(1.0, 10.0);
    } while (!seen.insert({numeric_key(w), numeric_key(h)}).second);
    for (int t = 0; t < spec.batch_size; ++t) {
      out.instance.items.push_back({w, h});
      out.labels.push_back(b);
    }
  }
  out.instance.bins.assign(out.instance.items.size(), {15.0, 15.0});
  return out;
}

struct GeneratedScheduling {
  SchedulingInstance instance;
  std::vector<int> labels;  // per real job, its batch
};

// Three identical machines; batches of jobs sharing a processing time and a
// tool set drawn from {1..10} with at most 5 tools. Setups are symmetric
// differences of tool sets, the depot owning none, so they form a metric and
// the start-up to a job is its tool count. Batch (p, tools) pairs are redrawn
// until distinct; with batch_size >= 2 the labels then match job_equivalence
// exactly (a same-batch partner witnesses any cross-batch tool difference).
inline GeneratedScheduling gen_scheduling(const GenSpec& spec) {
  validate_genspec(spec);
  if (spec.family != GenSpec::Family::Scheduling)
    throw Error(ErrorKind::BadInput, "spec is not for the scheduling family");
  SplitMix64 rng(spec.seed);
  GeneratedScheduling out;
  std::vector<double> pb;
  std::vector<std::vector<int>> toolsb;
  std::set<std::pair<std::int64_t, std::vector<int>>> seen;
  for (int b = 0; b < spec.batches; ++b) {
    double p = 0.0;
    std::vector<int> tools;
    do {
      p = rng.decimal(1.0, 10.0);
      const int k = static_cast<int>(rng.below(6));  // 0..5 tools
      std::vector<int> all{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
      rng.shuffle(all);
      tools.assign(all.begin(), all.begin() + k);
      std::sort(tools.begin(), tools.end());
    } while (!seen.insert({numeric_key(p), tools}).second);
    pb.push_back(p);
    toolsb.push_back(std::move(tools));
  }
  const int n = spec.batches * spec.batch_size;
  std::vector<double> p{0.0};
  std::vector<int> batch_of;
  for (int b = 0; b < spec.batches; ++b)
    for (int t = 0; t < spec.batch_size; ++t) {
      p.push_back(pb[b]);
      batch_of.push_back(b);
      out.labels.push_back(b);
    }
  auto symdiff = [&](int a, int b) {
    const auto& A = toolsb[a];
    const auto& B = toolsb[b];
    int d = 0;
    for (int t : A)
      if (!std::binary_search(B.begin(), B.end(), t)) ++d;
    for (int t : B)
      if (!std::binary_search(A.begin(), A.end(), t)) ++d;
    return static_cast<double>(d);
  };
  std::vector<std::vector<double>> s(n + 1, std::vector<double>(n + 1, 0.0));
  for (int j = 1; j <= n; ++j) {
    s[0][j] = static_cast<double>(toolsb[batch_of[j - 1]].size());
    for (int k = 1; k <= n; ++k)
      if (k != j) s[j][k] = symdiff(batch_of[j - 1], batch_of[k - 1]);
  }
  out.instance.machines = 3;
  out.instance.p.assign(3, p);
  out.instance.s.assign(3, s);
  return out;
}

}  // namespace symbd
