#pragma once

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "symbd/core.hpp"
#include "symbd/io.hpp"
#include "symbd/mip.hpp"

namespace symbd {

// exp(mean log(v + shift)) - shift. Shift 10 is customary for node counts,
// 1 for times and cut counts.
inline double shifted_geometric_mean(const std::vector<double>& values, double shift) {
  if (values.empty()) throw Error(ErrorKind::EmptyInput, "mean of nothing");
  double acc = 0.0;
  for (double v : values) {
    if (!(v + shift > 0.0))
      throw Error(ErrorKind::BadInput, "shifted value must be positive");
    acc += std::log(v + shift);
  }
  return std::exp(acc / static_cast<double>(values.size())) - shift;
}

struct BenchSetting {
  SolveMode mode = SolveMode::Pool;
  bool symbreak = false;
  std::string name() const {
    return std::string(to_string(mode)) + (symbreak ? "+sb" : "");
  }
};

struct RunRecord {
  std::string instance;
  std::string setting;
  SolveStatus status = SolveStatus::Infeasible;
  bool failed = false;          // solver threw; error stores the reason
  std::string error;
  double objective = 0.0;
  double time_sec = 0.0;
  double cut_time_sec = 0.0;
  double oracle_time_sec = 0.0;
  int nodes = 0;
  int separated_solutions = 0;
  int oracle_calls = 0;
  int pool_hits = 0;
  int cuts_added = 0;
};

struct SettingAggregate {
  std::string setting;
  int solved = 0;
  int failed = 0;
  double sgm_time = 0.0;
  double sgm_cut_time = 0.0;
  double sgm_separated = 0.0;
  double sgm_oracle_calls = 0.0;
  double sgm_nodes = 0.0;
};

struct BenchReport {
  std::vector<RunRecord> records;
  std::vector<SettingAggregate> aggregates;
};

namespace detail {

inline std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

}  // namespace detail

// Every (instance, setting) cell once, in the given orders. A solver failure
// is recorded and the run continues; disagreeing optima across settings of
// one instance abort, since they mean a cut family is unsound.
inline BenchReport run_matrix(const std::vector<std::pair<std::string, Instance>>& instances,
                              const std::vector<BenchSetting>& settings,
                              const SolveSettings& base = {}) {
  BenchReport rep;
  for (const auto& [id, inst] : instances) {
    double ref_obj = 0.0;
    std::string ref_setting;
    bool have_ref = false;
    for (const BenchSetting& bs : settings) {
      RunRecord rec;
      rec.instance = id;
      rec.setting = bs.name();
      SolveSettings st = base;
      st.mode = bs.mode;
      st.symbreak = bs.symbreak;
      const auto t0 = std::chrono::steady_clock::now();
      try {
        const MasterModel mm = build_master(inst);
        const SolveResult res = solve_bnc(mm, st);
        rec.status = res.status;
        rec.objective = res.status == SolveStatus::Optimal ? res.objective : 0.0;
        rec.cut_time_sec = res.stats.cut_time_sec;
        rec.oracle_time_sec = res.stats.oracle_time_sec;
        rec.nodes = res.stats.nodes;
        rec.separated_solutions = res.stats.separated_solutions;
        rec.oracle_calls = res.stats.oracle_calls;
        rec.pool_hits = res.stats.pool_hits;
        rec.cuts_added = res.stats.cuts_added;
      } catch (const Error& e) {
        rec.failed = true;
        rec.error = e.what();
      }
      rec.time_sec =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      if (!rec.failed && rec.status == SolveStatus::Optimal) {
        if (have_ref && std::abs(rec.objective - ref_obj) > 1e-6 * (1.0 + std::abs(ref_obj)))
          throw Error(ErrorKind::NumericalBreakdown,
                      "objective mismatch on " + id + ": " + ref_setting + " found " +
                          detail::fmt("%.9f", ref_obj) + " but " + rec.setting + " found " +
                          detail::fmt("%.9f", rec.objective));
        ref_obj = rec.objective;
        ref_setting = rec.setting;
        have_ref = true;
      }
      rep.records.push_back(std::move(rec));
    }
  }
  for (const BenchSetting& bs : settings) {
    SettingAggregate agg;
    agg.setting = bs.name();
    std::vector<double> times, cut_times, separated, oracle_calls, nodes;
    for (const RunRecord& r : rep.records) {
      if (r.setting != agg.setting) continue;
      if (r.failed) {
        ++agg.failed;
        continue;
      }
      if (r.status == SolveStatus::Optimal || r.status == SolveStatus::Infeasible) ++agg.solved;
      times.push_back(r.time_sec);
      cut_times.push_back(r.cut_time_sec);
      separated.push_back(static_cast<double>(r.separated_solutions));
      oracle_calls.push_back(static_cast<double>(r.oracle_calls));
      nodes.push_back(static_cast<double>(r.nodes));
    }
    if (!times.empty()) {
      agg.sgm_time = shifted_geometric_mean(times, 1.0);
      agg.sgm_cut_time = shifted_geometric_mean(cut_times, 1.0);
      agg.sgm_separated = shifted_geometric_mean(separated, 1.0);
      agg.sgm_oracle_calls = shifted_geometric_mean(oracle_calls, 1.0);
      agg.sgm_nodes = shifted_geometric_mean(nodes, 10.0);
    }
    rep.aggregates.push_back(std::move(agg));
  }
  return rep;
}

// Per-run CSV holding only seed-determined columns, so a rerun with the same
// seed is byte-identical. Wall-clock columns live in times_csv.
inline std::string bench_csv(const BenchReport& rep) {
  std::string out =
      "instance,setting,status,objective,nodes,separated_solutions,oracle_calls,pool_hits,"
      "cuts_added\n";
  for (const RunRecord& r : rep.records) {
    out += r.instance + "," + r.setting + ",";
    out += r.failed ? "failed" : to_string(r.status);
    out += "," + detail::fmt("%.6f", r.objective);
    out += "," + std::to_string(r.nodes);
    out += "," + std::to_string(r.separated_solutions);
    out += "," + std::to_string(r.oracle_calls);
    out += "," + std::to_string(r.pool_hits);
    out += "," + std::to_string(r.cuts_added);
    out += "\n";
  }
  return out;
}

inline std::string bench_times_csv(const BenchReport& rep) {
  std::string out = "instance,setting,time_sec,cut_time_sec,oracle_time_sec\n";
  for (const RunRecord& r : rep.records) {
    out += r.instance + "," + r.setting;
    out += "," + detail::fmt("%.6f", r.time_sec);
    out += "," + detail::fmt("%.6f", r.cut_time_sec);
    out += "," + detail::fmt("%.6f", r.oracle_time_sec);
    out += "\n";
  }
  return out;
}

inline std::string bench_table(const BenchReport& rep) {
  std::string out;
  char line[256];
  std::snprintf(line, sizeof(line), "%-12s %7s %7s %10s %12s %10s %10s %10s\n", "setting",
                "solved", "failed", "sgm_time", "sgm_cuttime", "sgm_sepa", "sgm_oracle",
                "sgm_nodes");
  out += line;
  for (const SettingAggregate& a : rep.aggregates) {
    std::snprintf(line, sizeof(line), "%-12s %7d %7d %10.3f %12.3f %10.2f %10.2f %10.2f\n",
                  a.setting.c_str(), a.solved, a.failed, a.sgm_time, a.sgm_cut_time,
                  a.sgm_separated, a.sgm_oracle_calls, a.sgm_nodes);
    out += line;
  }
  return out;
}

}  // namespace symbd
