#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "symbd/binpack.hpp"
#include "symbd/core.hpp"
#include "symbd/mip.hpp"
#include "symbd/scheduling.hpp"

namespace symbd {

using Instance = std::variant<BinPackInstance, SchedulingInstance>;

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::NodeLimit: return "node_limit";
    default: return "time_limit";
  }
}

inline const char* to_string(SolveMode m) {
  switch (m) {
    case SolveMode::Plain: return "plain";
    case SolveMode::Pool: return "pool";
    case SolveMode::EfRow: return "efrow";
    default: return "efcons";
  }
}

inline SolveMode mode_from_string(const std::string& s) {
  if (s == "plain") return SolveMode::Plain;
  if (s == "pool") return SolveMode::Pool;
  if (s == "efrow") return SolveMode::EfRow;
  if (s == "efcons") return SolveMode::EfCons;
  throw Error(ErrorKind::BadInput, "unknown mode: " + s);
}

inline nlohmann::json instance_to_json(const BinPackInstance& inst) {
  nlohmann::json j;
  auto bins = nlohmann::json::array();
  auto items = nlohmann::json::array();
  if (inst.kind == BinPackInstance::Kind::Mkp) {
    j["type"] = "mkp";
    for (double c : inst.caps) bins.push_back({{"beta", c}});
    for (double a : inst.weights) items.push_back({{"a", a}});
  } else {
    j["type"] = "rectpack";
    for (const RectBin& b : inst.bins) bins.push_back({{"W", b.w}, {"H", b.h}});
    for (const RectItem& it : inst.items) items.push_back({{"w", it.w}, {"h", it.h}});
  }
  j["bins"] = std::move(bins);
  j["items"] = std::move(items);
  return j;
}

inline nlohmann::json instance_to_json(const SchedulingInstance& inst) {
  return {{"type", "scheduling"}, {"machines", inst.machines}, {"p", inst.p}, {"s", inst.s}};
}

inline nlohmann::json instance_to_json(const Instance& inst) {
  return std::visit([](const auto& i) { return instance_to_json(i); }, inst);
}

// Unknown keys (a "costs" matrix for instance) are permitted and ignored.
// Loaded instances are validated before being returned.
inline Instance instance_from_json(const nlohmann::json& j) {
  try {
    const std::string type = j.at("type").get<std::string>();
    if (type == "mkp" || type == "rectpack") {
      BinPackInstance inst;
      if (type == "mkp") {
        inst.kind = BinPackInstance::Kind::Mkp;
        for (const auto& b : j.at("bins")) inst.caps.push_back(b.at("beta").get<double>());
        for (const auto& it : j.at("items")) inst.weights.push_back(it.at("a").get<double>());
      } else {
        inst.kind = BinPackInstance::Kind::Rectangle;
        for (const auto& b : j.at("bins"))
          inst.bins.push_back({b.at("W").get<double>(), b.at("H").get<double>()});
        for (const auto& it : j.at("items"))
          inst.items.push_back({it.at("w").get<double>(), it.at("h").get<double>()});
      }
      validate_binpack(inst);
      return inst;
    }
    if (type == "scheduling") {
      SchedulingInstance inst;
      inst.machines = j.at("machines").get<int>();
      inst.p = j.at("p").get<std::vector<std::vector<double>>>();
      inst.s = j.at("s").get<std::vector<std::vector<std::vector<double>>>>();
      validate_scheduling(inst);
      return inst;
    }
    throw Error(ErrorKind::BadInput, "unknown instance type: " + type);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::BadInput, std::string("malformed instance json: ") + e.what());
  }
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::BadInput, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw Error(ErrorKind::BadInput, "cannot write " + path);
}

inline Instance load_instance(const std::string& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_text_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::BadInput, path + ": " + e.what());
  }
  return instance_from_json(j);
}

inline void save_instance(const std::string& path, const Instance& inst) {
  write_text_file(path, instance_to_json(inst).dump(2) + "\n");
}

inline std::string labels_path(const std::string& instance_path) {
  return instance_path + ".labels.json";
}

inline void save_labels(const std::string& instance_path, const std::vector<int>& labels) {
  nlohmann::json j{{"labels", labels}};
  write_text_file(labels_path(instance_path), j.dump(2) + "\n");
}

inline std::vector<int> load_labels(const std::string& instance_path) {
  try {
    const auto j = nlohmann::json::parse(read_text_file(labels_path(instance_path)));
    return j.at("labels").get<std::vector<int>>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::BadInput, labels_path(instance_path) + ": " + e.what());
  }
}

// Builds the decomposition master for either application.
inline MasterModel build_master(const Instance& inst) {
  if (const auto* bp = std::get_if<BinPackInstance>(&inst)) return build_binpack(*bp).master;
  return build_master_scheduling(std::get<SchedulingInstance>(inst)).master;
}

inline nlohmann::json result_to_json(const SolveResult& res, SolveMode mode, bool symbreak,
                                     double time_sec) {
  return {{"status", to_string(res.status)},
          {"objective", res.objective},
          {"bound", res.bound},
          {"mode", to_string(mode)},
          {"symbreak", symbreak},
          {"time_sec", time_sec},
          {"nodes", res.stats.nodes},
          {"lp_solves", res.stats.lp_solves},
          {"oracle_calls", res.stats.oracle_calls},
          {"pool_hits", res.stats.pool_hits},
          {"separated_solutions", res.stats.separated_solutions},
          {"cuts_added", res.stats.cuts_added},
          {"ef_rows_removed", res.stats.ef_rows_removed},
          {"pool_size", res.stats.pool_size},
          {"cut_time_sec", res.stats.cut_time_sec},
          {"oracle_time_sec", res.stats.oracle_time_sec}};
}

}  // namespace symbd
