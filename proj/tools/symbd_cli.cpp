#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "symbd/bench.hpp"
#include "symbd/instgen.hpp"
#include "symbd/io.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kInfeasible = 2;
constexpr int kLimit = 3;
constexpr int kInputError = 4;

int do_gen(const std::string& family, std::uint64_t seed, int batches, int batch_size,
           const std::string& out_path) {
  symbd::GenSpec spec;
  spec.seed = seed;
  spec.batches = batches;
  spec.batch_size = batch_size;
  if (family == "rectpack") {
    spec.family = symbd::GenSpec::Family::Rectangle;
    const auto gen = symbd::gen_rectpack(spec);
    symbd::save_instance(out_path, gen.instance);
    symbd::save_labels(out_path, gen.labels);
    std::printf("wrote %s: rectpack, %zu items, %zu bins\n", out_path.c_str(),
                gen.instance.items.size(), gen.instance.bins.size());
  } else if (family == "scheduling") {
    spec.family = symbd::GenSpec::Family::Scheduling;
    const auto gen = symbd::gen_scheduling(spec);
    symbd::save_instance(out_path, gen.instance);
    symbd::save_labels(out_path, gen.labels);
    std::printf("wrote %s: scheduling, %d machines, %d jobs\n", out_path.c_str(),
                gen.instance.machines, gen.instance.num_jobs());
  } else {
    throw symbd::Error(symbd::ErrorKind::BadInput, "unknown family: " + family);
  }
  return kOk;
}

int do_solve(const std::string& inst_path, const std::string& mode_str, bool symbreak,
             double time_limit, long long node_limit, const std::string& json_out) {
  const symbd::Instance inst = symbd::load_instance(inst_path);
  symbd::SolveSettings st;
  st.mode = symbd::mode_from_string(mode_str);
  st.symbreak = symbreak;
  if (time_limit > 0.0) st.time_limit = time_limit;
  if (node_limit > 0)
    st.node_limit = static_cast<int>(
        std::min<long long>(node_limit, std::numeric_limits<int>::max()));
  const auto t0 = std::chrono::steady_clock::now();
  const symbd::MasterModel mm = symbd::build_master(inst);
  const symbd::SolveResult res = symbd::solve_bnc(mm, st);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("%s %s%s: status=%s objective=%.6f nodes=%d cuts=%d oracle_calls=%d pool_hits=%d "
              "time=%.3fs\n",
              inst_path.c_str(), mode_str.c_str(), symbreak ? "+sb" : "",
              symbd::to_string(res.status),
              res.status == symbd::SolveStatus::Optimal ? res.objective : 0.0, res.stats.nodes,
              res.stats.cuts_added, res.stats.oracle_calls, res.stats.pool_hits, secs);
  if (!json_out.empty())
    symbd::write_text_file(json_out,
                           symbd::result_to_json(res, st.mode, symbreak, secs).dump(2) + "\n");
  switch (res.status) {
    case symbd::SolveStatus::Optimal: return kOk;
    case symbd::SolveStatus::Infeasible: return kInfeasible;
    default: return kLimit;
  }
}

int do_bench(const std::string& dir, const std::string& settings_str, const std::string& symbreak,
             double time_limit, const std::string& csv_path, const std::string& times_csv_path) {
  namespace fs = std::filesystem;
  std::vector<std::string> paths;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string p = entry.path().string();
    if (entry.path().extension() != ".json") continue;
    if (p.size() >= 12 && p.substr(p.size() - 12) == ".labels.json") continue;
    paths.push_back(p);
  }
  std::sort(paths.begin(), paths.end());
  if (paths.empty())
    throw symbd::Error(symbd::ErrorKind::EmptyInput, "no instances under " + dir);
  std::vector<std::pair<std::string, symbd::Instance>> instances;
  for (const std::string& p : paths)
    instances.push_back({fs::path(p).filename().string(), symbd::load_instance(p)});
  std::vector<symbd::BenchSetting> settings;
  std::string tok;
  std::istringstream ss(settings_str);
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    const symbd::SolveMode mode = symbd::mode_from_string(tok);
    if (symbreak != "on") settings.push_back({mode, false});
    if (symbreak != "off") settings.push_back({mode, true});
  }
  if (settings.empty())
    throw symbd::Error(symbd::ErrorKind::BadInput, "no settings requested");
  symbd::SolveSettings base;
  if (time_limit > 0.0) base.time_limit = time_limit;
  const symbd::BenchReport rep = symbd::run_matrix(instances, settings, base);
  if (!csv_path.empty()) symbd::write_text_file(csv_path, symbd::bench_csv(rep));
  if (!times_csv_path.empty())
    symbd::write_text_file(times_csv_path, symbd::bench_times_csv(rep));
  std::fputs(symbd::bench_table(rep).c_str(), stdout);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"logic-based Benders toolkit with master-problem symmetry handling"};
  app.require_subcommand(1);

  std::string family, out_path;
  std::uint64_t seed = 0;
  int batches = 1, batch_size = 1;
  auto* gen = app.add_subcommand("gen", "write a seeded instance and its batch labels");
  gen->add_option("--family", family, "rectpack or scheduling")->required();
  gen->add_option("--seed", seed, "generator seed")->required();
  gen->add_option("--batches", batches, "number of identical batches");
  gen->add_option("--batch-size", batch_size, "members per batch");
  gen->add_option("--out", out_path, "instance path; labels go to <out>.labels.json")->required();

  std::string inst_path, mode_str = "pool", symbreak_str = "off", json_out;
  double time_limit = 60.0;
  long long node_limit = 0;
  auto* solve = app.add_subcommand("solve", "solve one instance");
  solve->add_option("--instance", inst_path, "instance json")->required();
  solve->add_option("--mode", mode_str, "plain, pool, efrow or efcons");
  solve->add_option("--symbreak", symbreak_str, "on or off")
      ->check(CLI::IsMember({"on", "off"}));
  solve->add_option("--time-limit", time_limit, "seconds, 0 disables");
  solve->add_option("--node-limit", node_limit, "0 disables");
  solve->add_option("--json-out", json_out, "write the result as json");

  std::string dir, settings_str = "plain,pool,efrow,efcons", bench_symbreak = "off", csv_path,
              times_csv_path;
  double bench_time_limit = 60.0;
  auto* bench = app.add_subcommand("bench", "run a settings matrix over an instance directory");
  bench->add_option("--dir", dir, "directory of instance json files")->required();
  bench->add_option("--settings", settings_str, "comma list of modes");
  bench->add_option("--symbreak", bench_symbreak, "on, off or both")
      ->check(CLI::IsMember({"on", "off", "both"}));
  bench->add_option("--time-limit", bench_time_limit, "seconds per run, 0 disables");
  bench->add_option("--csv", csv_path, "per-run csv (deterministic columns)");
  bench->add_option("--times-csv", times_csv_path, "per-run wall-clock csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kInputError;
  }

  try {
    if (gen->parsed()) return do_gen(family, seed, batches, batch_size, out_path);
    if (solve->parsed())
      return do_solve(inst_path, mode_str, symbreak_str == "on", time_limit, node_limit, json_out);
    return do_bench(dir, settings_str, bench_symbreak, bench_time_limit, csv_path, times_csv_path);
  } catch (const symbd::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kInputError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kInputError;
  }
}
