#pragma once
// Batch entry point: resolve the manifest (subcommand, config, output
// directory, overrides), dispatch the experiment, and map outcomes to exit
// codes: 0 success, 2 acceptance failure, 1 runtime error, 64 usage.

#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>

#include "shmod/acceptance.hpp"
#include "shmod/config.hpp"
#include "shmod/runners.hpp"

namespace shmod::cli {

struct RunManifest {
  std::string subcommand;
  std::filesystem::path config_path;  // empty: built-in defaults
  std::filesystem::path out_dir = "out";
  std::optional<std::uint64_t> seed_override;
  std::optional<int> replicas_override;
};

inline std::string usage_text() {
  std::string s = "usage: shmod <subcommand> [--config <path>] [--out <dir>]"
                  " [--seed <u64>] [--replicas <n>]\n\nsubcommands:\n";
  for (const auto& name : experiment_subcommands()) s += "  " + name + "\n";
  s += "  all-acceptance\n";
  return s;
}

inline int run_all_acceptance(const std::filesystem::path& dir) {
  const auto results = acceptance::run_all();
  io::CsvWriter csv(dir / "all-acceptance.csv");
  csv.provenance("acceptance verdicts", 0, acceptance::kSeed);
  // timings go to stdout only, keeping the verdict file byte-reproducible
  csv.columns({"criterion", "pass", "detail"});
  bool all_pass = true;
  std::printf("%-34s %-6s %8s  %s\n", "criterion", "result", "seconds", "detail");
  for (const auto& r : results) {
    std::printf("%-34s %-6s %8.1f  %s\n", r.name.c_str(),
                r.pass ? "PASS" : "FAIL", r.seconds, r.detail.c_str());
    std::string quoted = r.detail;
    for (auto& c : quoted)
      if (c == ',') c = ';';
    csv.row({r.name, r.pass ? "1" : "0", quoted});
    all_pass = all_pass && r.pass;
  }
  std::printf("%s\n", all_pass ? "ALL CRITERIA PASS" : "ACCEPTANCE FAILURE");
  return all_pass ? 0 : 2;
}

inline int dispatch(const RunManifest& m) {
  bool known = m.subcommand == "all-acceptance";
  for (const auto& name : experiment_subcommands())
    known = known || name == m.subcommand;
  if (!known) {
    std::fprintf(stderr, "unknown subcommand '%s'\n\n%s", m.subcommand.c_str(),
                 usage_text().c_str());
    return 64;
  }
  try {
    std::filesystem::create_directories(m.out_dir);
    if (m.subcommand == "all-acceptance") return run_all_acceptance(m.out_dir);

    experiments::ExperimentConfig cfg;
    if (!m.config_path.empty()) cfg = io::parse_config(m.config_path);
    if (m.seed_override) cfg.root_seed = *m.seed_override;
    if (m.replicas_override) cfg.n_replicas = *m.replicas_override;
    cfg.validate();
    return run_experiment_subcommand(m.subcommand, cfg, m.out_dir);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}

}  // namespace shmod::cli
