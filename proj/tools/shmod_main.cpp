#include <CLI11.hpp>

#include <optional>
#include <string>

#include "shmod/cli.hpp"

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "%s", shmod::cli::usage_text().c_str());
    return 64;
  }
  shmod::cli::RunManifest manifest;
  manifest.subcommand = argv[1];

  CLI::App app{"spectral simulation and numerical verification toolkit for the "
               "linear stochastic Swift-Hohenberg equation and its amplitude "
               "equation"};
  std::string config_path, out_dir = "out";
  std::optional<std::uint64_t> seed;
  std::optional<int> replicas;
  app.add_option("--config", config_path, "experiment configuration file");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--seed", seed, "root seed (overrides the config)");
  app.add_option("--replicas", replicas, "replica count (overrides the config)");
  try {
    app.parse(argc - 1, argv + 1);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 64;
  }

  manifest.config_path = config_path;
  manifest.out_dir = out_dir;
  manifest.seed_override = seed;
  manifest.replicas_override = replicas;
  return shmod::cli::dispatch(manifest);
}
