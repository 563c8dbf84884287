#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

namespace linkex {

// Flat key=value experiment description; every field can come from a config
// file or a command-line override. The manifest written next to the CSV
// artifacts uses the same format, so a run can be replayed from it.
struct ExperimentConfig {
  std::string graph = "er";  // er | ba | file
  std::string graph_file;
  std::uint32_t nodes = 1000;
  std::uint64_t edges = 5000;
  std::uint32_t attach_m = 5;

  std::string scheme = "baseline";  // baseline | bloom
  double alpha = 1.0;
  double beta = 0.5;
  double gamma = 1.0;
  double fp_rate = 0.1;
  std::uint32_t rounds = 0;  // 0 = Diam(G)
  std::uint64_t seed = 1;

  bool compress = false;
  bool track_freq = false;
  bool incremental = false;
  bool run_attack = false;
  bool run_utility = false;
  bool account_bytes = true;
  bool per_round_recovery = true;
  bool exhaustive_recovery = false;
  std::uint32_t samples = 100;

  std::string out_dir = ".";
};

ExperimentConfig load_config(std::istream& in);
ExperimentConfig load_config_file(const std::string& path);
void apply_override(ExperimentConfig& cfg, const std::string& key,
                    const std::string& value);
void write_config(const ExperimentConfig& cfg, std::ostream& out);

// Runs the configured experiment and writes rounds.csv, node_volumes.csv,
// attack.csv / utility.csv when enabled, and manifest.txt into out_dir.
void run_experiment(const ExperimentConfig& cfg, std::ostream& log);

}  // namespace linkex
