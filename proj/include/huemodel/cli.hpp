#ifndef HUEMODEL_CLI_HPP
#define HUEMODEL_CLI_HPP

// Subcommands behind the `huemodel` executable. Each returns a process exit
// status: 0 success, 1 I/O or configuration error, 2 numerical/experiment error.

#include "huemodel/experiments.hpp"
#include "huemodel/model.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>

namespace huemodel {

struct RunConfig {
  std::string command;  // run | tuning | correlate | reconstruct
  std::filesystem::path input;
  std::filesystem::path out{"out"};
  std::filesystem::path config;
  double hue{360};
  int samples{500};
  std::uint64_t seed{1};
  std::string layer;  // empty: all layers
  int verbosity{0};
  ModelConfig model{ModelConfig::defaults()};
  ExperimentOptions options;
};

/// Reads the model config plus an optional "experiment" section
///   {"window", "annulus_inner", "annulus_outer", "p_enter", "p_remove",
///    "hue", "samples", "seed"}
/// into `rc`. Command-line flags are applied afterwards by the caller, so
/// they take precedence over file values.
void apply_config_file(RunConfig& rc, const std::filesystem::path& path);

int cmd_run(const RunConfig& rc, std::ostream& err);
int cmd_tuning(const RunConfig& rc, std::ostream& err);
int cmd_correlate(const RunConfig& rc, std::ostream& err);
int cmd_reconstruct(const RunConfig& rc, std::ostream& err);
int dispatch(const RunConfig& rc, std::ostream& err);

/// Lowercase hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

/// Writes manifest.json in `dir` listing each file (relative path, size,
/// sha256) plus `parameters`.
void write_run_manifest(const std::filesystem::path& dir, const std::string& command,
                        const std::vector<std::filesystem::path>& files, const nlohmann::json& parameters);

nlohmann::json to_json(const StepwiseModel& m);
nlohmann::json to_json(const ReconstructionResult& r);
nlohmann::json to_json(const CorrelationReport& r);

} // namespace huemodel

#endif
