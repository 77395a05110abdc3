#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "agen/errors.hpp"
#include "agen/group_models.hpp"
#include "agen/reconstruction.hpp"
#include "agen/vecint.hpp"

namespace agen::cli {

/// Malformed or inadmissible experiment configuration (exit code 2).
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error("ConfigError: " + what) {}
};

struct ScanSettings {
  double re_min = -5.0, re_max = 5.0, im_min = -5.0, im_max = 5.0;
  int points = 41;
  double guard_angle = kDeltaMin;
};

struct MollifySettings {
  std::vector<double> n_sequence{1.0, 10.0, 100.0, 1000.0};
};

struct ReconstructSettings {
  std::vector<double> times{0.5, 1.0, 2.0};
  /// Im z for the Delta variant and Re alpha for the CZ variant.
  std::vector<double> offsets{0.1, 0.03, 0.01};
  RadialGrid grid;
};

struct BoundFitSettings {
  std::vector<double> r_values{0.25, 0.5, 0.75};
  double mu_min = 10.0;
  double mu_max = 1e4;
  int points = 16;
  double ray_arg = 0.0;
};

struct ExperimentConfig {
  std::optional<GroupModel> model;
  std::vector<Complex> mu_list;
  QuadratureSpec quadrature;
  std::map<std::string, double> tolerances;
  std::filesystem::path output_dir = "agen_out";
  int samples = 8;
  ScanSettings scan;
  MollifySettings mollify;
  ReconstructSettings reconstruct;
  BoundFitSettings bound_fit;
};

/// Tolerance names accepted under "tolerances" with their defaults.
const std::map<std::string, double>& default_tolerances();

/// Parses a JSON document. Throws ConfigError on unknown keys, type errors
/// and mu values on the branch cut (-inf, 0].
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Subcommand names in execution order of a full suite run.
const std::vector<std::string>& subcommands();

struct RunOptions {
  std::optional<std::filesystem::path> out_dir;
  std::uint64_t seed = 1;
};

/// Runs one subcommand: writes <out>/<subcommand>.csv and prints one
/// PASS/FAIL line per check to out. Returns 0 when all checks pass, 1
/// otherwise.
int run_subcommand(const std::string& name, const ExperimentConfig& config,
                   const RunOptions& options, std::ostream& out);

/// Entry point: tool <subcommand> --config <path> [--out <dir>] [--seed <u64>].
/// Exit codes: 0 all checks pass, 1 a check failed, 2 invalid config or flags.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace agen::cli
