#pragma once

// Experiment drivers behind the mixlab subcommands. Each driver turns a resolved
// configuration into tables (one CSV each) and a JSON summary; all randomness is
// derived from the configured seed, so outputs do not depend on the worker count.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mixlab/skewshift.hpp"
#include "mixlab/trigpoly.hpp"

namespace mixlab::lab {

struct ExperimentConfig {
  std::string experiment;
  std::string roof;
  std::optional<double> alpha;
  std::optional<double> beta;
  std::optional<double> C;
  std::vector<double> t;
  std::vector<std::int64_t> n;
  std::optional<int> grid;
  std::optional<std::int64_t> samples;
  std::uint64_t seed = 1;
  int workers = 0;
  std::string precision = "double";
  double x = 0.1;
  double y = 0.2;
  std::vector<double> arc;
  std::vector<double> cube;
  std::optional<int> resolution;
  double tol = 1e-9;
  std::vector<int> levels;
  int points = 100;
  int trials = 0;
  int degree = 3;
  std::vector<double> delta;
  int euler = 1;
};

/// Names of every configuration key; config files may use exactly these.
const std::vector<std::string>& config_keys();

/// Fills experiment-specific defaults and checks ranges. Throws ValidationError.
ExperimentConfig resolve(ExperimentConfig config);

/// The resolved configuration as JSON. The worker count is an execution detail and
/// is left out unless requested, so summaries are byte-identical across --workers.
nlohmann::json config_to_json(const ExperimentConfig& config, bool include_workers);

/// Applies the keys of a config file to fields not fixed on the command line.
void apply_config_json(ExperimentConfig& config, const nlohmann::json& j,
                       const std::vector<std::string>& fixed_keys);

struct Table {
  std::string name;  ///< file stem
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

struct ExperimentResult {
  std::vector<Table> tables;
  nlohmann::json summary;
  /// Short human-readable result for stdout (e.g. the verdict).
  std::string headline;
};

ExperimentResult run_experiment(const ExperimentConfig& config);

/// Random real trig polynomial of the given degree with zero mean, normalized so the
/// largest coefficient modulus is 1.
TrigPoly1D random_unit_trig_poly(int degree, std::uint64_t seed, std::uint64_t stream);

/// Least-squares slope of log(measure) against log(delta).
double loglog_slope(const std::vector<double>& delta, const std::vector<double>& measure);

/// Sublevel measures |g| < delta for every delta on a 1D midpoint grid.
std::vector<double> sublevel_profile(const TrigPoly1D& g, const std::vector<double>& delta,
                                     int grid, int workers);

}  // namespace mixlab::lab
