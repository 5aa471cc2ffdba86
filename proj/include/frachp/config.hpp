#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "frachp/dynamics.hpp"

namespace frachp {

inline constexpr std::string_view kCodeVersion = "frachp 1.0.0 (noise stream v1)";

/// Flat key = value run description. Every key except system, alpha, beta
/// and t_eval has a default; see README for the table.
struct RunConfig {
  std::string system;
  double alpha = 0.0;
  double beta = 0.0;
  double t_eval = 0.0;

  double t_start = 0.0;
  double h = 1e-4;
  std::size_t n_steps = 7000;
  std::uint64_t seed = 1;
  std::size_t n_paths = 64;
  /// Empty means: q = 1 and p = 0 in every coordinate.
  std::vector<double> q0;
  std::vector<double> p0;
  std::string outputs = "out";
  bool plot = true;
  bool eq15_literal = false;
  bool dump_path = false;

  std::string noise = "cos";
  double noise_scale = 1.0;

  std::size_t levels = 4;
  std::size_t perturbations = 20;
  double stationarity_threshold = 1e-3;

  std::vector<double> mass{1.0};
  std::vector<double> stiffness{0.0};
  std::vector<double> cos_coeff{1.0};
  std::vector<double> metric_a{1.0, 1.0};
  std::vector<double> metric_b{0.0, 1.0};

  double mu = 0.1;
  double sigma = 0.0;
  double x0 = 1.0;
  double rate = 0.0;
  std::size_t volterra_path_files = 10;

  /// Informational; read back from a run_manifest.
  std::string code_version;
};

/// Parses `key = value` lines; `#` starts a comment. Unknown keys, missing
/// required keys and malformed or out-of-range values are errors naming the
/// key and line.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

/// Every resolved key in parse_config's format plus code_version and
/// resolved_seed; parse_config(manifest) reproduces the run.
std::string to_manifest(const RunConfig& config);

FractionalParams fractional_params(const RunConfig& config);
SystemSpec build_system(const RunConfig& config);
NoiseKind noise_kind(const RunConfig& config);

/// Initial (q0, p0) padded to the system dimension with the defaults.
std::pair<Vector, Vector> initial_vectors(const RunConfig& config, std::size_t dim);

}  // namespace frachp
