#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lsweep/greens_kernel.hpp"
#include "lsweep/grid.hpp"
#include "lsweep/sweep.hpp"
#include "lsweep/twolevel.hpp"

namespace lsweep {

/// Invalid configuration; the message names the file and line when known.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GridConfig {
  int n = 64;
  /// Frequency; when absent it follows ppw, and without ppw omega = n.
  std::optional<double> omega;
  std::optional<double> ppw;
  double min_ppw = 6.0;

  double resolved_omega() const;
};

struct MediumConfig {
  Profile profile = SmoothBump{};
  /// Seed of gaussian_bumps when set explicitly; otherwise the run seed.
  std::optional<std::uint64_t> seed;
  double margin = 0.1;
};

struct PartitionConfig {
  /// Layers per direction; absent means max(1, round(n / 50)).
  std::optional<int> layers;
  int extension = 10;
  double shift_strength = 1.0;
};

struct SolverConfig {
  double outer_tol = 1e-10;
  double inner_tol = 1e-3;
  double sparse_tol = 1e-6;
  bool flexible = true;
  int restart = 200;
  int max_outer = 200;
  int max_inner = 200;
  int waves = 64;
  /// Random perturbation of each angle, as a fraction of the angular spacing.
  double angle_jitter = 0.0;
  int window_radius = 12;
  DiagonalRule diagonal = DiagonalRule::CellAverage;
  TransposeMode transpose = TransposeMode::Geometric;
  /// Repetitions of each timed online solve; the median is reported.
  int repetitions = 3;
};

struct ScalingConfig {
  std::vector<int> sizes{64, 128, 256};
};

struct OutputConfig {
  std::string dir = "out";
  bool dump_field = false;
};

struct ExperimentConfig {
  GridConfig grid;
  MediumConfig medium;
  PartitionConfig partition;
  SolverConfig solver;
  ScalingConfig scaling;
  OutputConfig output;
  std::uint64_t seed = 1;
};

/// Parses YAML text. Unknown keys and bad values throw ConfigError with the
/// line number; `source` names the input in messages.
ExperimentConfig parse_config(const std::string& text, const std::string& source = "<config>");
ExperimentConfig load_config(const std::string& path);

/// Full configuration, every default spelled out, as YAML that parse_config
/// accepts.
std::string dump_config(const ExperimentConfig& config);

/// Derived objects.
Grid config_grid(const ExperimentConfig& config, int n);
Medium config_medium(const ExperimentConfig& config, const Grid& grid);
SetupOptions config_setup(const ExperimentConfig& config, const Grid& grid);
TwoLevelOptions config_two_level(const ExperimentConfig& config);

/// Incident angles: uniform on [0, 2 pi), optionally jittered from the seed.
std::vector<double> incident_angles(const ExperimentConfig& config);

}  // namespace lsweep
