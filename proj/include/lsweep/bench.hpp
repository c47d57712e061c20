#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "lsweep/config.hpp"
#include "lsweep/twolevel.hpp"

namespace lsweep {

/// Schema tag written in the first column of every CSV; bump on any column change.
inline constexpr const char* kCsvSchema = "lsweep-csv-1";

struct WaveResult {
  int wave = 0;
  double angle = 0;
  int outer_iterations = 0;
  long inner_iterations = 0;
  bool converged = false;
  double final_residual = 0;
  double seconds = 0;
};

struct SolveSummary {
  int n = 0;
  std::size_t N = 0;
  double omega = 0;
  int layers = 0;
  int waves = 0;
  double avg_outer = 0;
  double avg_inner = 0;
  double avg_seconds = 0;
  double offline_seconds = 0;
  bool all_converged = true;
};

struct SolveRun {
  std::vector<WaveResult> waves;
  SolveSummary summary;
  OfflineTimings offline;
  /// Total field of wave 0 when a dump was requested.
  Field total_field;
};

/// Offline setup once, then every incident wave through the two-level solve,
/// `workers` waves at a time. Results are ordered by wave index.
SolveRun run_solve(const ExperimentConfig& config, int workers, bool keep_field = false);

struct SparseWaveResult {
  int wave = 0;
  double angle = 0;
  std::string method;  // "bd" or "gs"
  int iterations = 0;
  bool converged = false;
  double final_residual = 0;
  long local_solves = 0;
  double seconds = 0;
};

/// Standalone study of C u = A f for every incident wave, preconditioned by
/// the bidirectional sweep and by the single-direction sweep.
std::vector<SparseWaveResult> run_sparse_bench(const ExperimentConfig& config, int workers,
                                               SolveSummary* summary = nullptr);

struct ScalingRow {
  int n = 0;
  std::size_t N = 0;
  double omega = 0;
  int layers = 0;
  double offline_seconds = 0;
  double online_seconds = 0;
  double avg_outer = 0;
  double avg_inner = 0;
  double avg_sparse = 0;
};

struct ScalingFit {
  std::string quantity;
  double slope = 0;
  double intercept = 0;
};

/// One row per size of config.scaling.sizes; omega scales with n.
std::vector<ScalingRow> run_scaling(const ExperimentConfig& config, int workers);

/// Least-squares fit of log(y) = slope log(x) + intercept.
ScalingFit loglog_fit(const std::string& quantity, const std::vector<double>& x,
                      const std::vector<double>& y);

std::vector<ScalingFit> scaling_fits(const std::vector<ScalingRow>& rows);

double median(std::vector<double> v);

/// Runs fn(i) for i in [0, count) on `workers` threads.
void parallel_for(int count, int workers, const std::function<void(int)>& fn);

// CSV writers. Every file starts with a header row whose first column is
// "schema".
void write_waves_csv(std::ostream& out, const std::vector<WaveResult>& rows);
void write_summary_csv(std::ostream& out, const SolveSummary& s);
void write_sparse_csv(std::ostream& out, const std::vector<SparseWaveResult>& rows);
void write_scaling_csv(std::ostream& out, const std::vector<ScalingRow>& rows);
void write_fit_csv(std::ostream& out, const std::vector<ScalingFit>& fits);
/// "# lsweep-field n=<nx>x<nz> omega=<w> h=<h>", then "i,j,re,im" rows.
void write_field_csv(std::ostream& out, const Grid& grid, const Field& u);

}  // namespace lsweep
