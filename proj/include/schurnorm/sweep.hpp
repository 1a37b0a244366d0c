#pragma once

// Single-frequency estimates, warm-started frequency sweeps with resumable
// per-frequency state, and the frequency-independent baselines.
//
// Output layout under config.output_dir:
//   estimate.csv, estimate_state.json, history.csv, profiles.csv   (estimate)
//   sweep.csv, profiles.csv, sweep_meta.json, state/omega_NNNNN.json (sweep)
//   baselines.json                                                   (baselines)

#include <Eigen/Dense>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "schurnorm/config.hpp"
#include "schurnorm/minimax.hpp"

namespace schurnorm {

inline constexpr const char* kSweepHeader =
    "omega,schur_estimate,l2_norm_k,truncation_norm,iterations,ref_points";
inline constexpr const char* kHistoryHeader = "iteration,t,ref_points,grid_max";

struct SweepRecord {
  double omega = 0.0;
  double schur_estimate = 0.0;   // fine grid
  double coarse_estimate = 0.0;  // optimization grid
  double l2_norm_k = 0.0;        // fine grid
  double truncation_norm = 0.0;  // optimization grid
  int iterations = 0;
  int ref_points = 0;
  bool converged = false;
  bool failed = false;
  std::string failure;
  Eigen::VectorXd p_samples;  // fine grid
  Eigen::VectorXd q_samples;
};

struct EstimateResult {
  SweepRecord record;
  OptState state;
};

using Logger = std::function<void(const std::string&)>;

/// Optimizes at one frequency. A cold start draws the model from
/// config.seed; a warm start applies carryover to `warm`. Inner solver
/// failures are recorded in the result; DegenerateDenominator propagates.
EstimateResult estimate_omega(const RunConfig& config, double omega,
                              const OptState* warm = nullptr, const Logger& log = {});

std::string csv_row(const SweepRecord& r);
std::string profile_row(const SweepRecord& r);

// Per-frequency state file (model, references, t, iteration, record).
std::string state_to_json(const EstimateResult& result, int omega_index);
EstimateResult state_from_json(const std::string& text);

/// Writes estimate.csv, estimate_state.json, history.csv and profiles.csv.
EstimateResult cmd_estimate(const RunConfig& config, double omega, const Logger& log = {});

struct SweepSummary {
  int computed = 0;  // frequencies evaluated in this invocation
  int resumed = 0;   // frequencies taken from existing state files
  int failures = 0;
};

/// Ascending sweep over config.omega_at(0..count-1). With `resume`, every
/// frequency with a state file is reused and the CSVs are rebuilt from the
/// stored records before continuing.
SweepSummary cmd_sweep(const RunConfig& config, bool resume, const Logger& log = {});

struct Baselines {
  std::optional<double> lambda_inverse;
  double l2_kbar = 0.0;
  double tkbar_norm = 0.0;
  int tkbar_modes = 0;
};

Baselines compute_baselines(const RunConfig& config);
std::string baselines_to_json(const Baselines& b);
Baselines cmd_baselines(const RunConfig& config);

std::filesystem::path state_path(const RunConfig& config, int omega_index);

}  // namespace schurnorm
