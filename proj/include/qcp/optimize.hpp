#pragma once

#include <Eigen/Core>
#include <nlohmann/json_fwd.hpp>
#include <vector>

#include "qcp/risk.hpp"
#include "qcp/tape.hpp"

namespace qcp {

struct OptimizerConfig {
  int max_iterations = 200;
  double gradient_tolerance = 1e-8;
  double armijo_c1 = 1e-4;
  double curvature_c2 = 0.9;
  // Re-record the frozen topology when the infinity-norm displacement from
  // the recording point exceeds this.
  double refresh_displacement = 0.1;
  // Relative cost disagreement between the stale and refreshed tapes that
  // forces extra iterations instead of declaring convergence.
  double refresh_rtol = 1e-9;
  double initial_step = 1.0;
  int max_backtracks = 40;
};

/// One compression instance: a target circuit evaluated at its reference
/// parameters against an ansatz whose parameters are optimized.
struct CompressionProblem {
  ParametrizedCircuit target;
  ParametrizedCircuit ansatz;
  TruncationConfig trunc_target;
  TruncationConfig trunc_ansatz;
  SeedSet seeds = SeedSet::all_sites;
  std::size_t term_cap = kDefaultTermCap;
  int threads = 1;

  TargetCache cache;  // filled by build_cache()

  void build_cache();
  bool has_cache() const { return !cache.entries.empty(); }

  /// Live risk at the given ansatz parameters, with coefficient truncation
  /// active (unlike the frozen tape used during optimization).
  RiskValue evaluate(const Eigen::VectorXd& params) const;
};

struct HistoryEntry {
  int iteration = 0;
  double cost = 0.0;
  double grad_norm = 0.0;
  double wall_time = 0.0;  // seconds since minimize() started
};

nlohmann::json history_to_json(const std::vector<HistoryEntry>& history);

struct MinimizeResult {
  Eigen::VectorXd params;
  double cost = 0.0;
  double grad_norm = 0.0;
  bool converged = false;
  int iterations = 0;
  int tape_recordings = 0;
  std::vector<HistoryEntry> history;
};

/// Polak-Ribiere conjugate gradient with Armijo backtracking on the frozen
/// cost topology. Starts from the ansatz reference parameters.
MinimizeResult minimize(CompressionProblem& problem,
                        const OptimizerConfig& config);

}  // namespace qcp
