// Closed-loop run orchestration: schedules control, sampling, adaptation and
// target rebuilds, logs metrics, and produces deterministic run records.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ergodic/controller.hpp"
#include "ergodic/estimator.hpp"
#include "ergodic/scenario.hpp"

namespace ergodic {

struct MetricsRow {
  double t = 0.0;
  double rmse_normalized = 0.0;
  double ergodic_metric = 0.0;
  std::optional<double> lyapunov;  // absent when no reference weights exist
};

struct TrajectoryRow {
  double t = 0.0;
  int robot = 0;
  Vec2 position{0.0, 0.0};
  Vec2 control{0.0, 0.0};
  bool sampled = false;
};

struct RunRecord {
  ScenarioConfig config;  // resolved configuration echo
  std::vector<Vec2> initial_positions;
  std::vector<MetricsRow> metrics;        // one row per sampling event
  std::vector<TrajectoryRow> trajectory;  // one row per robot per control step
  Eigen::VectorXd estimate_grid;          // field estimate at the final time
  Eigen::VectorXd truth_grid;             // ground truth at the final time
  int sample_events = 0;
  // Largest |integral - 1| seen across all target rebuilds of the run.
  double max_target_integral_error = 0.0;
  bool diverged = false;
  std::string diagnostic;
};

struct RunOptions {
  // Skip every estimator interaction (used to verify the baseline mode's
  // controls are estimator-independent).
  bool disable_estimator = false;
};

RunRecord run_scenario(const ScenarioConfig& config, const RunOptions& options = {});

// sqrt(mean((estimate - truth)^2)) / (max(truth) - min(truth)).
double normalized_rmse(const Eigen::VectorXd& estimate,
                       const Eigen::VectorXd& truth);

struct ComparisonSummary {
  double final_rmse_ratio = 0.0;  // last RMSE of a divided by last RMSE of b
  // Fraction of final-quarter sampling events where a's RMSE <= b's.
  double final_quarter_frac = 0.0;
};

struct ComparisonRecord {
  RunRecord run_a;
  RunRecord run_b;
  std::vector<double> t;
  std::vector<double> rmse_a;
  std::vector<double> rmse_b;
  std::vector<double> delta;  // rmse_a - rmse_b
  ComparisonSummary summary;
};

// Paired runs sharing a seed. Configurations may differ only in controller
// mode and the moving field's gamma.
ComparisonRecord compare_runs(const ScenarioConfig& a, const ScenarioConfig& b);

}  // namespace ergodic
