#include "ergodic/simulation.hpp"

#include <cmath>

#include <Eigen/Cholesky>

#include "ergodic/errors.hpp"

namespace ergodic {

namespace {

Eigen::VectorXd truth_on_grid(const GroundTruthField& field, const Domain& domain,
                              const Grid& grid, double t) {
  Eigen::VectorXd values(grid.cell_count());
  for (int c = 0; c < grid.cell_count(); ++c) {
    values[c] = field.value(domain, grid.center(c), t);
  }
  return values;
}

// Least-squares projection of the truth field onto the bump basis, used as
// the reference weight vector for the logged Lyapunov value. The moment
// matrix depends only on the basis, so it is factored once and reused for
// time-varying fields.
class ProjectedReference {
 public:
  ProjectedReference(const Eigen::MatrixXd& features_table, const Grid& grid)
      : features_(features_table), cell_area_(grid.cell_area()) {
    const Eigen::MatrixXd moment =
        cell_area_ * (features_.transpose() * features_);
    solver_.compute(moment);
    ok_ = solver_.info() == Eigen::Success;
  }

  std::optional<Eigen::VectorXd> project(const Eigen::VectorXd& truth) const {
    if (!ok_) return std::nullopt;
    const Eigen::VectorXd rhs = cell_area_ * (features_.transpose() * truth);
    Eigen::VectorXd w = solver_.solve(rhs);
    if (!w.allFinite()) return std::nullopt;
    return w;
  }

 private:
  const Eigen::MatrixXd& features_;
  double cell_area_;
  Eigen::LDLT<Eigen::MatrixXd> solver_;
  bool ok_ = false;
};

}  // namespace

double normalized_rmse(const Eigen::VectorXd& estimate,
                       const Eigen::VectorXd& truth) {
  if (estimate.size() != truth.size() || estimate.size() == 0) {
    throw ShapeError("normalized_rmse: grid size mismatch");
  }
  const double span = truth.maxCoeff() - truth.minCoeff();
  if (!(span > 0.0)) {
    throw NormalizationError(
        "normalized_rmse: truth field is constant, normalization undefined");
  }
  const double mse = (estimate - truth).squaredNorm() / estimate.size();
  return std::sqrt(mse) / span;
}

RunRecord run_scenario(const ScenarioConfig& config, const RunOptions& options) {
  config.validate();

  RunRecord record;
  record.config = config;

  const Domain domain = config.domain();
  const GroundTruthField field = config.build_field();
  const Grid metric_grid(domain, config.metric_grid_n1, config.metric_grid_n2);
  const ModeSet modes(config.k_max, domain);

  RngStream init_rng(config.seed, "robot-init");
  RngStream tie_rng(config.seed, "tie-break");
  RngStream noise_rng(config.seed, "sensor-noise");

  std::vector<Vec2> starts;
  for (int i = 0; i < config.n_robots; ++i) {
    const double x = init_rng.uniform(domain.lower()[0], domain.upper()[0]);
    const double y = init_rng.uniform(domain.lower()[1], domain.upper()[1]);
    starts.push_back({x, y});
  }
  record.initial_positions = starts;

  CoverageController controller(modes, config.u_max, config.control_dt, starts);

  const bool use_estimator = config.estimator_enabled && !options.disable_estimator;
  const bool adaptive = config.mode == ControllerMode::Adaptive;

  std::optional<FieldEstimator> estimator;
  Eigen::MatrixXd features_table;
  std::optional<GridBasisTable> basis_table;
  std::optional<ProjectedReference> reference;
  std::optional<Eigen::VectorXd> static_reference_weights;
  if (use_estimator) {
    RbfBasis basis(domain, config.estimator.lattice_g, config.estimator.rbf_sigma);
    features_table = basis.features_table(metric_grid);
    estimator.emplace(std::move(basis), config.estimator.alpha,
                      config.estimator.beta, config.estimator.fusion,
                      config.n_robots);
    reference.emplace(features_table, metric_grid);
    if (adaptive) basis_table.emplace(modes, metric_grid);
  }

  const double sample_period = 1.0 / config.sample_rate_hz;
  const int steps_per_sample = config.steps_per_sample();
  const long n_steps = std::lround(config.t_sim / config.control_dt);

  auto log_metrics = [&](double t) {
    MetricsRow row;
    row.t = t;
    const Eigen::VectorXd truth = truth_on_grid(field, domain, metric_grid, t);
    Eigen::VectorXd estimate = use_estimator
                                   ? estimator->estimate_on(features_table)
                                   : Eigen::VectorXd::Zero(metric_grid.cell_count());
    row.rmse_normalized = normalized_rmse(estimate, truth);
    row.ergodic_metric = controller.metric();
    if (use_estimator) {
      std::optional<Eigen::VectorXd> ref = static_reference_weights;
      if (!ref && reference) ref = reference->project(truth);
      if (ref) row.lyapunov = estimator->lyapunov(*ref);
    }
    record.metrics.push_back(row);
  };

  if (use_estimator && field.kind() == GroundTruthField::Kind::StaticMixture) {
    static_reference_weights =
        reference->project(truth_on_grid(field, domain, metric_grid, 0.0));
  }

  for (long step = 1; step <= n_steps; ++step) {
    controller.step(tie_rng);
    const double t = controller.elapsed();
    const bool sampling = step % steps_per_sample == 0;

    for (const RobotState& r : controller.robots()) {
      record.trajectory.push_back({t, r.id, r.position, r.last_control, sampling});
    }
    if (!sampling) continue;

    record.sample_events += 1;
    if (use_estimator) {
      std::vector<Sample> batch;
      for (const RobotState& r : controller.robots()) {
        batch.push_back({r.position,
                         field.sample(domain, r.position, t, config.field.noise_std,
                                      noise_rng),
                         r.id});
      }
      try {
        estimator->ingest(batch, sample_period);
        estimator->adapt_step(config.control_dt);
      } catch (const DivergenceError& e) {
        record.diverged = true;
        record.diagnostic = e.what();
        break;
      }
      if (adaptive) {
        const auto target = estimator->build_target_density(
            metric_grid, modes, &features_table, &*basis_table);
        record.max_target_integral_error = std::max(
            record.max_target_integral_error, target.integral_error);
        controller.set_target(target.coeffs);
      }
    }
    log_metrics(t);
  }

  const double t_end = controller.elapsed();
  record.truth_grid = truth_on_grid(field, domain, metric_grid, t_end);
  record.estimate_grid = use_estimator
                             ? estimator->estimate_on(features_table)
                             : Eigen::VectorXd::Zero(metric_grid.cell_count());
  return record;
}

ComparisonRecord compare_runs(const ScenarioConfig& a, const ScenarioConfig& b) {
  // Neutralize the axes a comparison is allowed to vary, then require the
  // rest of the configuration (seed included) to match exactly.
  ScenarioConfig na = a, nb = b;
  nb.mode = na.mode;
  nb.field.gamma = na.field.gamma;
  nb.out_dir = na.out_dir;
  if (!(na == nb)) {
    throw ConfigError(
        "compare: configurations may differ only in controller mode and "
        "field.gamma, and must share the seed");
  }

  ComparisonRecord rec;
  rec.run_a = run_scenario(a);
  rec.run_b = run_scenario(b);

  const size_t n = std::min(rec.run_a.metrics.size(), rec.run_b.metrics.size());
  for (size_t i = 0; i < n; ++i) {
    rec.t.push_back(rec.run_a.metrics[i].t);
    rec.rmse_a.push_back(rec.run_a.metrics[i].rmse_normalized);
    rec.rmse_b.push_back(rec.run_b.metrics[i].rmse_normalized);
    rec.delta.push_back(rec.rmse_a.back() - rec.rmse_b.back());
  }
  if (n > 0) {
    rec.summary.final_rmse_ratio = rec.rmse_a.back() / rec.rmse_b.back();
    const size_t quarter_begin = n - (n + 3) / 4;  // last quarter, rounded up
    size_t wins = 0;
    for (size_t i = quarter_begin; i < n; ++i) {
      if (rec.rmse_a[i] <= rec.rmse_b[i]) ++wins;
    }
    rec.summary.final_quarter_frac =
        static_cast<double>(wins) / static_cast<double>(n - quarter_begin);
  }
  return rec;
}

}  // namespace ergodic
