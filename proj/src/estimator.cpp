#include "ergodic/estimator.hpp"

#include <cmath>
#include <string>

#include "ergodic/errors.hpp"

namespace ergodic {

RbfBasis::RbfBasis(const Domain& domain, int lattice_g, double sigma)
    : domain_(domain), sigma_(sigma) {
  if (lattice_g < 2) {
    throw ConfigError("rbf lattice needs at least 2 points per axis, got " +
                      std::to_string(lattice_g));
  }
  if (!(sigma > 0.0)) {
    throw ConfigError("rbf sigma must be positive, got " +
                      std::to_string(sigma));
  }
  centers_.reserve(lattice_g * lattice_g);
  const Vec2& lo = domain.lower();
  for (int i = 0; i < lattice_g; ++i) {
    for (int j = 0; j < lattice_g; ++j) {
      centers_.push_back({lo[0] + domain.length(0) * i / (lattice_g - 1),
                          lo[1] + domain.length(1) * j / (lattice_g - 1)});
    }
  }
}

Eigen::VectorXd RbfBasis::features(const Vec2& x) const {
  domain_.require_inside(x);
  Eigen::VectorXd k(size());
  const double inv = 1.0 / (2.0 * sigma_ * sigma_);
  for (int j = 0; j < size(); ++j) {
    k[j] = std::exp(-(x - centers_[j]).squaredNorm() * inv);
  }
  return k;
}

Eigen::MatrixXd RbfBasis::features_table(const Grid& grid) const {
  Eigen::MatrixXd table(grid.cell_count(), size());
  for (int c = 0; c < grid.cell_count(); ++c) {
    table.row(c) = features(grid.center(c)).transpose();
  }
  return table;
}

FieldEstimator::FieldEstimator(RbfBasis basis, double alpha, double beta,
                               Fusion fusion, int n_robots)
    : basis_(std::move(basis)), alpha_(alpha), beta_(beta), fusion_(fusion) {
  if (!(alpha > 0.0)) {
    throw ConfigError("estimator alpha must be positive");
  }
  if (beta < 0.0) {
    throw ConfigError("estimator beta must be non-negative");
  }
  const int m = basis_.size();
  const int n_slots = fusion == Fusion::Centralized ? 1 : n_robots;
  slots_.resize(n_slots);
  for (Slot& s : slots_) {
    s.info = Eigen::MatrixXd::Zero(m, m);
    s.cross = Eigen::VectorXd::Zero(m);
    s.weights = Eigen::VectorXd::Zero(m);
  }
}

void FieldEstimator::ingest(const std::vector<Sample>& batch,
                            double dt_sample) {
  if (!(dt_sample > 0.0)) {
    throw DataError("sampling period must be positive");
  }
  for (const Sample& s : batch) {
    if (!std::isfinite(s.value)) {
      throw DataError("non-finite measurement at (" +
                      std::to_string(s.position[0]) + ", " +
                      std::to_string(s.position[1]) + ")");
    }
  }
  // Time advances for every slot, so each one discounts once per event even
  // if no sample is routed to it.
  const double discount = std::exp(-beta_ * dt_sample);
  for (Slot& s : slots_) {
    s.info *= discount;
    s.cross *= discount;
  }
  for (const Sample& s : batch) {
    const int slot =
        fusion_ == Fusion::Centralized ? 0 : s.robot % slot_count();
    const Eigen::VectorXd k = basis_.features(s.position);
    slots_[slot].info.noalias() += dt_sample * (k * k.transpose());
    slots_[slot].cross.noalias() += dt_sample * (k * s.value);
  }
}

void FieldEstimator::adapt_step(double dt) {
  if (!(dt > 0.0)) {
    throw DataError("adapt step needs dt > 0");
  }
  for (Slot& s : slots_) {
    s.weights.noalias() -= alpha_ * dt * (s.info * s.weights - s.cross);
    if (!s.weights.allFinite() || s.weights.norm() > 1e6) {
      throw DivergenceError(
          "adaptation diverged (weight norm exceeded 1e6); reduce alpha*dt "
          "(stability requires alpha*dt*lambda_max(info matrix) < 2)");
    }
  }
}

double FieldEstimator::estimate(const Vec2& x) const {
  return basis_.features(x).dot(mean_weights());
}

Eigen::VectorXd FieldEstimator::estimate_on(
    const Eigen::MatrixXd& features_table) const {
  if (features_table.cols() != basis_.size()) {
    throw ShapeError("features table column count does not match basis size");
  }
  return features_table * mean_weights();
}

Eigen::VectorXd FieldEstimator::mean_weights() const {
  Eigen::VectorXd w = slots_[0].weights;
  for (int i = 1; i < slot_count(); ++i) w += slots_[i].weights;
  return w / slot_count();
}

FieldEstimator::TargetDensity FieldEstimator::build_target_density(
    const Grid& grid, const ModeSet& modes,
    const Eigen::MatrixXd* features_table,
    const GridBasisTable* basis_table) const {
  Eigen::VectorXd estimate;
  if (features_table != nullptr) {
    estimate = estimate_on(*features_table);
  } else {
    estimate.resize(grid.cell_count());
    const Eigen::VectorXd w = mean_weights();
    for (int c = 0; c < grid.cell_count(); ++c) {
      estimate[c] = basis_.features(grid.center(c)).dot(w);
    }
  }

  // A density must be positive; the estimate need not be. Clamp negatives
  // and lift everything by a small floor so low-estimate regions keep a
  // nonzero share of coverage.
  Eigen::VectorXd density = estimate.cwiseMax(0.0);
  const double floor = 1e-3 * density.mean() + 1e-12;
  density.array() += floor;
  const double integral = grid.integrate(density);
  density /= integral;

  TargetDensity out;
  out.integral_error = std::abs(grid.integrate(density) - 1.0);
  out.coeffs = basis_table != nullptr ? basis_table->project(density)
                                      : density_coeffs(modes, grid, density);
  out.cell_density = std::move(density);
  return out;
}

double FieldEstimator::lyapunov(const Eigen::VectorXd& true_weights) const {
  if (true_weights.size() != basis_.size()) {
    throw ShapeError("lyapunov: weight length mismatch");
  }
  double v = 0.0;
  for (const Slot& s : slots_) {
    v += 0.5 * (s.weights - true_weights).squaredNorm();
  }
  return v;
}

void FieldEstimator::set_weights(int slot, const Eigen::VectorXd& w) {
  if (w.size() != basis_.size()) {
    throw ShapeError("set_weights: length mismatch");
  }
  slots_.at(slot).weights = w;
}

}  // namespace ergodic
