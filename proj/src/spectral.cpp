#include "ergodic/spectral.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace ergodic {

namespace {

// sin(pi t) and cos(pi t) with exact zeros where the true function vanishes
// at representable arguments (integers, resp. half-integers). The boundary
// Neumann property of the gradient relies on sin_pi(integer) == 0.
double sin_pi(double t) {
  const double r = std::remainder(t, 2.0);  // in [-1, 1], exact
  if (r == 0.0 || r == 1.0 || r == -1.0) return 0.0;
  return std::sin(std::numbers::pi * r);
}

double cos_pi(double t) {
  const double r = std::remainder(t, 2.0);
  if (r == 0.5 || r == -0.5) return 0.0;
  return std::cos(std::numbers::pi * r);
}

}  // namespace

ModeSet::ModeSet(int k_max, const Domain& domain)
    : k_max_(k_max), domain_(domain) {
  if (k_max < 0) {
    throw ConfigError("k_max must be non-negative, got " +
                      std::to_string(k_max));
  }
  const int n = (k_max + 1) * (k_max + 1);
  modes_.reserve(n);
  weights_.resize(n);
  inv_norm_.resize(n);
  const double l1 = domain_.length(0);
  const double l2 = domain_.length(1);
  int m = 0;
  for (int k1 = 0; k1 <= k_max; ++k1) {
    for (int k2 = 0; k2 <= k_max; ++k2, ++m) {
      modes_.push_back({k1, k2});
      weights_[m] = std::pow(1.0 + double(k1 * k1 + k2 * k2), -1.5);
      const double h2 = (k1 == 0 ? l1 : l1 / 2.0) * (k2 == 0 ? l2 : l2 / 2.0);
      inv_norm_[m] = 1.0 / std::sqrt(h2);
    }
  }
}

Eigen::VectorXd ModeSet::basis(const Vec2& x) const {
  domain_.require_inside(x);
  return basis_rel(domain_.to_relative(x));
}

Eigen::Matrix<double, Eigen::Dynamic, 2> ModeSet::basis_gradient(
    const Vec2& x) const {
  domain_.require_inside(x);
  return basis_gradient_rel(domain_.to_relative(x));
}

Eigen::VectorXd ModeSet::basis_rel(const Vec2& rel) const {
  const double s1 = rel[0] / domain_.length(0);
  const double s2 = rel[1] / domain_.length(1);
  // Per-axis tables: k_max+1 trig evaluations instead of one per mode.
  Eigen::VectorXd c1(k_max_ + 1), c2(k_max_ + 1);
  for (int k = 0; k <= k_max_; ++k) {
    c1[k] = cos_pi(k * s1);
    c2[k] = cos_pi(k * s2);
  }
  Eigen::VectorXd out(count());
  int m = 0;
  for (int k1 = 0; k1 <= k_max_; ++k1) {
    for (int k2 = 0; k2 <= k_max_; ++k2, ++m) {
      out[m] = inv_norm_[m] * c1[k1] * c2[k2];
    }
  }
  return out;
}

Eigen::Matrix<double, Eigen::Dynamic, 2> ModeSet::basis_gradient_rel(
    const Vec2& rel) const {
  const double l1 = domain_.length(0);
  const double l2 = domain_.length(1);
  const double s1 = rel[0] / l1;
  const double s2 = rel[1] / l2;
  Eigen::VectorXd c1(k_max_ + 1), c2(k_max_ + 1), s1v(k_max_ + 1),
      s2v(k_max_ + 1);
  for (int k = 0; k <= k_max_; ++k) {
    c1[k] = cos_pi(k * s1);
    c2[k] = cos_pi(k * s2);
    s1v[k] = sin_pi(k * s1);
    s2v[k] = sin_pi(k * s2);
  }
  Eigen::Matrix<double, Eigen::Dynamic, 2> grad(count(), 2);
  int m = 0;
  for (int k1 = 0; k1 <= k_max_; ++k1) {
    const double w1 = k1 * std::numbers::pi / l1;
    for (int k2 = 0; k2 <= k_max_; ++k2, ++m) {
      const double w2 = k2 * std::numbers::pi / l2;
      grad(m, 0) = -inv_norm_[m] * w1 * s1v[k1] * c2[k2];
      grad(m, 1) = -inv_norm_[m] * w2 * c1[k1] * s2v[k2];
    }
  }
  return grad;
}

Eigen::VectorXd ModeSet::uniform_density_coeffs() const {
  // <1/area, f_k> = 0 for k != 0 and 1/sqrt(area) for the constant mode.
  Eigen::VectorXd mu = Eigen::VectorXd::Zero(count());
  mu[0] = 1.0 / std::sqrt(domain_.area());
  return mu;
}

Eigen::VectorXd density_coeffs(const ModeSet& modes, const Grid& grid,
                               const Eigen::VectorXd& density) {
  if (density.size() != grid.cell_count()) {
    throw ShapeError("density_coeffs: expected " +
                     std::to_string(grid.cell_count()) + " cells, got " +
                     std::to_string(density.size()));
  }
  if (density.minCoeff() < 0.0) {
    throw NormalizationError("density has negative entries");
  }
  const double integral = grid.integrate(density);
  if (std::abs(integral - 1.0) > 1e-6) {
    throw NormalizationError("density integral is " +
                             std::to_string(integral) + ", expected 1");
  }
  Eigen::VectorXd mu = Eigen::VectorXd::Zero(modes.count());
  for (int c = 0; c < grid.cell_count(); ++c) {
    mu.noalias() += density[c] * modes.basis(grid.center(c));
  }
  return mu * grid.cell_area();
}

void accumulate_trajectory(Eigen::VectorXd& accum,
                           std::span<const Vec2> positions, double dt,
                           const ModeSet& modes) {
  if (accum.size() != modes.count()) {
    throw ShapeError("trajectory accumulator has wrong length");
  }
  for (const Vec2& x : positions) {
    accum.noalias() += dt * modes.basis(x);
  }
}

double ergodic_metric(const ModeSet& modes, const Eigen::VectorXd& coverage,
                      const Eigen::VectorXd& target) {
  if (coverage.size() != modes.count() || target.size() != modes.count()) {
    throw ShapeError("ergodic_metric: coefficient length mismatch");
  }
  double sum = 0.0;
  const Eigen::VectorXd& w = modes.sobolev_weights();
  for (int m = 0; m < modes.count(); ++m) {
    const double r = coverage[m] - target[m];
    sum += w[m] * r * r;
  }
  return sum;
}

GridBasisTable::GridBasisTable(const ModeSet& modes, const Grid& grid)
    : values_(grid.cell_count(), modes.count()),
      cell_area_(grid.cell_area()) {
  for (int c = 0; c < grid.cell_count(); ++c) {
    values_.row(c) = modes.basis(grid.center(c)).transpose();
  }
}

Eigen::VectorXd GridBasisTable::project(const Eigen::VectorXd& density) const {
  if (density.size() != values_.rows()) {
    throw ShapeError("basis table: density length mismatch");
  }
  return (values_.transpose() * density) * cell_area_;
}

}  // namespace ergodic
