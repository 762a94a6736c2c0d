#include "ergodic/controller.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ergodic/errors.hpp"

namespace ergodic {

Vec2 saturated_control(const Vec2& steering, double u_max, RngStream& tie_break,
                       double eps) {
  const double norm = steering.norm();
  if (norm > eps) {
    return (-u_max / norm) * steering;
  }
  return u_max * tie_break.unit_vector();
}

CoverageController::CoverageController(ModeSet modes, double u_max, double dt,
                                       const std::vector<Vec2>& initial_positions)
    : modes_(std::move(modes)), u_max_(u_max), dt_(dt) {
  if (!(u_max > 0.0)) throw ConfigError("u_max must be positive");
  if (!(dt > 0.0)) throw ConfigError("control dt must be positive");
  if (initial_positions.empty()) {
    throw ConfigError("controller needs at least one robot");
  }
  const Domain& dom = modes_.domain();
  // Clip a hair inside the walls. Exactly on a wall every mode's normal
  // derivative is identically zero, so the feedback could never push a
  // clipped robot back into the interior; the inset keeps the over-coverage
  // gradient able to eject it.
  inset_ = 1e-4 * dom.lengths();
  int id = 0;
  for (const Vec2& p : initial_positions) {
    dom.require_inside(p);
    const Vec2 rel = dom.to_relative(p)
                         .cwiseMax(inset_)
                         .cwiseMin(Vec2(dom.lengths() - inset_));
    rel_.push_back(rel);
    robots_.push_back({dom.from_relative(rel), Vec2::Zero(), id++});
  }
  accum_ = Eigen::VectorXd::Zero(modes_.count());
  target_ = modes_.uniform_density_coeffs();
}

void CoverageController::set_target(const Eigen::VectorXd& target_coeffs) {
  if (target_coeffs.size() != modes_.count()) {
    throw ShapeError("target coefficients: expected " +
                     std::to_string(modes_.count()) + " entries, got " +
                     std::to_string(target_coeffs.size()));
  }
  // The constant-mode coefficient of a unit-integral density is
  // 1/sqrt(area); anything else means the density was not normalized.
  const double integral = target_coeffs[0] * std::sqrt(modes_.domain().area());
  if (std::abs(integral - 1.0) > 1e-6) {
    throw NormalizationError(
        "target coefficients describe a density with integral " +
        std::to_string(integral) + ", expected 1");
  }
  target_ = target_coeffs;
}

Eigen::VectorXd CoverageController::residuals() const {
  return accum_ - (robot_count() * elapsed_) * target_;
}

Vec2 CoverageController::steering_from_rel(
    const Vec2& rel, const Eigen::VectorXd& weighted_residuals) const {
  const auto grad = modes_.basis_gradient_rel(rel);
  // Plain ascending-mode sum; kept explicit so the summation order is part
  // of the contract.
  Vec2 b = Vec2::Zero();
  for (int m = 0; m < modes_.count(); ++m) {
    b[0] += weighted_residuals[m] * grad(m, 0);
    b[1] += weighted_residuals[m] * grad(m, 1);
  }
  return b;
}

Vec2 CoverageController::steering_vector(int robot) const {
  const Eigen::VectorXd weighted =
      modes_.sobolev_weights().cwiseProduct(residuals());
  return steering_from_rel(rel_.at(robot), weighted);
}

Vec2 CoverageController::steering_at(const Vec2& position) const {
  modes_.domain().require_inside(position);
  const Eigen::VectorXd weighted =
      modes_.sobolev_weights().cwiseProduct(residuals());
  return steering_from_rel(modes_.domain().to_relative(position), weighted);
}

void CoverageController::step(RngStream& tie_break) {
  const Eigen::VectorXd weighted =
      modes_.sobolev_weights().cwiseProduct(residuals());

  std::vector<Vec2> controls(robots_.size());
  for (size_t i = 0; i < robots_.size(); ++i) {
    controls[i] =
        saturated_control(steering_from_rel(rel_[i], weighted), u_max_, tie_break);
  }

  const Domain& dom = modes_.domain();
  for (size_t i = 0; i < robots_.size(); ++i) {
    rel_[i] = Vec2(rel_[i] + controls[i] * dt_)
                  .cwiseMax(inset_)
                  .cwiseMin(Vec2(dom.lengths() - inset_));
    robots_[i].position = dom.from_relative(rel_[i]);
    robots_[i].last_control = controls[i];
  }

  for (const Vec2& rel : rel_) {
    accum_.noalias() += dt_ * modes_.basis_rel(rel);
  }
  elapsed_ += dt_;
  ++steps_;
}

Eigen::VectorXd CoverageController::coverage_coeffs() const {
  if (elapsed_ == 0.0) return Eigen::VectorXd::Zero(modes_.count());
  return accum_ / (robot_count() * elapsed_);
}

double CoverageController::metric() const {
  return ergodic_metric(modes_, coverage_coeffs(), target_);
}

}  // namespace ergodic
