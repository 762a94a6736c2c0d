// Closed-loop spectral coverage controller: residual coefficients, steering
// direction per robot, saturated feedback, and first-order integration with
// wall clipping.
#pragma once

#include <vector>

#include <Eigen/Core>

#include "ergodic/rng.hpp"
#include "ergodic/spectral.hpp"

namespace ergodic {

struct RobotState {
  Vec2 position{0.0, 0.0};      // world frame
  Vec2 last_control{0.0, 0.0};  // m/s
  int id = 0;
};

// Saturated steering law: -u_max * B / |B|, with a seeded random direction
// when |B| falls below eps (the law is undefined at B = 0).
Vec2 saturated_control(const Vec2& steering, double u_max, RngStream& tie_break,
                       double eps = 1e-9);

class CoverageController {
 public:
  CoverageController(ModeSet modes, double u_max, double dt,
                     const std::vector<Vec2>& initial_positions);

  int robot_count() const { return static_cast<int>(robots_.size()); }
  const std::vector<RobotState>& robots() const { return robots_; }
  const ModeSet& modes() const { return modes_; }
  double elapsed() const { return elapsed_; }
  double dt() const { return dt_; }
  double u_max() const { return u_max_; }

  // Replace the target coefficients. Past coverage is kept; residuals are
  // re-evaluated against the new target from now on. Coefficients must
  // describe a unit-integral density.
  void set_target(const Eigen::VectorXd& target_coeffs);
  const Eigen::VectorXd& target_coeffs() const { return target_; }

  // S_k = accumulator_k - N * t * mu_k, against the current target.
  Eigen::VectorXd residuals() const;

  // B_i = sum_k Lambda_k S_k grad f_k(x_i) for the stored robot.
  Vec2 steering_vector(int robot) const;
  // Same sum evaluated at an arbitrary position (testing hook).
  Vec2 steering_at(const Vec2& position) const;

  // One control period: every steering vector is computed from the same
  // pre-step residuals, then all robots move, then the trajectory
  // accumulator absorbs the post-step positions and time advances.
  void step(RngStream& tie_break);

  const Eigen::VectorXd& accumulator() const { return accum_; }
  // c_k = accumulator / (N t); zeros before the first step.
  Eigen::VectorXd coverage_coeffs() const;
  double metric() const;

 private:
  Vec2 steering_from_rel(const Vec2& rel, const Eigen::VectorXd& weighted_residuals) const;

  ModeSet modes_;
  double u_max_;
  double dt_;
  Vec2 inset_{0.0, 0.0};  // wall standoff, 1e-4 of each axis length
  std::vector<RobotState> robots_;
  std::vector<Vec2> rel_;  // authoritative positions, offset from lower corner
  Eigen::VectorXd accum_;
  Eigen::VectorXd target_;
  double elapsed_ = 0.0;
  long steps_ = 0;
};

}  // namespace ergodic
