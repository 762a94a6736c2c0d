// Ground-truth sensory fields: Gaussian mixtures, static or with means that
// travel along straight segments at an s-curve pace.
#pragma once

#include <vector>

#include "ergodic/geometry.hpp"
#include "ergodic/rng.hpp"

namespace ergodic {

struct GaussianComponent {
  double amplitude = 1.0;
  double sigma = 0.12;
  Vec2 mean{0.5, 0.5};        // static variant
  Vec2 mean_start{0.0, 0.0};  // moving variant
  Vec2 mean_end{0.0, 0.0};
};

// Normalized path progress in [0, 1] for normalized time s in [0, 1]:
// s^gamma / (s^gamma + (1-s)^gamma). Symmetric, fast near the endpoints and
// slow in the middle for gamma in (0, 1).
double scurve_progress(double s_norm, double gamma);

class GroundTruthField {
 public:
  enum class Kind { StaticMixture, MovingMixture };

  static GroundTruthField static_mixture(std::vector<GaussianComponent> components);
  static GroundTruthField moving_mixture(std::vector<GaussianComponent> components,
                                         double horizon, double gamma);

  Kind kind() const { return kind_; }
  double gamma() const { return gamma_; }
  double horizon() const { return horizon_; }
  const std::vector<GaussianComponent>& components() const { return components_; }

  // Mean of component j at time t (straight segment, s-curve progress).
  Vec2 component_mean(int j, double t) const;

  // Field value at x; the static variant ignores t.
  double value(const Domain& domain, const Vec2& x, double t) const;

  // Pointwise noisy measurement. noise_std = 0 reproduces value() exactly
  // and consumes no draws.
  double sample(const Domain& domain, const Vec2& x, double t, double noise_std,
                RngStream& rng) const;

 private:
  GroundTruthField() = default;

  Kind kind_ = Kind::StaticMixture;
  std::vector<GaussianComponent> components_;
  double horizon_ = 0.0;
  double gamma_ = 0.0;
};

}  // namespace ergodic
