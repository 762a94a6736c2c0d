#include "ergodic/field.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ergodic {

double scurve_progress(double s_norm, double gamma) {
  if (!(gamma > 0.0) || !(gamma < 1.0)) {
    throw ConfigError("gamma must lie in (0,1), got " + std::to_string(gamma));
  }
  const double s = std::clamp(s_norm, 0.0, 1.0);
  if (s == 0.0) return 0.0;
  if (s == 1.0) return 1.0;
  const double a = std::pow(s, gamma);
  const double b = std::pow(1.0 - s, gamma);
  return a / (a + b);
}

GroundTruthField GroundTruthField::static_mixture(
    std::vector<GaussianComponent> components) {
  GroundTruthField f;
  f.kind_ = Kind::StaticMixture;
  f.components_ = std::move(components);
  for (const auto& c : f.components_) {
    if (!(c.sigma > 0.0) || !(c.amplitude > 0.0)) {
      throw ConfigError("field components need amplitude > 0 and sigma > 0");
    }
  }
  return f;
}

GroundTruthField GroundTruthField::moving_mixture(
    std::vector<GaussianComponent> components, double horizon, double gamma) {
  if (!(gamma > 0.0) || !(gamma < 1.0)) {
    throw ConfigError("gamma must lie in (0,1), got " + std::to_string(gamma));
  }
  if (!(horizon > 0.0)) {
    throw ConfigError("moving field needs a positive horizon");
  }
  GroundTruthField f;
  f.kind_ = Kind::MovingMixture;
  f.components_ = std::move(components);
  f.horizon_ = horizon;
  f.gamma_ = gamma;
  for (const auto& c : f.components_) {
    if (!(c.sigma > 0.0) || !(c.amplitude > 0.0)) {
      throw ConfigError("field components need amplitude > 0 and sigma > 0");
    }
  }
  return f;
}

Vec2 GroundTruthField::component_mean(int j, double t) const {
  const GaussianComponent& c = components_.at(j);
  if (kind_ == Kind::StaticMixture) return c.mean;
  const double progress = scurve_progress(t / horizon_, gamma_);
  return c.mean_start + progress * (c.mean_end - c.mean_start);
}

double GroundTruthField::value(const Domain& domain, const Vec2& x,
                               double t) const {
  domain.require_inside(x);
  double v = 0.0;
  for (int j = 0; j < static_cast<int>(components_.size()); ++j) {
    const GaussianComponent& c = components_[j];
    const Vec2 d = x - component_mean(j, t);
    v += c.amplitude * std::exp(-d.squaredNorm() / (2.0 * c.sigma * c.sigma));
  }
  return v;
}

double GroundTruthField::sample(const Domain& domain, const Vec2& x, double t,
                                double noise_std, RngStream& rng) const {
  const double truth = value(domain, x, t);
  if (noise_std == 0.0) return truth;
  return truth + noise_std * rng.gaussian();
}

}  // namespace ergodic
