// Run configuration: the full parameter set of a simulation, its validation
// rules, and the flat INI config-file format used by the CLI.
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ergodic/estimator.hpp"
#include "ergodic/field.hpp"
#include "ergodic/geometry.hpp"

namespace ergodic {

enum class FieldKind { StaticGaussianMixture, MovingGaussianMixture };
enum class ControllerMode { Adaptive, UniformBaseline };

struct FieldComponentConfig {
  double amplitude = 1.0;
  double sigma = 0.12;
  Vec2 mean{0.5, 0.5};   // static variant
  Vec2 start{0.0, 0.0};  // moving variant
  Vec2 end{0.0, 0.0};
};

struct FieldConfig {
  FieldKind kind = FieldKind::StaticGaussianMixture;
  std::vector<FieldComponentConfig> components;
  double gamma = 0.2;      // moving variant only
  double noise_std = 0.0;  // sensor noise, 0 = noiseless
};

struct EstimatorConfig {
  int lattice_g = 9;
  double rbf_sigma = 0.15625;  // 1.25x the default lattice spacing
  double alpha = 1.0;
  double beta = 0.05;  // forgetting rate; defaults 0.05 static, 0.3 moving
  FieldEstimator::Fusion fusion = FieldEstimator::Fusion::Centralized;
};

struct ScenarioConfig {
  Vec2 domain_lower{0.0, 0.0};
  Vec2 domain_upper{1.0, 1.0};
  FieldConfig field;
  int n_robots = 4;
  double u_max = 1.0;
  double control_dt = 0.1;
  double sample_rate_hz = 2.0;
  double t_sim = 120.0;  // defaults 120 static, 150 moving
  int k_max = 10;
  EstimatorConfig estimator;
  ControllerMode mode = ControllerMode::Adaptive;
  std::uint64_t seed = 1;
  int metric_grid_n1 = 100;
  int metric_grid_n2 = 100;
  std::string out_dir = "out";

  // Harness/testing knob, not a config-file key: when false the run never
  // touches the estimator at all.
  bool estimator_enabled = true;

  Domain domain() const { return Domain(domain_lower, domain_upper); }
  GroundTruthField build_field() const;
  // Control steps per sampling event (validated integer ratio).
  int steps_per_sample() const;

  // Throws ConfigError naming the offending key.
  void validate() const;
};

// Built-in scenarios matching the documented defaults.
ScenarioConfig default_static_config();
ScenarioConfig default_moving_config(double gamma = 0.2);

// Parse the INI file at `path`. Overrides ("section.key" -> raw value) are
// applied on top of the file before validation; unknown keys are rejected.
ScenarioConfig parse_config(const std::string& path,
                            const std::map<std::string, std::string>& overrides = {});
ScenarioConfig parse_config_text(const std::string& text,
                                 const std::map<std::string, std::string>& overrides = {});

// Every key written explicitly; parse(serialize(c)) == c.
std::string serialize_config(const ScenarioConfig& config);

// The defaults table embedded in the README (kept in sync by a test).
std::string config_defaults_markdown();

bool operator==(const ScenarioConfig& a, const ScenarioConfig& b);

}  // namespace ergodic
