#include "ergodic/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "ergodic/errors.hpp"

namespace ergodic {

namespace {

std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::string fmt_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Raw "section.key -> value" map read from INI text.
std::map<std::string, std::string> read_ini(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const size_t hash = line.find_first_of("#;");
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError("line " + std::to_string(lineno) +
                          ": unterminated section header");
      }
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) {
        throw ConfigError("line " + std::to_string(lineno) + ": empty section name");
      }
      continue;
    }
    const size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) +
                        ": expected key = value, got '" + line + "'");
    }
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) {
      throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    }
    if (section.empty()) {
      throw ConfigError("line " + std::to_string(lineno) + ": key '" + key +
                        "' outside any [section]");
    }
    const std::string path = section + "." + key;
    if (out.count(path)) {
      throw ConfigError("duplicate key: " + path);
    }
    out[path] = trim(line.substr(eq + 1));
  }
  return out;
}

// Pulls typed values out of the raw map, tracking consumption so leftovers
// can be rejected as unknown keys.
class KeyReader {
 public:
  explicit KeyReader(std::map<std::string, std::string> raw)
      : raw_(std::move(raw)) {}

  bool has(const std::string& path) const { return raw_.count(path) > 0; }

  std::string take_string(const std::string& path, const std::string& def) {
    auto it = raw_.find(path);
    if (it == raw_.end()) return def;
    consumed_.insert(path);
    return it->second;
  }

  double take_double(const std::string& path, double def) {
    auto it = raw_.find(path);
    if (it == raw_.end()) return def;
    consumed_.insert(path);
    return parse_double(path, it->second);
  }

  double require_double(const std::string& path) {
    auto it = raw_.find(path);
    if (it == raw_.end()) {
      throw ConfigError(path + ": required key is missing");
    }
    consumed_.insert(path);
    return parse_double(path, it->second);
  }

  long take_int(const std::string& path, long def) {
    auto it = raw_.find(path);
    if (it == raw_.end()) return def;
    consumed_.insert(path);
    try {
      size_t pos = 0;
      const long v = std::stol(it->second, &pos);
      if (pos != it->second.size()) throw std::invalid_argument("");
      return v;
    } catch (const std::exception&) {
      throw ConfigError(path + ": expected an integer, got '" + it->second + "'");
    }
  }

  std::uint64_t take_u64(const std::string& path, std::uint64_t def) {
    auto it = raw_.find(path);
    if (it == raw_.end()) return def;
    consumed_.insert(path);
    try {
      size_t pos = 0;
      const std::uint64_t v = std::stoull(it->second, &pos);
      if (pos != it->second.size()) throw std::invalid_argument("");
      return v;
    } catch (const std::exception&) {
      throw ConfigError(path + ": expected a non-negative integer, got '" +
                        it->second + "'");
    }
  }

  void finish() const {
    for (const auto& [path, value] : raw_) {
      if (!consumed_.count(path)) {
        throw ConfigError("unknown key: " + path);
      }
    }
  }

 private:
  static double parse_double(const std::string& path, const std::string& s) {
    try {
      size_t pos = 0;
      const double v = std::stod(s, &pos);
      if (pos != s.size()) throw std::invalid_argument("");
      return v;
    } catch (const std::exception&) {
      throw ConfigError(path + ": expected a number, got '" + s + "'");
    }
  }

  std::map<std::string, std::string> raw_;
  std::set<std::string> consumed_;
};

std::vector<FieldComponentConfig> default_components(FieldKind kind) {
  FieldComponentConfig a, b;
  a.mean = {0.25, 0.30};
  b.mean = {0.72, 0.68};
  // Moving default: the two bumps cross the domain in opposite directions
  // on separate horizontal tracks.
  a.start = {0.25, 0.30};
  a.end = {0.75, 0.30};
  b.start = {0.72, 0.68};
  b.end = {0.22, 0.68};
  (void)kind;
  return {a, b};
}

std::string mode_name(ControllerMode m) {
  return m == ControllerMode::Adaptive ? "adaptive" : "uniform-baseline";
}

std::string kind_name(FieldKind k) {
  return k == FieldKind::StaticGaussianMixture ? "static-gaussian-mixture"
                                               : "moving-gaussian-mixture";
}

std::string fusion_name(FieldEstimator::Fusion f) {
  return f == FieldEstimator::Fusion::Centralized ? "centralized" : "per-robot";
}

}  // namespace

GroundTruthField ScenarioConfig::build_field() const {
  std::vector<GaussianComponent> comps;
  for (const FieldComponentConfig& c : field.components) {
    GaussianComponent g;
    g.amplitude = c.amplitude;
    g.sigma = c.sigma;
    g.mean = c.mean;
    g.mean_start = c.start;
    g.mean_end = c.end;
    comps.push_back(g);
  }
  if (field.kind == FieldKind::StaticGaussianMixture) {
    return GroundTruthField::static_mixture(std::move(comps));
  }
  return GroundTruthField::moving_mixture(std::move(comps), t_sim, field.gamma);
}

int ScenarioConfig::steps_per_sample() const {
  const double ratio = 1.0 / (sample_rate_hz * control_dt);
  return static_cast<int>(std::lround(ratio));
}

void ScenarioConfig::validate() const {
  if (!(domain_upper[0] > domain_lower[0]) ||
      !(domain_upper[1] > domain_lower[1])) {
    throw ConfigError("domain: upper must exceed lower component-wise");
  }
  if (field.components.empty()) {
    throw ConfigError("field.components: need at least one component");
  }
  for (size_t j = 0; j < field.components.size(); ++j) {
    const auto& c = field.components[j];
    const std::string tag = "field component " + std::to_string(j + 1);
    if (!(c.amplitude > 0.0)) throw ConfigError(tag + ": amplitude must be > 0");
    if (!(c.sigma > 0.0)) throw ConfigError(tag + ": sigma must be > 0");
  }
  if (field.kind == FieldKind::MovingGaussianMixture) {
    if (!(field.gamma > 0.0) || !(field.gamma < 1.0)) {
      throw ConfigError("field.gamma: gamma must lie in (0,1), got " +
                        std::to_string(field.gamma));
    }
    if (!(t_sim > 0.0)) {
      throw ConfigError("run.t_sim: moving fields need a positive horizon");
    }
  }
  if (field.noise_std < 0.0) {
    throw ConfigError("field.noise_std: must be non-negative");
  }
  if (n_robots < 1) throw ConfigError("robots.count: need at least one robot");
  if (!(u_max > 0.0)) throw ConfigError("robots.u_max: must be positive");
  if (!(control_dt > 0.0)) throw ConfigError("controller.dt: must be positive");
  if (k_max < 0) throw ConfigError("controller.k_max: must be non-negative");
  if (!(sample_rate_hz > 0.0)) {
    throw ConfigError("run.sample_rate: must be positive");
  }
  if (t_sim < 0.0) throw ConfigError("run.t_sim: must be non-negative");
  const double ratio = 1.0 / (sample_rate_hz * control_dt);
  if (ratio < 1.0 - 1e-9 || std::abs(ratio - std::lround(ratio)) > 1e-9) {
    throw ConfigError(
        "run.sample_rate: sampling period must be an integer multiple of "
        "controller.dt (period/dt = " +
        std::to_string(ratio) + ")");
  }
  if (estimator.lattice_g < 2) {
    throw ConfigError("estimator.lattice_g: need at least 2 points per axis");
  }
  if (!(estimator.rbf_sigma > 0.0)) {
    throw ConfigError("estimator.rbf_sigma: must be positive");
  }
  if (!(estimator.alpha > 0.0)) {
    throw ConfigError("estimator.alpha: must be positive");
  }
  if (estimator.beta < 0.0) {
    throw ConfigError("estimator.beta: must be non-negative");
  }
  if (metric_grid_n1 < 2 || metric_grid_n2 < 2) {
    throw ConfigError("run.metric_grid: resolution must be at least 2x2");
  }
}

ScenarioConfig default_static_config() {
  ScenarioConfig c;
  c.field.kind = FieldKind::StaticGaussianMixture;
  c.field.components = default_components(c.field.kind);
  c.estimator.beta = 0.05;
  c.t_sim = 120.0;
  return c;
}

ScenarioConfig default_moving_config(double gamma) {
  ScenarioConfig c;
  c.field.kind = FieldKind::MovingGaussianMixture;
  c.field.components = default_components(c.field.kind);
  c.field.gamma = gamma;
  c.estimator.beta = 0.3;
  c.t_sim = 150.0;
  return c;
}

ScenarioConfig parse_config_text(
    const std::string& text,
    const std::map<std::string, std::string>& overrides) {
  auto raw = read_ini(text);
  for (const auto& [k, v] : overrides) raw[k] = v;
  KeyReader r(std::move(raw));

  ScenarioConfig c;
  c.domain_lower = {r.take_double("domain.lower_x", 0.0),
                    r.take_double("domain.lower_y", 0.0)};
  c.domain_upper = {r.take_double("domain.upper_x", 1.0),
                    r.take_double("domain.upper_y", 1.0)};

  const std::string kind = r.take_string("field.kind", "static-gaussian-mixture");
  if (kind == "static-gaussian-mixture") {
    c.field.kind = FieldKind::StaticGaussianMixture;
  } else if (kind == "moving-gaussian-mixture") {
    c.field.kind = FieldKind::MovingGaussianMixture;
  } else {
    throw ConfigError(
        "field.kind: expected static-gaussian-mixture or "
        "moving-gaussian-mixture, got '" +
        kind + "'");
  }
  const bool moving = c.field.kind == FieldKind::MovingGaussianMixture;

  const long n_comp = r.take_int("field.components", 2);
  if (n_comp < 1) throw ConfigError("field.components: need at least 1");
  const auto defaults = default_components(c.field.kind);
  c.field.components.clear();
  for (long j = 1; j <= n_comp; ++j) {
    const std::string suffix = "_" + std::to_string(j);
    FieldComponentConfig comp;
    comp.amplitude = r.take_double("field.amplitude" + suffix, 1.0);
    comp.sigma = r.take_double("field.sigma" + suffix, 0.12);
    const bool has_default = j <= static_cast<long>(defaults.size());
    if (moving) {
      if (has_default) {
        comp.start = defaults[j - 1].start;
        comp.end = defaults[j - 1].end;
      }
      if (has_default && !r.has("field.start_x" + suffix)) {
        // keep defaults
      } else {
        comp.start = {r.require_double("field.start_x" + suffix),
                      r.require_double("field.start_y" + suffix)};
        comp.end = {r.require_double("field.end_x" + suffix),
                    r.require_double("field.end_y" + suffix)};
      }
      comp.mean = comp.start;
    } else {
      if (has_default && !r.has("field.mean_x" + suffix)) {
        comp.mean = defaults[j - 1].mean;
      } else {
        comp.mean = {r.require_double("field.mean_x" + suffix),
                     r.require_double("field.mean_y" + suffix)};
      }
    }
    c.field.components.push_back(comp);
  }
  if (moving) {
    c.field.gamma = r.take_double("field.gamma", 0.2);
  }
  c.field.noise_std = r.take_double("field.noise_std", 0.0);

  c.n_robots = static_cast<int>(r.take_int("robots.count", 4));
  c.u_max = r.take_double("robots.u_max", 1.0);

  const std::string mode = r.take_string("controller.mode", "adaptive");
  if (mode == "adaptive") {
    c.mode = ControllerMode::Adaptive;
  } else if (mode == "uniform-baseline") {
    c.mode = ControllerMode::UniformBaseline;
  } else {
    throw ConfigError("controller.mode: expected adaptive or uniform-baseline, got '" +
                      mode + "'");
  }
  c.k_max = static_cast<int>(r.take_int("controller.k_max", 10));
  c.control_dt = r.take_double("controller.dt", 0.1);

  c.estimator.lattice_g = static_cast<int>(r.take_int("estimator.lattice_g", 9));
  c.estimator.rbf_sigma = r.take_double("estimator.rbf_sigma", 0.15625);
  c.estimator.alpha = r.take_double("estimator.alpha", 1.0);
  c.estimator.beta = r.take_double("estimator.beta", moving ? 0.3 : 0.05);
  const std::string fusion = r.take_string("estimator.fusion", "centralized");
  if (fusion == "centralized") {
    c.estimator.fusion = FieldEstimator::Fusion::Centralized;
  } else if (fusion == "per-robot") {
    c.estimator.fusion = FieldEstimator::Fusion::PerRobot;
  } else {
    throw ConfigError("estimator.fusion: expected centralized or per-robot, got '" +
                      fusion + "'");
  }

  c.t_sim = r.take_double("run.t_sim", moving ? 150.0 : 120.0);
  c.sample_rate_hz = r.take_double("run.sample_rate", 2.0);
  c.seed = r.take_u64("run.seed", 1);
  c.metric_grid_n1 = static_cast<int>(r.take_int("run.metric_grid_nx", 100));
  c.metric_grid_n2 = static_cast<int>(r.take_int("run.metric_grid_ny", 100));
  c.out_dir = r.take_string("run.out_dir", "out");

  r.finish();
  c.validate();
  return c;
}

ScenarioConfig parse_config(const std::string& path,
                            const std::map<std::string, std::string>& overrides) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file: " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_config_text(buf.str(), overrides);
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

std::string serialize_config(const ScenarioConfig& c) {
  std::ostringstream out;
  out << "[domain]\n";
  out << "lower_x = " << fmt_full(c.domain_lower[0]) << "\n";
  out << "lower_y = " << fmt_full(c.domain_lower[1]) << "\n";
  out << "upper_x = " << fmt_full(c.domain_upper[0]) << "\n";
  out << "upper_y = " << fmt_full(c.domain_upper[1]) << "\n";
  out << "\n[field]\n";
  out << "kind = " << kind_name(c.field.kind) << "\n";
  out << "components = " << c.field.components.size() << "\n";
  const bool moving = c.field.kind == FieldKind::MovingGaussianMixture;
  for (size_t j = 0; j < c.field.components.size(); ++j) {
    const auto& comp = c.field.components[j];
    const std::string s = "_" + std::to_string(j + 1);
    out << "amplitude" << s << " = " << fmt_full(comp.amplitude) << "\n";
    out << "sigma" << s << " = " << fmt_full(comp.sigma) << "\n";
    if (moving) {
      out << "start_x" << s << " = " << fmt_full(comp.start[0]) << "\n";
      out << "start_y" << s << " = " << fmt_full(comp.start[1]) << "\n";
      out << "end_x" << s << " = " << fmt_full(comp.end[0]) << "\n";
      out << "end_y" << s << " = " << fmt_full(comp.end[1]) << "\n";
    } else {
      out << "mean_x" << s << " = " << fmt_full(comp.mean[0]) << "\n";
      out << "mean_y" << s << " = " << fmt_full(comp.mean[1]) << "\n";
    }
  }
  if (moving) {
    out << "gamma = " << fmt_full(c.field.gamma) << "\n";
  }
  out << "noise_std = " << fmt_full(c.field.noise_std) << "\n";
  out << "\n[robots]\n";
  out << "count = " << c.n_robots << "\n";
  out << "u_max = " << fmt_full(c.u_max) << "\n";
  out << "\n[controller]\n";
  out << "mode = " << mode_name(c.mode) << "\n";
  out << "k_max = " << c.k_max << "\n";
  out << "dt = " << fmt_full(c.control_dt) << "\n";
  out << "\n[estimator]\n";
  out << "lattice_g = " << c.estimator.lattice_g << "\n";
  out << "rbf_sigma = " << fmt_full(c.estimator.rbf_sigma) << "\n";
  out << "alpha = " << fmt_full(c.estimator.alpha) << "\n";
  out << "beta = " << fmt_full(c.estimator.beta) << "\n";
  out << "fusion = " << fusion_name(c.estimator.fusion) << "\n";
  out << "\n[run]\n";
  out << "t_sim = " << fmt_full(c.t_sim) << "\n";
  out << "sample_rate = " << fmt_full(c.sample_rate_hz) << "\n";
  out << "seed = " << c.seed << "\n";
  out << "metric_grid_nx = " << c.metric_grid_n1 << "\n";
  out << "metric_grid_ny = " << c.metric_grid_n2 << "\n";
  out << "out_dir = " << c.out_dir << "\n";
  return out.str();
}

std::string config_defaults_markdown() {
  std::ostringstream out;
  out << "| Section | Key | Default | Meaning |\n";
  out << "|---|---|---|---|\n";
  out << "| domain | lower_x, lower_y | 0, 0 | lower corner of the search region (m) |\n";
  out << "| domain | upper_x, upper_y | 1, 1 | upper corner of the search region (m) |\n";
  out << "| field | kind | static-gaussian-mixture | or moving-gaussian-mixture |\n";
  out << "| field | components | 2 | number of Gaussian components |\n";
  out << "| field | amplitude_j | 1 | peak value of component j |\n";
  out << "| field | sigma_j | 0.12 | width of component j (m) |\n";
  out << "| field | mean_x_j, mean_y_j | (0.25, 0.3), (0.72, 0.68) | static means; defaults only for j = 1, 2 |\n";
  out << "| field | start_*_j, end_*_j | (0.25, 0.3) to (0.75, 0.3); (0.72, 0.68) to (0.22, 0.68) | moving endpoints; defaults only for j = 1, 2 |\n";
  out << "| field | gamma | 0.2 | s-curve exponent of the moving variant, in (0,1) |\n";
  out << "| field | noise_std | 0 | sensor noise standard deviation |\n";
  out << "| robots | count | 4 | number of robots |\n";
  out << "| robots | u_max | 1 | commanded speed (m/s) |\n";
  out << "| controller | mode | adaptive | or uniform-baseline |\n";
  out << "| controller | k_max | 10 | max mode index per axis (121 modes) |\n";
  out << "| controller | dt | 0.1 | control period (s) |\n";
  out << "| estimator | lattice_g | 9 | bump lattice points per axis (81 bumps) |\n";
  out << "| estimator | rbf_sigma | 0.15625 | bump width, 1.25x lattice spacing (m) |\n";
  out << "| estimator | alpha | 1 | adaptation learning rate (1/s) |\n";
  out << "| estimator | beta | 0.05 (static) / 0.3 (moving) | forgetting rate (1/s) |\n";
  out << "| estimator | fusion | centralized | or per-robot |\n";
  out << "| run | t_sim | 120 (static) / 150 (moving) | horizon (s) |\n";
  out << "| run | sample_rate | 2 | sampling frequency (Hz) |\n";
  out << "| run | seed | 1 | root RNG seed |\n";
  out << "| run | metric_grid_nx, metric_grid_ny | 100, 100 | metric/snapshot grid |\n";
  out << "| run | out_dir | out | output directory |\n";
  return out.str();
}

bool operator==(const ScenarioConfig& a, const ScenarioConfig& b) {
  return serialize_config(a) == serialize_config(b) &&
         a.estimator_enabled == b.estimator_enabled;
}

}  // namespace ergodic
