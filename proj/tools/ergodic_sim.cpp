// Command-line front end: run single scenarios, paired comparisons, and
// parameter sweeps from INI config files.
//
// Exit codes: 0 success, 2 configuration error, 3 estimator divergence,
// 4 I/O error.
#include <cstdint>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ergodic/errors.hpp"
#include "ergodic/outputs.hpp"
#include "ergodic/scenario.hpp"
#include "ergodic/simulation.hpp"

namespace {

using namespace ergodic;

std::map<std::string, std::string> cli_overrides(const std::string* seed,
                                                 const std::string* out) {
  std::map<std::string, std::string> overrides;
  if (seed && !seed->empty()) overrides["run.seed"] = *seed;
  if (out && !out->empty()) overrides["run.out_dir"] = *out;
  return overrides;
}

void print_run_summary(const RunRecord& record, const OutputBundle& bundle) {
  std::cout << "run: " << record.sample_events << " sample events, t_end = "
            << (record.metrics.empty() ? 0.0 : record.metrics.back().t) << " s\n";
  if (!record.metrics.empty()) {
    std::cout << "  final rmse_normalized = "
              << format_number(record.metrics.back().rmse_normalized)
              << ", final ergodic_metric = "
              << format_number(record.metrics.back().ergodic_metric) << "\n";
  }
  if (record.diverged) {
    std::cout << "  DIVERGED: " << record.diagnostic << "\n";
  }
  std::cout << "  outputs: " << bundle.dir.string() << " (" << bundle.files.size()
            << " files)\n";
}

int run_command(const std::string& config_path, const std::string& seed,
                const std::string& out, bool images) {
  const ScenarioConfig config =
      parse_config(config_path, cli_overrides(&seed, &out));
  const RunRecord record = run_scenario(config);
  const OutputBundle bundle = write_outputs(record, config.out_dir, images);
  print_run_summary(record, bundle);
  return record.diverged ? 3 : 0;
}

int compare_command(const std::string& config_a, const std::string& config_b,
                    const std::string& out) {
  const ScenarioConfig a = parse_config(config_a, cli_overrides(nullptr, &out));
  const ScenarioConfig b = parse_config(config_b, cli_overrides(nullptr, &out));
  const ComparisonRecord record = compare_runs(a, b);
  const OutputBundle bundle = write_comparison(record, a.out_dir);
  std::cout << "compare: final_rmse_ratio = "
            << format_number(record.summary.final_rmse_ratio)
            << ", final_quarter_frac_a_le_b = "
            << format_number(record.summary.final_quarter_frac) << "\n";
  std::cout << "  outputs: " << bundle.dir.string() << "\n";
  return (record.run_a.diverged || record.run_b.diverged) ? 3 : 0;
}

int sweep_command(const std::string& config_path, const std::string& param,
                  const std::string& values_csv, const std::string& out) {
  std::vector<std::string> values;
  std::string current;
  for (char ch : values_csv) {
    if (ch == ',') {
      if (!current.empty()) values.push_back(current);
      current.clear();
    } else {
      current += ch;
    }
  }
  if (!current.empty()) values.push_back(current);
  if (values.empty()) {
    throw ConfigError("sweep: --values needs a non-empty comma-separated list");
  }
  if (param.find('.') == std::string::npos) {
    throw ConfigError("sweep: --param must be a section.key path, got '" +
                      param + "'");
  }

  bool any_diverged = false;
  for (const std::string& value : values) {
    auto overrides = cli_overrides(nullptr, &out);
    overrides[param] = value;
    ScenarioConfig config = parse_config(config_path, overrides);
    config.out_dir =
        (std::filesystem::path(config.out_dir) / (param + "=" + value)).string();
    const RunRecord record = run_scenario(config);
    const OutputBundle bundle = write_outputs(record, config.out_dir, false);
    std::cout << param << " = " << value << ":\n";
    print_run_summary(record, bundle);
    any_diverged = any_diverged || record.diverged;
  }
  return any_diverged ? 3 : 0;
}

int validate_command(const std::string& config_path) {
  const ScenarioConfig config = parse_config(config_path);
  std::cout << serialize_config(config);
  std::cout << "OK\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Feedback-driven multi-robot ergodic coverage simulator"};
  app.require_subcommand(1);

  std::string config_path, config_a, config_b;
  std::string seed_override, out_override;
  std::string param, values;
  bool images = false;

  CLI::App* run = app.add_subcommand("run", "Execute one scenario");
  run->add_option("--config", config_path, "Scenario config file")->required();
  run->add_option("--seed", seed_override, "Root seed override");
  run->add_option("--out", out_override, "Output directory override");
  run->add_flag("--images", images, "Also render PNG heatmaps/trajectories");

  CLI::App* cmp = app.add_subcommand(
      "compare", "Run two configs (shared seed) and diff their RMSE series");
  cmp->add_option("--config-a", config_a, "First scenario config")->required();
  cmp->add_option("--config-b", config_b, "Second scenario config")->required();
  cmp->add_option("--out", out_override, "Output directory")->required();

  CLI::App* sweep = app.add_subcommand(
      "sweep", "Run one scenario for each value of a config key");
  sweep->add_option("--config", config_path, "Scenario config file")->required();
  sweep->add_option("--param", param, "Config key, e.g. field.gamma")->required();
  sweep->add_option("--values", values, "Comma-separated values")->required();
  sweep->add_option("--out", out_override, "Output directory override");

  CLI::App* validate =
      app.add_subcommand("validate-config", "Parse and echo a config file");
  validate->add_option("--config", config_path, "Scenario config file")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : 2;
  }

  try {
    if (run->parsed()) {
      return run_command(config_path, seed_override, out_override, images);
    }
    if (cmp->parsed()) {
      return compare_command(config_a, config_b, out_override);
    }
    if (sweep->parsed()) {
      return sweep_command(config_path, param, values, out_override);
    }
    return validate_command(config_path);
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 4;
  } catch (const DivergenceError& e) {
    std::cerr << "divergence: " << e.what() << "\n";
    return 3;
  } catch (const std::runtime_error& e) {
    // Config, domain, normalization, shape and data errors all indicate a
    // bad scenario specification.
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }
}
