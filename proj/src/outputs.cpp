#include "ergodic/outputs.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "ergodic/errors.hpp"
#include "ergodic/render.hpp"

namespace ergodic {

namespace fs = std::filesystem;

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

namespace {

void write_text_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot open for writing: " + path.string());
  }
  out << content;
  if (!out) {
    throw IoError("write failed: " + path.string());
  }
}

std::string metrics_csv(const RunRecord& record) {
  std::ostringstream out;
  out << "t,rmse_normalized,ergodic_metric,lyapunov_v\n";
  for (const MetricsRow& row : record.metrics) {
    out << format_number(row.t) << ',' << format_number(row.rmse_normalized)
        << ',' << format_number(row.ergodic_metric) << ',';
    if (row.lyapunov) out << format_number(*row.lyapunov);
    out << '\n';
  }
  return out.str();
}

std::string trajectories_csv(const RunRecord& record) {
  std::ostringstream out;
  out << "t,robot_id,x,y,ux,uy,sampled\n";
  for (const TrajectoryRow& row : record.trajectory) {
    out << format_number(row.t) << ',' << row.robot << ','
        << format_number(row.position[0]) << ',' << format_number(row.position[1])
        << ',' << format_number(row.control[0]) << ','
        << format_number(row.control[1]) << ',' << (row.sampled ? 1 : 0) << '\n';
  }
  return out.str();
}

std::string grid_csv(const Eigen::VectorXd& values, int n1, int n2,
                     const Domain& domain) {
  if (values.size() != static_cast<Eigen::Index>(n1) * n2) {
    throw ShapeError("grid snapshot: value count does not match resolution");
  }
  std::ostringstream out;
  out << "# resolution," << n1 << ',' << n2 << '\n';
  out << "# extents," << format_number(domain.lower()[0]) << ','
      << format_number(domain.lower()[1]) << ',' << format_number(domain.upper()[0])
      << ',' << format_number(domain.upper()[1]) << '\n';
  for (int iy = 0; iy < n2; ++iy) {
    for (int ix = 0; ix < n1; ++ix) {
      if (ix > 0) out << ',';
      out << format_number(values[iy * n1 + ix]);
    }
    out << '\n';
  }
  return out.str();
}

void write_manifest(const fs::path& dir, const std::vector<std::string>& files,
                    const std::vector<std::string>& notes) {
  std::ostringstream out;
  std::vector<std::string> sorted = files;
  std::sort(sorted.begin(), sorted.end());
  for (const std::string& f : sorted) out << f << '\n';
  for (const std::string& n : notes) out << "# " << n << '\n';
  write_text_file(dir / "manifest.txt", out.str());
}

}  // namespace

void write_grid_csv(const fs::path& path, const Eigen::VectorXd& values, int n1,
                    int n2, const Domain& domain) {
  write_text_file(path, grid_csv(values, n1, n2, domain));
}

OutputBundle write_outputs(const RunRecord& record, const fs::path& dir,
                           bool images) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw IoError("cannot create output directory " + dir.string() + ": " +
                  ec.message());
  }

  OutputBundle bundle;
  bundle.dir = dir;

  write_text_file(dir / "config_echo.ini", serialize_config(record.config));
  bundle.files.push_back("config_echo.ini");

  write_text_file(dir / "metrics.csv", metrics_csv(record));
  bundle.files.push_back("metrics.csv");

  write_text_file(dir / "trajectories.csv", trajectories_csv(record));
  bundle.files.push_back("trajectories.csv");

  const Domain domain = record.config.domain();
  if (record.estimate_grid.size() > 0) {
    write_grid_csv(dir / "estimate_grid.csv", record.estimate_grid,
                   record.config.metric_grid_n1, record.config.metric_grid_n2,
                   domain);
    bundle.files.push_back("estimate_grid.csv");
  }
  if (record.truth_grid.size() > 0) {
    write_grid_csv(dir / "truth_grid.csv", record.truth_grid,
                   record.config.metric_grid_n1, record.config.metric_grid_n2,
                   domain);
    bundle.files.push_back("truth_grid.csv");
  }

  if (record.diverged) {
    write_text_file(dir / "divergence.txt", record.diagnostic + "\n");
    bundle.files.push_back("divergence.txt");
  }

  if (images) {
    const auto rendered = render_images(record, dir);
    for (const std::string& f : rendered.files) bundle.files.push_back(f);
    for (const std::string& w : rendered.warnings) bundle.notes.push_back(w);
  } else {
    bundle.notes.push_back("images: skipped");
  }

  bundle.files.push_back("manifest.txt");
  write_manifest(dir, bundle.files, bundle.notes);
  return bundle;
}

OutputBundle write_comparison(const ComparisonRecord& record, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw IoError("cannot create output directory " + dir.string() + ": " +
                  ec.message());
  }

  OutputBundle bundle;
  bundle.dir = dir;

  const OutputBundle a = write_outputs(record.run_a, dir / "a", false);
  const OutputBundle b = write_outputs(record.run_b, dir / "b", false);
  for (const std::string& f : a.files) bundle.files.push_back("a/" + f);
  for (const std::string& f : b.files) bundle.files.push_back("b/" + f);

  std::ostringstream cmp;
  cmp << "t,rmse_a,rmse_b,delta\n";
  for (size_t i = 0; i < record.t.size(); ++i) {
    cmp << format_number(record.t[i]) << ',' << format_number(record.rmse_a[i])
        << ',' << format_number(record.rmse_b[i]) << ','
        << format_number(record.delta[i]) << '\n';
  }
  write_text_file(dir / "comparison.csv", cmp.str());
  bundle.files.push_back("comparison.csv");

  std::ostringstream summary;
  summary << "final_rmse_ratio=" << format_number(record.summary.final_rmse_ratio)
          << '\n'
          << "final_quarter_frac_a_le_b="
          << format_number(record.summary.final_quarter_frac) << '\n';
  write_text_file(dir / "summary.txt", summary.str());
  bundle.files.push_back("summary.txt");

  bundle.files.push_back("manifest.txt");
  write_manifest(dir, bundle.files, bundle.notes);
  return bundle;
}

}  // namespace ergodic
