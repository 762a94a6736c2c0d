// Serialization of run records: metrics and trajectory CSVs, grid snapshots,
// config echo, and a manifest covering every emitted file.
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "ergodic/simulation.hpp"

namespace ergodic {

struct OutputBundle {
  std::filesystem::path dir;
  std::vector<std::string> files;  // relative paths, as listed in the manifest
  std::vector<std::string> notes;  // manifest comment lines
};

// Fixed-format %.9g, '.' decimal separator, no locale dependence.
std::string format_number(double v);

OutputBundle write_outputs(const RunRecord& record,
                           const std::filesystem::path& dir,
                           bool images = false);

OutputBundle write_comparison(const ComparisonRecord& record,
                              const std::filesystem::path& dir);

// Grid snapshot CSV: two comment header lines (resolution, extents) followed
// by n2 rows of n1 values, y rows from low to high.
void write_grid_csv(const std::filesystem::path& path,
                    const Eigen::VectorXd& values, int n1, int n2,
                    const Domain& domain);

}  // namespace ergodic
