// Optional PNG rendering of run records: truth and estimate heatmaps plus a
// trajectory overlay with sample markers. Images are for inspection only;
// the CSVs stay authoritative, and rendering failures degrade to warnings.
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "ergodic/simulation.hpp"

namespace ergodic {

struct RenderResult {
  std::vector<std::string> files;     // relative names of written files
  std::vector<std::string> warnings;  // non-fatal failures
};

RenderResult render_images(const RunRecord& record,
                           const std::filesystem::path& dir);

}  // namespace ergodic
