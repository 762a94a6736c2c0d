#include "ergodic/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <png.h>

#include "ergodic/outputs.hpp"

namespace ergodic {

namespace fs = std::filesystem;

namespace {

struct Rgb {
  unsigned char r, g, b;
};

class Image {
 public:
  Image(int width, int height, Rgb fill = {0, 0, 0})
      : width_(width), height_(height), pixels_(width * height, fill) {}

  int width() const { return width_; }
  int height() const { return height_; }

  void set(int x, int y, Rgb c) {
    if (x < 0 || y < 0 || x >= width_ || y >= height_) return;
    pixels_[y * width_ + x] = c;
  }

  void disc(int cx, int cy, int radius, Rgb c) {
    for (int dy = -radius; dy <= radius; ++dy) {
      for (int dx = -radius; dx <= radius; ++dx) {
        if (dx * dx + dy * dy <= radius * radius) set(cx + dx, cy + dy, c);
      }
    }
  }

  void line(int x0, int y0, int x1, int y1, Rgb c) {
    // Bresenham
    const int dx = std::abs(x1 - x0), dy = -std::abs(y1 - y0);
    const int sx = x0 < x1 ? 1 : -1, sy = y0 < y1 ? 1 : -1;
    int err = dx + dy;
    while (true) {
      set(x0, y0, c);
      if (x0 == x1 && y0 == y1) break;
      const int e2 = 2 * err;
      if (e2 >= dy) { err += dy; x0 += sx; }
      if (e2 <= dx) { err += dx; y0 += sy; }
    }
  }

  const unsigned char* row(int y) const {
    return reinterpret_cast<const unsigned char*>(pixels_.data() + y * width_);
  }

 private:
  int width_;
  int height_;
  std::vector<Rgb> pixels_;
};

bool write_png(const fs::path& path, const Image& img, std::string& error) {
  FILE* fp = std::fopen(path.string().c_str(), "wb");
  if (!fp) {
    error = "cannot open " + path.string();
    return false;
  }
  png_structp png =
      png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info || setjmp(png_jmpbuf(png))) {
    if (png) png_destroy_write_struct(&png, info ? &info : nullptr);
    std::fclose(fp);
    error = "libpng failure for " + path.string();
    return false;
  }
  png_init_io(png, fp);
  png_set_IHDR(png, info, img.width(), img.height(), 8, PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int y = 0; y < img.height(); ++y) {
    png_write_row(png, const_cast<png_bytep>(img.row(y)));
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  std::fclose(fp);
  return true;
}

// Compact viridis-style ramp.
Rgb colormap(double v) {
  static const double stops[9][3] = {
      {0.267, 0.005, 0.329}, {0.283, 0.141, 0.458}, {0.254, 0.265, 0.530},
      {0.207, 0.372, 0.553}, {0.164, 0.471, 0.558}, {0.128, 0.567, 0.551},
      {0.135, 0.659, 0.518}, {0.478, 0.821, 0.318}, {0.993, 0.906, 0.144}};
  v = std::clamp(v, 0.0, 1.0);
  const double pos = v * 8.0;
  const int i = std::min(7, static_cast<int>(pos));
  const double f = pos - i;
  auto mix = [&](int ch) {
    return static_cast<unsigned char>(
        std::lround(255.0 * (stops[i][ch] + f * (stops[i + 1][ch] - stops[i][ch]))));
  };
  return {mix(0), mix(1), mix(2)};
}

// Heatmap with the grid's y axis pointing up (image row 0 = top).
Image heatmap(const Eigen::VectorXd& values, int n1, int n2, int scale,
              double vmin, double vmax) {
  Image img(n1 * scale, n2 * scale);
  const double span = vmax > vmin ? vmax - vmin : 1.0;
  for (int iy = 0; iy < n2; ++iy) {
    for (int ix = 0; ix < n1; ++ix) {
      const Rgb c = colormap((values[iy * n1 + ix] - vmin) / span);
      for (int py = 0; py < scale; ++py) {
        for (int px = 0; px < scale; ++px) {
          img.set(ix * scale + px, (n2 - 1 - iy) * scale + py, c);
        }
      }
    }
  }
  return img;
}

}  // namespace

RenderResult render_images(const RunRecord& record, const fs::path& dir) {
  RenderResult result;
  const int n1 = record.config.metric_grid_n1;
  const int n2 = record.config.metric_grid_n2;
  if (record.truth_grid.size() != static_cast<Eigen::Index>(n1) * n2 ||
      record.estimate_grid.size() != static_cast<Eigen::Index>(n1) * n2) {
    result.warnings.push_back("images: skipped (record has no grid snapshots)");
    return result;
  }
  const int scale = std::max(1, 400 / std::max(n1, n2));
  const Domain domain = record.config.domain();

  std::ostringstream scales;
  std::string error;

  auto emit_heatmap = [&](const std::string& name, const Eigen::VectorXd& grid) {
    const double vmin = grid.minCoeff();
    const double vmax = grid.maxCoeff();
    const Image img = heatmap(grid, n1, n2, scale, vmin, vmax);
    if (write_png(dir / name, img, error)) {
      result.files.push_back(name);
      scales << name << ',' << format_number(vmin) << ',' << format_number(vmax)
             << '\n';
    } else {
      result.warnings.push_back("images: " + error);
    }
  };

  emit_heatmap("truth_final.png", record.truth_grid);
  emit_heatmap("estimate_final.png", record.estimate_grid);

  // Trajectories over the truth field, sample instants marked in red.
  {
    const double vmin = record.truth_grid.minCoeff();
    const double vmax = record.truth_grid.maxCoeff();
    Image img = heatmap(record.truth_grid, n1, n2, scale, vmin, vmax);
    const int w = img.width(), h = img.height();
    auto to_px = [&](const Vec2& p) {
      const double sx = (p[0] - domain.lower()[0]) / domain.length(0);
      const double sy = (p[1] - domain.lower()[1]) / domain.length(1);
      return std::pair<int, int>(static_cast<int>(sx * (w - 1)),
                                 static_cast<int>((1.0 - sy) * (h - 1)));
    };
    static const Rgb robot_colors[] = {
        {255, 255, 255}, {255, 200, 80}, {140, 220, 255}, {255, 140, 255},
        {200, 255, 160}, {255, 255, 120}};
    std::vector<std::pair<int, int>> last(record.initial_positions.size());
    std::vector<bool> seen(record.initial_positions.size(), false);
    for (size_t i = 0; i < record.initial_positions.size(); ++i) {
      last[i] = to_px(record.initial_positions[i]);
      seen[i] = true;
    }
    std::vector<std::pair<int, int>> sample_px;
    for (const TrajectoryRow& row : record.trajectory) {
      const auto px = to_px(row.position);
      const size_t i = static_cast<size_t>(row.robot);
      if (i < last.size() && seen[i]) {
        img.line(last[i].first, last[i].second, px.first, px.second,
                 robot_colors[i % 6]);
      }
      if (i < last.size()) {
        last[i] = px;
        seen[i] = true;
      }
      if (row.sampled) sample_px.push_back(px);
    }
    for (const auto& [x, y] : sample_px) img.disc(x, y, 2, {220, 30, 30});
    if (write_png(dir / "trajectories.png", img, error)) {
      result.files.push_back("trajectories.png");
    } else {
      result.warnings.push_back("images: " + error);
    }
  }

  try {
    std::ofstream side(dir / "heatmap_scale.txt", std::ios::binary);
    side << scales.str();
    if (side) result.files.push_back("heatmap_scale.txt");
  } catch (...) {
    result.warnings.push_back("images: could not write heatmap_scale.txt");
  }
  return result;
}

}  // namespace ergodic
