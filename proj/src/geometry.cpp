#include "ergodic/geometry.hpp"

#include <algorithm>
#include <sstream>

namespace ergodic {

Domain::Domain(const Vec2& lower, const Vec2& upper)
    : lower_(lower), upper_(upper), lengths_(upper - lower) {
  if (!(upper[0] > lower[0]) || !(upper[1] > lower[1])) {
    std::ostringstream msg;
    msg << "domain: upper must exceed lower component-wise, got lower=("
        << lower[0] << ", " << lower[1] << ") upper=(" << upper[0] << ", "
        << upper[1] << ")";
    throw ConfigError(msg.str());
  }
}

bool Domain::contains(const Vec2& x, double tol) const {
  return x[0] >= lower_[0] - tol && x[0] <= upper_[0] + tol &&
         x[1] >= lower_[1] - tol && x[1] <= upper_[1] + tol;
}

void Domain::require_inside(const Vec2& x) const {
  if (!contains(x)) {
    std::ostringstream msg;
    msg << "point (" << x[0] << ", " << x[1] << ") lies outside the domain ["
        << lower_[0] << ", " << upper_[0] << "] x [" << lower_[1] << ", "
        << upper_[1] << "]";
    throw DomainViolation(msg.str());
  }
}

Vec2 Domain::clip(const Vec2& x) const {
  return {std::clamp(x[0], lower_[0], upper_[0]),
          std::clamp(x[1], lower_[1], upper_[1])};
}

Vec2 Domain::from_relative(const Vec2& rel) const {
  return clip(Vec2(lower_ + rel));
}

Grid::Grid(const Domain& domain, int n1, int n2)
    : domain_(domain), n1_(n1), n2_(n2) {
  if (n1 < 1 || n2 < 1) {
    throw ConfigError("grid resolution must be positive, got " +
                      std::to_string(n1) + "x" + std::to_string(n2));
  }
  cell_area_ = (domain_.length(0) / n1_) * (domain_.length(1) / n2_);
}

Vec2 Grid::center(int flat_index) const {
  return center(flat_index % n1_, flat_index / n1_);
}

Vec2 Grid::center(int ix, int iy) const {
  const Vec2& lo = domain_.lower();
  return {lo[0] + (ix + 0.5) * domain_.length(0) / n1_,
          lo[1] + (iy + 0.5) * domain_.length(1) / n2_};
}

double Grid::integrate(const Eigen::VectorXd& cell_values) const {
  if (cell_values.size() != cell_count()) {
    throw ShapeError("grid integrate: expected " +
                     std::to_string(cell_count()) + " cell values, got " +
                     std::to_string(cell_values.size()));
  }
  return cell_values.sum() * cell_area_;
}

}  // namespace ergodic
