// Search region and quadrature grid.
#pragma once

#include <Eigen/Core>

#include "ergodic/errors.hpp"

namespace ergodic {

using Vec2 = Eigen::Vector2d;

// Axis-aligned rectangle the robots operate in.
class Domain {
 public:
  Domain(const Vec2& lower, const Vec2& upper);

  const Vec2& lower() const { return lower_; }
  const Vec2& upper() const { return upper_; }
  const Vec2& lengths() const { return lengths_; }
  double length(int axis) const { return lengths_[axis]; }
  double area() const { return lengths_[0] * lengths_[1]; }

  bool contains(const Vec2& x, double tol = 1e-9) const;
  // Throws DomainViolation when x lies outside (beyond a small tolerance).
  void require_inside(const Vec2& x) const;

  Vec2 clip(const Vec2& x) const;

  // Offset from the lower corner. All basis evaluation happens in this frame,
  // so geometry-identical scenarios in shifted domains produce identical
  // control sequences.
  Vec2 to_relative(const Vec2& x) const { return x - lower_; }
  Vec2 from_relative(const Vec2& rel) const;

 private:
  Vec2 lower_;
  Vec2 upper_;
  Vec2 lengths_;
};

// Uniform cell grid; midpoint-rule quadrature support over the domain.
class Grid {
 public:
  Grid(const Domain& domain, int n1, int n2);

  const Domain& domain() const { return domain_; }
  int n1() const { return n1_; }
  int n2() const { return n2_; }
  int cell_count() const { return n1_ * n2_; }
  double cell_area() const { return cell_area_; }

  // Flat index iy * n1 + ix (row-major over y).
  Vec2 center(int flat_index) const;
  Vec2 center(int ix, int iy) const;

  double integrate(const Eigen::VectorXd& cell_values) const;

 private:
  Domain domain_;
  int n1_;
  int n2_;
  double cell_area_;
};

}  // namespace ergodic
