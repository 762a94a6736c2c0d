// Cosine basis on the rectangle with zero normal derivative at the walls,
// mode weights for the coverage metric, and the coefficient operations the
// controller runs on.
//
// Modes are the multi-indices k = (k1, k2), 0 <= ki <= k_max, enumerated
// k1-major. Each basis function
//
//   f_k(x) = cos(k1 pi r1 / L1) cos(k2 pi r2 / L2) / h_k,   r = x - lower,
//
// carries h_k = sqrt(prod_i (Li if ki = 0 else Li/2)) so that its L2 norm
// over the domain is one. The per-mode weight is (1 + |k|^2)^(-3/2).
#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

#include "ergodic/geometry.hpp"

namespace ergodic {

struct ModeIndex {
  int k1 = 0;
  int k2 = 0;
};

class ModeSet {
 public:
  ModeSet(int k_max, const Domain& domain);

  int k_max() const { return k_max_; }
  int count() const { return static_cast<int>(modes_.size()); }
  const std::vector<ModeIndex>& modes() const { return modes_; }
  const Domain& domain() const { return domain_; }

  const Eigen::VectorXd& sobolev_weights() const { return weights_; }
  double normalization(int mode) const { return 1.0 / inv_norm_[mode]; }

  // f_k(x) for every mode; x must lie inside the domain.
  Eigen::VectorXd basis(const Vec2& x) const;
  // Gradients, one row per mode. The component normal to a boundary face is
  // exactly zero on that face.
  Eigen::Matrix<double, Eigen::Dynamic, 2> basis_gradient(const Vec2& x) const;

  // Same evaluations in domain-relative coordinates (rel = x - lower,
  // components in [0, Li]). The controller integrates in this frame.
  Eigen::VectorXd basis_rel(const Vec2& rel) const;
  Eigen::Matrix<double, Eigen::Dynamic, 2> basis_gradient_rel(const Vec2& rel) const;

  // Coefficients of the uniform probability density over the domain.
  Eigen::VectorXd uniform_density_coeffs() const;

 private:
  int k_max_;
  Domain domain_;
  std::vector<ModeIndex> modes_;
  Eigen::VectorXd weights_;
  Eigen::VectorXd inv_norm_;
};

// <density, f_k> by midpoint quadrature on the grid. The density must be
// non-negative with unit integral (within 1e-6).
Eigen::VectorXd density_coeffs(const ModeSet& modes, const Grid& grid,
                               const Eigen::VectorXd& density);

// Adds dt * sum_i f_k(x_i) to the accumulator, which therefore stores
// N * t * c_k for the trajectory coverage coefficients c_k.
void accumulate_trajectory(Eigen::VectorXd& accum,
                           std::span<const Vec2> positions, double dt,
                           const ModeSet& modes);

// Weighted squared coefficient distance sum_k Lambda_k (c_k - mu_k)^2.
double ergodic_metric(const ModeSet& modes, const Eigen::VectorXd& coverage,
                      const Eigen::VectorXd& target);

// Basis values at every cell center of a grid (cells x modes), for repeated
// projections of grid densities.
class GridBasisTable {
 public:
  GridBasisTable(const ModeSet& modes, const Grid& grid);

  const Eigen::MatrixXd& values() const { return values_; }
  // density_coeffs through the precomputed table.
  Eigen::VectorXd project(const Eigen::VectorXd& density) const;

 private:
  Eigen::MatrixXd values_;
  double cell_area_;
};

}  // namespace ergodic
