// Online field estimate: Gaussian bump lattice, discounted data moments with
// exponential forgetting, and a gradient adaptation law on the weights.
#pragma once

#include <vector>

#include <Eigen/Core>

#include "ergodic/geometry.hpp"
#include "ergodic/spectral.hpp"

namespace ergodic {

// Gaussian bumps on a uniform g x g lattice spanning the domain (boundary
// included), all sharing one width.
class RbfBasis {
 public:
  RbfBasis(const Domain& domain, int lattice_g, double sigma);

  const Domain& domain() const { return domain_; }
  int size() const { return static_cast<int>(centers_.size()); }
  double sigma() const { return sigma_; }
  const std::vector<Vec2>& centers() const { return centers_; }

  // Feature vector K(x); entries in (0, 1]. x must lie inside the domain.
  Eigen::VectorXd features(const Vec2& x) const;

  // Features at every cell center (cells x m), for grid snapshots.
  Eigen::MatrixXd features_table(const Grid& grid) const;

 private:
  Domain domain_;
  double sigma_;
  std::vector<Vec2> centers_;
};

struct Sample {
  Vec2 position{0.0, 0.0};
  double value = 0.0;
  int robot = 0;
};

class FieldEstimator {
 public:
  enum class Fusion { Centralized, PerRobot };

  FieldEstimator(RbfBasis basis, double alpha, double beta,
                 Fusion fusion = Fusion::Centralized, int n_robots = 1);

  const RbfBasis& basis() const { return basis_; }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  Fusion fusion() const { return fusion_; }
  int slot_count() const { return static_cast<int>(slots_.size()); }

  // One sampling event: discounts every slot by exp(-beta * dt_sample), then
  // adds dt_sample-weighted moments of the batch. Non-finite measurements are
  // rejected before any state changes.
  void ingest(const std::vector<Sample>& batch, double dt_sample);

  // One explicit Euler step of the adaptation law on each slot's weights.
  // Throws DivergenceError when a weight vector leaves a sane range.
  void adapt_step(double dt);

  // Estimate at a point; averages slot weights under per-robot fusion.
  double estimate(const Vec2& x) const;
  // Estimate at every cell of a precomputed features table.
  Eigen::VectorXd estimate_on(const Eigen::MatrixXd& features_table) const;

  Eigen::VectorXd mean_weights() const;

  struct TargetDensity {
    Eigen::VectorXd cell_density;  // strictly positive, unit integral
    Eigen::VectorXd coeffs;        // projection onto the mode set
    double integral_error = 0.0;   // |quadrature integral - 1| after rescale
  };
  // Clamp-and-floor normalization of the current estimate into a valid
  // density. Optional tables skip the per-cell evaluations.
  TargetDensity build_target_density(
      const Grid& grid, const ModeSet& modes,
      const Eigen::MatrixXd* features_table = nullptr,
      const GridBasisTable* basis_table = nullptr) const;

  // 1/2 sum over slots of |weights - true_weights|^2 (test instrumentation).
  double lyapunov(const Eigen::VectorXd& true_weights) const;

  const Eigen::MatrixXd& info_matrix(int slot = 0) const {
    return slots_.at(slot).info;
  }
  const Eigen::VectorXd& info_vector(int slot = 0) const {
    return slots_.at(slot).cross;
  }
  const Eigen::VectorXd& weights(int slot = 0) const {
    return slots_.at(slot).weights;
  }
  void set_weights(int slot, const Eigen::VectorXd& w);

 private:
  struct Slot {
    Eigen::MatrixXd info;     // discounted sum of feature outer products
    Eigen::VectorXd cross;    // discounted sum of feature * measurement
    Eigen::VectorXd weights;  // current estimate coefficients
  };

  RbfBasis basis_;
  double alpha_;
  double beta_;
  Fusion fusion_;
  std::vector<Slot> slots_;
};

}  // namespace ergodic
