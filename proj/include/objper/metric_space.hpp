#pragma once

#include <Eigen/Core>
#include <span>
#include <vector>

#include "objper/errors.hpp"
#include "objper/points.hpp"

namespace objper {

enum class SpaceKind { sphere, laplacian, wasserstein1d, euclidean };

const char* space_kind_name(SpaceKind kind);

/// Settings for the iterative Frechet-mean solvers. Closed-form spaces
/// ignore max_iterations; tolerance is the tangent-gradient stopping norm
/// on the sphere and the slack used by optimality assertions elsewhere.
struct SolverSettings {
  double tolerance = 1e-10;
  int max_iterations = 200;
};

/// Descriptor of a registered metric space: which geometry, which ambient
/// dimension, and how hard its solver tries.
class MetricSpace {
 public:
  static MetricSpace sphere(Eigen::Index ambient_dim, SolverSettings settings = {});
  static MetricSpace laplacian(Eigen::Index nodes, SolverSettings settings = {});
  static MetricSpace wasserstein1d(Eigen::Index grid_size, SolverSettings settings = {});
  static MetricSpace euclidean(Eigen::Index dim, SolverSettings settings = {});

  SpaceKind kind() const { return kind_; }
  /// Vector length, node count, or quantile-grid size depending on kind.
  Eigen::Index dimension() const { return dimension_; }
  const SolverSettings& settings() const { return settings_; }

  /// Throws DimensionError if the point does not belong to this space.
  void validate(const Point& p) const;

  bool operator==(const MetricSpace& other) const {
    return kind_ == other.kind_ && dimension_ == other.dimension_;
  }

 private:
  MetricSpace(SpaceKind kind, Eigen::Index dimension, SolverSettings settings);

  SpaceKind kind_;
  Eigen::Index dimension_;
  SolverSettings settings_;
};

/// Nonnegative weights summing to 1 (within 1e-12).
class WeightVector {
 public:
  static WeightVector uniform(Eigen::Index n);
  /// Normalizes a raw nonnegative vector. Throws ValidationError on negative
  /// entries and DegenerateWeightsError when the sum is not positive.
  static WeightVector normalized(const Eigen::VectorXd& raw);

  const Eigen::VectorXd& weights() const { return weights_; }
  Eigen::Index size() const { return weights_.size(); }

 private:
  explicit WeightVector(Eigen::VectorXd w) : weights_(std::move(w)) {}
  Eigen::VectorXd weights_;
};

/// Distance between two points of the space.
///   sphere:        arccos(a . b)
///   laplacian:     Frobenius norm of the difference
///   wasserstein1d: root mean square difference of quantile values
///   euclidean:     L2 norm of the difference
double distance(const MetricSpace& space, const Point& a, const Point& b);

/// Weighted Frechet objective sum_i w_i d^2(points[i], omega).
double frechet_objective(const MetricSpace& space, std::span<const Point> points,
                         const WeightVector& w, const Point& omega);

/// Weighted Frechet mean argmin_omega sum_i w_i d^2(points[i], omega).
/// Closed form everywhere except the sphere, which runs Riemannian gradient
/// descent with exact exponential/logarithm maps.
Point frechet_mean(const MetricSpace& space, std::span<const Point> points,
                   const WeightVector& w);

/// Square-root transform of a compositional vector (entries >= 0 summing
/// to 1 within 1e-9) onto the unit sphere.
SpherePoint sqrt_compositional_transform(const Eigen::VectorXd& composition);

/// L = D - A from a symmetric nonnegative adjacency matrix with zero diagonal.
GraphLaplacian laplacian_from_adjacency(const Eigen::MatrixXd& adjacency);

/// Sphere geometry helpers (exact maps of the unit sphere).
/// log_center(target): tangent vector at center pointing to target, with
/// length equal to the geodesic distance.
Eigen::VectorXd sphere_log(const Eigen::VectorXd& center, const Eigen::VectorXd& target);
/// exp_center(tangent): point reached from center along the tangent vector.
Eigen::VectorXd sphere_exp(const Eigen::VectorXd& center, const Eigen::VectorXd& tangent);

}  // namespace objper
