#pragma once

#include <Eigen/Core>
#include <string>
#include <variant>

#include "objper/errors.hpp"

namespace objper {

/// Unit vector in R^p, p >= 2. Norm is validated to 1 within 1e-9.
class SpherePoint {
 public:
  explicit SpherePoint(Eigen::VectorXd coords);
  const Eigen::VectorXd& coords() const { return coords_; }
  Eigen::Index dimension() const { return coords_.size(); }

 private:
  Eigen::VectorXd coords_;
};

/// Point of R^p under the Euclidean metric.
class EuclideanPoint {
 public:
  explicit EuclideanPoint(Eigen::VectorXd coords);
  const Eigen::VectorXd& coords() const { return coords_; }
  Eigen::Index dimension() const { return coords_.size(); }

 private:
  Eigen::VectorXd coords_;
};

/// One-dimensional distribution represented by its quantile function sampled
/// at the mid-levels (k - 0.5)/M, k = 1..M. Values must be nondecreasing.
class QuantileFunction {
 public:
  explicit QuantileFunction(Eigen::VectorXd values);
  const Eigen::VectorXd& values() const { return values_; }
  Eigen::Index grid_size() const { return values_.size(); }

 private:
  Eigen::VectorXd values_;
};

/// Graph Laplacian L = D - A: symmetric, zero row sums, nonpositive
/// off-diagonal entries.
class GraphLaplacian {
 public:
  explicit GraphLaplacian(Eigen::MatrixXd matrix);
  const Eigen::MatrixXd& matrix() const { return matrix_; }
  Eigen::Index nodes() const { return matrix_.rows(); }

 private:
  Eigen::MatrixXd matrix_;
};

using Point = std::variant<SpherePoint, GraphLaplacian, QuantileFunction, EuclideanPoint>;

/// Ambient dimension descriptor: vector length, node count, or grid size.
Eigen::Index point_dimension(const Point& p);

/// Human-readable point-type name for diagnostics.
std::string point_type_name(const Point& p);

/// Exact structural equality (same alternative, same bits).
bool points_equal(const Point& a, const Point& b);

}  // namespace objper
