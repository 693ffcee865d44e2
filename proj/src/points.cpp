#include "objper/points.hpp"

#include <cmath>

namespace objper {

namespace {

void require_finite(const Eigen::VectorXd& v, const char* what) {
  if (!v.allFinite()) throw InvalidPointError(std::string(what) + ": non-finite coordinate");
}

}  // namespace

SpherePoint::SpherePoint(Eigen::VectorXd coords) : coords_(std::move(coords)) {
  require_finite(coords_, "SpherePoint");
  if (coords_.size() < 2) throw InvalidPointError("SpherePoint: dimension must be >= 2");
  double norm = coords_.norm();
  if (std::abs(norm - 1.0) > 1e-9)
    throw InvalidPointError("SpherePoint: norm " + std::to_string(norm) + " is not 1 within 1e-9");
}

EuclideanPoint::EuclideanPoint(Eigen::VectorXd coords) : coords_(std::move(coords)) {
  require_finite(coords_, "EuclideanPoint");
  if (coords_.size() < 1) throw InvalidPointError("EuclideanPoint: empty coordinate vector");
}

QuantileFunction::QuantileFunction(Eigen::VectorXd values) : values_(std::move(values)) {
  require_finite(values_, "QuantileFunction");
  if (values_.size() < 2) throw InvalidPointError("QuantileFunction: grid size must be >= 2");
  for (Eigen::Index k = 0; k + 1 < values_.size(); ++k) {
    if (values_[k] > values_[k + 1])
      throw InvalidPointError("QuantileFunction: values decrease at index " + std::to_string(k));
  }
}

GraphLaplacian::GraphLaplacian(Eigen::MatrixXd matrix) : matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols())
    throw InvalidPointError("GraphLaplacian: matrix is not square");
  if (matrix_.rows() < 2) throw InvalidPointError("GraphLaplacian: needs at least 2 nodes");
  if (!matrix_.allFinite()) throw InvalidPointError("GraphLaplacian: non-finite entry");

  const double scale = std::max(1.0, matrix_.cwiseAbs().maxCoeff());
  const double tol = 1e-9 * scale;
  for (Eigen::Index i = 0; i < matrix_.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < matrix_.cols(); ++j) {
      if (std::abs(matrix_(i, j) - matrix_(j, i)) > tol)
        throw InvalidPointError("GraphLaplacian: asymmetric at (" + std::to_string(i) + "," +
                                std::to_string(j) + ")");
      if (matrix_(i, j) > 1e-12 * scale)
        throw InvalidPointError("GraphLaplacian: positive off-diagonal at (" + std::to_string(i) +
                                "," + std::to_string(j) + ")");
    }
    if (std::abs(matrix_.row(i).sum()) > tol)
      throw InvalidPointError("GraphLaplacian: row " + std::to_string(i) + " does not sum to 0");
  }
}

Eigen::Index point_dimension(const Point& p) {
  return std::visit(
      [](const auto& v) -> Eigen::Index {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, SpherePoint> || std::is_same_v<T, EuclideanPoint>)
          return v.dimension();
        else if constexpr (std::is_same_v<T, QuantileFunction>)
          return v.grid_size();
        else
          return v.nodes();
      },
      p);
}

std::string point_type_name(const Point& p) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        (void)v;
        if constexpr (std::is_same_v<T, SpherePoint>) return "sphere";
        else if constexpr (std::is_same_v<T, EuclideanPoint>) return "euclidean";
        else if constexpr (std::is_same_v<T, QuantileFunction>) return "wasserstein1d";
        else return "laplacian";
      },
      p);
}

bool points_equal(const Point& a, const Point& b) {
  if (a.index() != b.index()) return false;
  if (const auto* sa = std::get_if<SpherePoint>(&a))
    return sa->coords() == std::get<SpherePoint>(b).coords();
  if (const auto* ea = std::get_if<EuclideanPoint>(&a))
    return ea->coords() == std::get<EuclideanPoint>(b).coords();
  if (const auto* qa = std::get_if<QuantileFunction>(&a))
    return qa->values() == std::get<QuantileFunction>(b).values();
  return std::get<GraphLaplacian>(a).matrix() == std::get<GraphLaplacian>(b).matrix();
}

}  // namespace objper
