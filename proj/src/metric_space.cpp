#include "objper/metric_space.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "objper/numeric.hpp"

namespace objper {

const char* space_kind_name(SpaceKind kind) {
  switch (kind) {
    case SpaceKind::sphere: return "sphere";
    case SpaceKind::laplacian: return "laplacian";
    case SpaceKind::wasserstein1d: return "wasserstein1d";
    case SpaceKind::euclidean: return "euclidean";
  }
  return "unknown";
}

MetricSpace::MetricSpace(SpaceKind kind, Eigen::Index dimension, SolverSettings settings)
    : kind_(kind), dimension_(dimension), settings_(settings) {
  if (!(settings_.tolerance > 0.0)) throw ValidationError("solver tolerance must be > 0");
  if (settings_.max_iterations < 1) throw ValidationError("max_iterations must be >= 1");
  Eigen::Index min_dim = (kind == SpaceKind::euclidean) ? 1 : 2;
  if (dimension_ < min_dim)
    throw ValidationError(std::string("dimension too small for ") + space_kind_name(kind));
}

MetricSpace MetricSpace::sphere(Eigen::Index ambient_dim, SolverSettings settings) {
  return MetricSpace(SpaceKind::sphere, ambient_dim, settings);
}
MetricSpace MetricSpace::laplacian(Eigen::Index nodes, SolverSettings settings) {
  return MetricSpace(SpaceKind::laplacian, nodes, settings);
}
MetricSpace MetricSpace::wasserstein1d(Eigen::Index grid_size, SolverSettings settings) {
  return MetricSpace(SpaceKind::wasserstein1d, grid_size, settings);
}
MetricSpace MetricSpace::euclidean(Eigen::Index dim, SolverSettings settings) {
  return MetricSpace(SpaceKind::euclidean, dim, settings);
}

void MetricSpace::validate(const Point& p) const {
  bool kind_ok = false;
  switch (kind_) {
    case SpaceKind::sphere: kind_ok = std::holds_alternative<SpherePoint>(p); break;
    case SpaceKind::laplacian: kind_ok = std::holds_alternative<GraphLaplacian>(p); break;
    case SpaceKind::wasserstein1d: kind_ok = std::holds_alternative<QuantileFunction>(p); break;
    case SpaceKind::euclidean: kind_ok = std::holds_alternative<EuclideanPoint>(p); break;
  }
  if (!kind_ok)
    throw DimensionError(std::string("point of type ") + point_type_name(p) +
                         " does not belong to a " + space_kind_name(kind_) + " space");
  if (point_dimension(p) != dimension_)
    throw DimensionError(std::string(space_kind_name(kind_)) + " space expects dimension " +
                         std::to_string(dimension_) + ", got " +
                         std::to_string(point_dimension(p)));
}

WeightVector WeightVector::uniform(Eigen::Index n) {
  if (n < 1) throw ValidationError("weight vector needs at least one entry");
  return WeightVector(Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n)));
}

WeightVector WeightVector::normalized(const Eigen::VectorXd& raw) {
  if (raw.size() < 1) throw ValidationError("weight vector needs at least one entry");
  if (!raw.allFinite()) throw ValidationError("weight vector has non-finite entries");
  for (Eigen::Index i = 0; i < raw.size(); ++i) {
    if (raw[i] < 0.0) throw ValidationError("negative weight at index " + std::to_string(i));
  }
  double sum = raw.sum();
  if (!(sum > 0.0)) throw DegenerateWeightsError("weights sum to zero");
  return WeightVector(raw / sum);
}

namespace {

// Slack allowed on sphere dot products before declaring the inputs invalid.
constexpr double kDotSlack = 1e-9;

// Geodesic distance from raw unit vectors. Near dot = +-1 the arccos form
// loses ~sqrt(eps) absolute accuracy, so chord-based arcsine is used there.
double sphere_arc(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  double dot = a.dot(b);
  if (std::abs(dot) > 1.0 + kDotSlack)
    throw InvalidPointError("sphere dot product " + std::to_string(dot) + " outside [-1, 1]");
  if (dot > 0.9) {
    double half_chord = 0.5 * (a - b).norm();
    return 2.0 * std::asin(std::min(1.0, half_chord));
  }
  if (dot < -0.9) {
    double half_chord = 0.5 * (a + b).norm();
    return std::numbers::pi - 2.0 * std::asin(std::min(1.0, half_chord));
  }
  return std::acos(std::clamp(dot, -1.0, 1.0));
}

double sphere_distance(const SpherePoint& a, const SpherePoint& b) {
  if (a.dimension() != b.dimension())
    throw DimensionError("sphere points of different dimensions");
  return sphere_arc(a.coords(), b.coords());
}

void check_same_dimension(const Point& a, const Point& b) {
  if (a.index() != b.index())
    throw DimensionError("points of different types: " + point_type_name(a) + " vs " +
                         point_type_name(b));
  if (point_dimension(a) != point_dimension(b))
    throw DimensionError("points of different dimensions: " +
                         std::to_string(point_dimension(a)) + " vs " +
                         std::to_string(point_dimension(b)));
}

double distance_impl(const Point& a, const Point& b) {
  check_same_dimension(a, b);
  if (const auto* sa = std::get_if<SpherePoint>(&a))
    return sphere_distance(*sa, std::get<SpherePoint>(b));
  if (const auto* la = std::get_if<GraphLaplacian>(&a))
    return (la->matrix() - std::get<GraphLaplacian>(b).matrix()).norm();
  if (const auto* qa = std::get_if<QuantileFunction>(&a)) {
    const auto& va = qa->values();
    const auto& vb = std::get<QuantileFunction>(b).values();
    return std::sqrt((va - vb).squaredNorm() / static_cast<double>(va.size()));
  }
  return (std::get<EuclideanPoint>(a).coords() - std::get<EuclideanPoint>(b).coords()).norm();
}

// Weighted per-coordinate average with permutation-invariant accumulation.
Eigen::VectorXd weighted_mean_vector(std::span<const Eigen::VectorXd> rows,
                                     const Eigen::VectorXd& w) {
  Eigen::VectorXd out(rows[0].size());
  std::vector<double> terms(rows.size());
  for (Eigen::Index j = 0; j < out.size(); ++j) {
    for (std::size_t i = 0; i < rows.size(); ++i) terms[i] = w[static_cast<Eigen::Index>(i)] * rows[i][j];
    out[j] = sorted_sum(terms);
  }
  return out;
}

Eigen::VectorXd extract_vector(const Point& p) {
  if (const auto* s = std::get_if<SpherePoint>(&p)) return s->coords();
  if (const auto* e = std::get_if<EuclideanPoint>(&p)) return e->coords();
  if (const auto* q = std::get_if<QuantileFunction>(&p)) return q->values();
  const auto& m = std::get<GraphLaplacian>(p).matrix();
  return Eigen::Map<const Eigen::VectorXd>(m.data(), m.size());
}

SpherePoint sphere_frechet_mean(std::span<const Point> points, const Eigen::VectorXd& w,
                                const SolverSettings& settings) {
  const Eigen::Index dim = point_dimension(points[0]);
  const std::size_t n = points.size();

  Eigen::VectorXd extrinsic = Eigen::VectorXd::Zero(dim);
  for (std::size_t i = 0; i < n; ++i)
    extrinsic += w[static_cast<Eigen::Index>(i)] * std::get<SpherePoint>(points[i]).coords();
  double extr_norm = extrinsic.norm();
  if (extr_norm < 1e-12)
    throw DegenerateConfigurationError(
        "extrinsic mean at the origin: sphere Frechet mean not identifiable");
  Eigen::VectorXd omega = extrinsic / extr_norm;

  auto objective = [&](const Eigen::VectorXd& candidate) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double d = sphere_arc(candidate, std::get<SpherePoint>(points[i]).coords());
      acc += w[static_cast<Eigen::Index>(i)] * d * d;
    }
    return acc;
  };
  auto tangent_gradient = [&](const Eigen::VectorXd& at) {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(dim);
    for (std::size_t i = 0; i < n; ++i)
      g += w[static_cast<Eigen::Index>(i)] * sphere_log(at, std::get<SpherePoint>(points[i]).coords());
    return g;
  };

  double obj = objective(omega);
  double grad_norm = 0.0;
  for (int iter = 0; iter < settings.max_iterations; ++iter) {
    Eigen::VectorXd g = tangent_gradient(omega);
    grad_norm = g.norm();
    if (grad_norm < settings.tolerance) return SpherePoint(omega);

    // step 1 along the tangent mean, halved on non-decrease; near the
    // optimum the true decrease (~ |g|^2) sits below the objective's
    // floating-point resolution, so non-decrease is judged with ulp slack
    const double slack = 8.0 * std::numeric_limits<double>::epsilon() * (1.0 + obj);
    double step = 1.0;
    bool moved = false;
    for (int halving = 0; halving < 60; ++halving) {
      Eigen::VectorXd trial = sphere_exp(omega, step * g);
      double trial_obj = objective(trial);
      if (trial_obj <= obj + slack) {
        omega = trial;
        obj = std::min(obj, trial_obj);
        moved = true;
        break;
      }
      step *= 0.5;
    }
    if (!moved) break;  // at the numerical floor
  }

  Eigen::VectorXd g = tangent_gradient(omega);
  grad_norm = g.norm();
  // Within the documented optimality slack counts as converged; the gradient
  // cannot always reach the nominal tolerance at the arithmetic floor.
  if (grad_norm < 10.0 * settings.tolerance) return SpherePoint(omega);
  throw ConvergenceError("sphere Frechet mean did not reach tolerance " +
                             std::to_string(settings.tolerance) + " (gradient norm " +
                             std::to_string(grad_norm) + ")",
                         omega, obj, grad_norm);
}

}  // namespace

double distance(const MetricSpace& space, const Point& a, const Point& b) {
  space.validate(a);
  space.validate(b);
  return distance_impl(a, b);
}

double frechet_objective(const MetricSpace& space, std::span<const Point> points,
                         const WeightVector& w, const Point& omega) {
  if (points.empty()) throw ValidationError("frechet_objective needs at least one point");
  if (w.size() != static_cast<Eigen::Index>(points.size()))
    throw DimensionError("weight vector length does not match point count");
  space.validate(omega);
  std::vector<double> terms(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    space.validate(points[i]);
    double d = distance_impl(points[i], omega);
    terms[i] = w.weights()[static_cast<Eigen::Index>(i)] * d * d;
  }
  return sorted_sum(std::move(terms));
}

Point frechet_mean(const MetricSpace& space, std::span<const Point> points,
                   const WeightVector& w) {
  if (points.empty()) throw ValidationError("frechet_mean needs at least one point");
  if (w.size() != static_cast<Eigen::Index>(points.size()))
    throw DimensionError("weight vector length does not match point count");
  for (const Point& p : points) space.validate(p);

  // identical inputs have themselves as the exact mean in any space
  bool all_equal = true;
  for (std::size_t i = 1; i < points.size() && all_equal; ++i)
    all_equal = points_equal(points[0], points[i]);
  if (all_equal) return points[0];

  const Eigen::VectorXd& weights = w.weights();
  switch (space.kind()) {
    case SpaceKind::sphere:
      return sphere_frechet_mean(points, weights, space.settings());
    case SpaceKind::euclidean:
    case SpaceKind::wasserstein1d:
    case SpaceKind::laplacian: {
      std::vector<Eigen::VectorXd> rows;
      rows.reserve(points.size());
      for (const Point& p : points) rows.push_back(extract_vector(p));
      Eigen::VectorXd mean = weighted_mean_vector(rows, weights);
      if (space.kind() == SpaceKind::euclidean) return EuclideanPoint(mean);
      if (space.kind() == SpaceKind::wasserstein1d) return QuantileFunction(mean);
      Eigen::MatrixXd m = Eigen::Map<const Eigen::MatrixXd>(mean.data(), space.dimension(),
                                                            space.dimension());
      return GraphLaplacian(m);
    }
  }
  throw ValidationError("unknown space kind");
}

SpherePoint sqrt_compositional_transform(const Eigen::VectorXd& composition) {
  if (composition.size() < 2)
    throw InvalidCompositionError("composition needs at least two parts");
  if (!composition.allFinite())
    throw InvalidCompositionError("composition has non-finite entries");
  for (Eigen::Index i = 0; i < composition.size(); ++i) {
    if (composition[i] < 0.0)
      throw InvalidCompositionError("negative composition entry at index " + std::to_string(i));
  }
  double sum = composition.sum();
  if (std::abs(sum - 1.0) > 1e-9)
    throw InvalidCompositionError("composition sums to " + std::to_string(sum) +
                                  ", expected 1 within 1e-9");
  return SpherePoint(composition.cwiseSqrt());
}

GraphLaplacian laplacian_from_adjacency(const Eigen::MatrixXd& adjacency) {
  if (adjacency.rows() != adjacency.cols())
    throw InvalidAdjacencyError("adjacency matrix is not square");
  if (!adjacency.allFinite()) throw InvalidAdjacencyError("adjacency has non-finite entries");
  const double scale = std::max(1.0, adjacency.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < adjacency.rows(); ++i) {
    if (std::abs(adjacency(i, i)) > 1e-9 * scale)
      throw InvalidAdjacencyError("adjacency diagonal must be zero (row " + std::to_string(i) +
                                  ")");
    for (Eigen::Index j = i + 1; j < adjacency.cols(); ++j) {
      if (std::abs(adjacency(i, j) - adjacency(j, i)) > 1e-9 * scale)
        throw InvalidAdjacencyError("adjacency asymmetric at (" + std::to_string(i) + "," +
                                    std::to_string(j) + ")");
      if (adjacency(i, j) < -1e-12 * scale)
        throw InvalidAdjacencyError("negative adjacency weight at (" + std::to_string(i) + "," +
                                    std::to_string(j) + ")");
    }
  }

  Eigen::MatrixXd sym = 0.5 * (adjacency + adjacency.transpose());
  sym.diagonal().setZero();
  Eigen::MatrixXd lap = -sym;
  for (Eigen::Index i = 0; i < sym.rows(); ++i) lap(i, i) = sym.row(i).sum();
  return GraphLaplacian(std::move(lap));
}

Eigen::VectorXd sphere_log(const Eigen::VectorXd& center, const Eigen::VectorXd& target) {
  double dot = std::clamp(center.dot(target), -1.0, 1.0);
  if (dot <= -1.0 + 1e-12)
    throw DegenerateConfigurationError("sphere log map undefined for antipodal points");
  Eigen::VectorXd v = target - dot * center;
  double vn = v.norm();
  if (vn < 1e-15) return Eigen::VectorXd::Zero(center.size());
  return v * (sphere_arc(center, target) / vn);
}

Eigen::VectorXd sphere_exp(const Eigen::VectorXd& center, const Eigen::VectorXd& tangent) {
  double n = tangent.norm();
  if (n < 1e-300) return center;
  Eigen::VectorXd out = std::cos(n) * center + (std::sin(n) / n) * tangent;
  out.normalize();  // keep the unit-norm invariant across long iterations
  return out;
}

}  // namespace objper
