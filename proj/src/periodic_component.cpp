#include "objper/periodic_component.hpp"

#include <string>

#include "objper/numeric.hpp"
#include "objper/simulation.hpp"

namespace objper {

const Point& PeriodicComponent::at_time(long t) const {
  return values[static_cast<std::size_t>(phase_of(t, period) - 1)];
}

PeriodicComponent extract_component(const ObjectSeries& series, int theta_hat) {
  PeriodicComponent comp{theta_hat, phase_barycenters(series, theta_hat), series.space(),
                         PhaseAssignment::build(series.size(), theta_hat).counts};
  return comp;
}

PeriodicComponent extract_component(const ObjectSeries& series, const ScanResult& scan,
                                    int theta_hat) {
  if (scan.T != series.size())
    throw ValidationError("extract_component: scan was computed on a different series length");
  if (theta_hat < 1 || theta_hat > scan.theta_max)
    throw ValidationError("extract_component: theta_hat outside the scanned range");
  PeriodicComponent comp{theta_hat, scan.barycenters[static_cast<std::size_t>(theta_hat - 1)],
                         series.space(), PhaseAssignment::build(series.size(), theta_hat).counts};
  return comp;
}

double component_mse(const PeriodicComponent& estimated, std::span<const Point> truth) {
  if (truth.empty()) throw ValidationError("component_mse: empty truth sequence");
  std::vector<double> squared(truth.size());
  for (std::size_t i = 0; i < truth.size(); ++i) {
    double d = distance(estimated.space, estimated.at_time(static_cast<long>(i + 1)), truth[i]);
    squared[i] = d * d;
  }
  return sorted_sum(std::move(squared)) / static_cast<double>(truth.size());
}

double component_max_distance(const PeriodicComponent& estimated, std::span<const Point> truth) {
  if (truth.empty()) throw ValidationError("component_max_distance: empty truth sequence");
  double worst = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    double d = distance(estimated.space, estimated.at_time(static_cast<long>(i + 1)), truth[i]);
    if (d > worst) worst = d;
  }
  return worst;
}

Eigen::Vector3d dirichlet_mean_from_level(double level) {
  if (!(level > 0.0)) throw ValidationError("dirichlet mean needs a positive level");
  double denom = 2.0 * level + 1.0;
  return Eigen::Vector3d(level / denom, level / denom, 1.0 / denom);
}

Eigen::Vector3d true_component_dirichlet(long t) {
  return dirichlet_mean_from_level(l_schedule(t, 12));
}

}  // namespace objper
