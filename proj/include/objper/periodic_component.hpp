#pragma once

#include <span>
#include <vector>

#include "objper/period_scan.hpp"

namespace objper {

/// Estimated periodic sequence m(1..period), extended periodically:
/// the value at time t is values[phase_of(t, period) - 1] (the identical
/// stored point, not a copy).
struct PeriodicComponent {
  int period = 0;
  std::vector<Point> values;
  MetricSpace space;
  std::vector<int> phase_counts;

  const Point& at_time(long t) const;
};

/// Fits the component at the given period (the caller passes the estimated
/// period, or the true one when it is known).
PeriodicComponent extract_component(const ObjectSeries& series, int theta_hat);

/// Same, reusing the barycenters already fitted by a scan.
PeriodicComponent extract_component(const ObjectSeries& series, const ScanResult& scan,
                                    int theta_hat);

/// Mean squared distance between the periodic extension and a full-length
/// truth sequence: T^{-1} sum_t d^2(component at t, truth[t-1]).
double component_mse(const PeriodicComponent& estimated, std::span<const Point> truth);

/// Largest distance between the periodic extension and the truth sequence.
double component_max_distance(const PeriodicComponent& estimated, std::span<const Point> truth);

/// Population mean of the periodic Dirichlet design at time t: the simplex
/// vector (l/(2l+1), l/(2l+1), 1/(2l+1)) with l the phase level at t for
/// the 12-phase schedule.
Eigen::Vector3d true_component_dirichlet(long t);

/// The same mean as a function of the level directly.
Eigen::Vector3d dirichlet_mean_from_level(double level);

}  // namespace objper
