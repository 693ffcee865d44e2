#pragma once

#include <vector>

#include "objper/metric_space.hpp"
#include "objper/points.hpp"

namespace objper {

/// Time-ordered, equidistant sample of points in one registered space.
class ObjectSeries {
 public:
  ObjectSeries(MetricSpace space, std::vector<Point> points);

  const MetricSpace& space() const { return space_; }
  const std::vector<Point>& points() const { return points_; }
  int size() const { return static_cast<int>(points_.size()); }

 private:
  MetricSpace space_;
  std::vector<Point> points_;
};

/// Phase of time t within a cycle of length theta, in 1..theta:
/// r(t, theta) = t + theta - theta * floor((t + theta - 1) / theta).
int phase_of(long t, int theta);

/// The phase design for one candidate period.
struct PhaseAssignment {
  int theta = 0;
  std::vector<int> phases;  // phases[t-1] = phase_of(t, theta)
  std::vector<int> counts;  // counts[l-1] = #{t : phase_of(t, theta) = l}

  static PhaseAssignment build(int T, int theta);
};

/// RSS(theta) for theta = 1..theta_max plus the fitted phase barycenters,
/// kept so downstream stages reuse them without re-solving.
struct ScanResult {
  std::vector<double> rss;                      // rss[theta-1]
  std::vector<std::vector<Point>> barycenters;  // barycenters[theta-1][phase-1]
  int theta_max = 0;
  int T = 0;
};

/// Per-phase Frechet barycenters for a candidate period: entry l-1 is the
/// uniform-weight mean of the observations with phase l.
std::vector<Point> phase_barycenters(const ObjectSeries& series, int theta);

/// RSS(theta) = sum_t d^2(Y_t, barycenter of t's phase).
double rss(const ObjectSeries& series, int theta);

/// Fits every candidate period 1..theta_max; parallel over candidates.
ScanResult scan(const ObjectSeries& series, int theta_max);

/// Default candidate bound: 4 * sqrt(T) rounded to the nearest integer,
/// capped at T.
int default_theta_max(int T);

/// Penalized loss L(theta, lambda) = RSS(theta) + lambda * theta for all
/// candidates.
std::vector<double> penalized_loss(const ScanResult& scan, double lambda);

/// Smallest theta minimizing the penalized loss at this lambda.
int estimate_period(const ScanResult& scan, double lambda);

}  // namespace objper
