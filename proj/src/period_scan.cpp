#include "objper/period_scan.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "objper/numeric.hpp"
#include "objper/parallel.hpp"

namespace objper {

ObjectSeries::ObjectSeries(MetricSpace space, std::vector<Point> points)
    : space_(std::move(space)), points_(std::move(points)) {
  if (points_.size() < 2) throw ValidationError("an ObjectSeries needs at least 2 observations");
  for (const Point& p : points_) space_.validate(p);
}

int phase_of(long t, int theta) {
  if (t < 1) throw ValidationError("phase_of: t must be >= 1");
  if (theta < 1) throw ValidationError("phase_of: theta must be >= 1");
  long th = theta;
  return static_cast<int>(t + th - th * ((t + th - 1) / th));
}

PhaseAssignment PhaseAssignment::build(int T, int theta) {
  if (T < 1 || theta < 1) throw ValidationError("PhaseAssignment needs T >= 1 and theta >= 1");
  PhaseAssignment out;
  out.theta = theta;
  out.phases.resize(static_cast<std::size_t>(T));
  out.counts.assign(static_cast<std::size_t>(theta), 0);
  for (int t = 1; t <= T; ++t) {
    int l = phase_of(t, theta);
    out.phases[static_cast<std::size_t>(t - 1)] = l;
    ++out.counts[static_cast<std::size_t>(l - 1)];
  }
  return out;
}

namespace {

struct CandidateFit {
  std::vector<Point> barycenters;
  double rss = 0.0;
};

CandidateFit fit_candidate(const ObjectSeries& series, int theta) {
  const int T = series.size();
  PhaseAssignment assign = PhaseAssignment::build(T, theta);

  CandidateFit fit;
  fit.barycenters.reserve(static_cast<std::size_t>(theta));
  for (int l = 1; l <= theta; ++l) {
    std::vector<Point> group;
    group.reserve(static_cast<std::size_t>(assign.counts[static_cast<std::size_t>(l - 1)]));
    for (int t = 1; t <= T; ++t) {
      if (assign.phases[static_cast<std::size_t>(t - 1)] == l)
        group.push_back(series.points()[static_cast<std::size_t>(t - 1)]);
    }
    try {
      fit.barycenters.push_back(frechet_mean(
          series.space(), group, WeightVector::uniform(static_cast<Eigen::Index>(group.size()))));
    } catch (const ConvergenceError& e) {
      ConvergenceError tagged("candidate theta " + std::to_string(theta) + ", phase " +
                                  std::to_string(l) + ": " + e.what(),
                              e.last_iterate, e.objective, e.gradient_norm);
      tagged.theta = theta;
      tagged.phase = l;
      throw tagged;
    }
  }

  std::vector<double> squared(static_cast<std::size_t>(T));
  for (int t = 1; t <= T; ++t) {
    int l = assign.phases[static_cast<std::size_t>(t - 1)];
    double d = distance(series.space(), series.points()[static_cast<std::size_t>(t - 1)],
                        fit.barycenters[static_cast<std::size_t>(l - 1)]);
    squared[static_cast<std::size_t>(t - 1)] = d * d;
  }
  fit.rss = sorted_sum(std::move(squared));
  return fit;
}

void check_theta_range(const ObjectSeries& series, int theta, const char* who) {
  if (theta < 1 || theta > series.size())
    throw ValidationError(std::string(who) + ": theta must lie in 1..T (T = " +
                          std::to_string(series.size()) + ", got " + std::to_string(theta) + ")");
}

}  // namespace

std::vector<Point> phase_barycenters(const ObjectSeries& series, int theta) {
  check_theta_range(series, theta, "phase_barycenters");
  return fit_candidate(series, theta).barycenters;
}

double rss(const ObjectSeries& series, int theta) {
  check_theta_range(series, theta, "rss");
  return fit_candidate(series, theta).rss;
}

ScanResult scan(const ObjectSeries& series, int theta_max) {
  check_theta_range(series, theta_max, "scan");
  ScanResult result;
  result.theta_max = theta_max;
  result.T = series.size();
  result.rss.resize(static_cast<std::size_t>(theta_max));
  result.barycenters.resize(static_cast<std::size_t>(theta_max));

  parallel_for(theta_max, [&](int idx) {
    CandidateFit fit = fit_candidate(series, idx + 1);
    result.rss[static_cast<std::size_t>(idx)] = fit.rss;
    result.barycenters[static_cast<std::size_t>(idx)] = std::move(fit.barycenters);
  });
  return result;
}

int default_theta_max(int T) {
  if (T < 1) throw ValidationError("default_theta_max: T must be >= 1");
  long candidate = std::lround(4.0 * std::sqrt(static_cast<double>(T)));
  if (candidate < 1) candidate = 1;
  if (candidate > T) candidate = T;
  return static_cast<int>(candidate);
}

std::vector<double> penalized_loss(const ScanResult& scan, double lambda) {
  if (lambda < 0.0) throw ValidationError("penalized_loss: lambda must be >= 0");
  std::vector<double> loss(scan.rss.size());
  for (std::size_t i = 0; i < scan.rss.size(); ++i)
    loss[i] = scan.rss[i] + lambda * static_cast<double>(i + 1);
  return loss;
}

int estimate_period(const ScanResult& scan, double lambda) {
  std::vector<double> loss = penalized_loss(scan, lambda);
  std::size_t best = 0;
  for (std::size_t i = 1; i < loss.size(); ++i) {
    if (loss[i] < loss[best]) best = i;  // ties keep the smallest theta
  }
  return static_cast<int>(best + 1);
}

}  // namespace objper
