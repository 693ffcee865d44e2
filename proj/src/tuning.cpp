#include "objper/tuning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace objper {

const char* criterion_kind_name(CriterionKind kind) {
  return kind == CriterionKind::log_rss ? "log-rss" : "rss";
}

CriterionKind criterion_kind_from_name(const std::string& name) {
  if (name == "log-rss" || name == "log_rss") return CriterionKind::log_rss;
  if (name == "rss") return CriterionKind::rss;
  throw ValidationError("unknown criterion kind: " + name);
}

int LambdaPath::theta_at(double lambda) const {
  if (lambda < 0.0) throw ValidationError("theta_at: lambda must be >= 0");
  auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), lambda);
  std::size_t seg = static_cast<std::size_t>(it - breakpoints.begin()) - 1;
  return theta_on_segment[seg];
}

LambdaPath lambda_path(const ScanResult& scan) {
  if (scan.rss.empty()) throw ValidationError("lambda_path: empty scan");

  // lambda = 0 winner: smallest theta attaining the minimum RSS
  std::size_t winner = 0;
  for (std::size_t i = 1; i < scan.rss.size(); ++i) {
    if (scan.rss[i] < scan.rss[winner]) winner = i;
  }

  // Lower convex hull of (theta, RSS(theta)) for theta = 1..winner+1.
  // Collinear middle points are dropped: at the shared breakpoint the
  // smallest theta wins the tie, so they are never selected.
  struct Pt {
    double x, y;
  };
  std::vector<Pt> hull;
  for (std::size_t i = 0; i <= winner; ++i) {
    Pt p{static_cast<double>(i + 1), scan.rss[i]};
    while (hull.size() >= 2) {
      const Pt& o = hull[hull.size() - 2];
      const Pt& a = hull[hull.size() - 1];
      double cross = (a.x - o.x) * (p.y - o.y) - (a.y - o.y) * (p.x - o.x);
      if (cross <= 0.0)
        hull.pop_back();
      else
        break;
    }
    hull.push_back(p);
  }

  LambdaPath path;
  path.breakpoints.push_back(0.0);
  path.theta_on_segment.push_back(static_cast<int>(hull.back().x));
  for (std::size_t k = hull.size(); k-- > 1;) {
    const Pt& right = hull[k];
    const Pt& left = hull[k - 1];
    double lambda = (left.y - right.y) / (right.x - left.x);
    path.breakpoints.push_back(lambda);
    path.theta_on_segment.push_back(static_cast<int>(left.x));
  }
  return path;
}

double g_default(int T, int theta_max) {
  if (theta_max < 1) throw ValidationError("g_default: theta_max must be >= 1");
  double ratio = static_cast<double>(T) / static_cast<double>(theta_max);
  if (!(ratio > 1.0))
    throw InvalidRegularizerError("g(T) requires T / theta_max > 1, got T = " +
                                  std::to_string(T) + ", theta_max = " +
                                  std::to_string(theta_max));
  return std::log(ratio) / std::pow(ratio, 1.01);
}

double g_adaptive(const ScanResult& scan, CriterionKind kind) {
  if (scan.rss.empty()) throw ValidationError("g_adaptive: empty scan");
  const double T = static_cast<double>(scan.T);
  std::size_t breve = 0;
  for (std::size_t i = 1; i < scan.rss.size(); ++i) {
    if (scan.rss[i] < scan.rss[breve]) breve = i;
  }
  double slope;
  if (breve == 0) {
    slope = 1.0 / T;  // beta_1 = 2
  } else {
    auto fit = [&](std::size_t idx) {
      double r = scan.rss[idx] / T;
      if (kind == CriterionKind::log_rss) {
        if (scan.rss[idx] == 0.0)
          throw ZeroRSSError(
              "RSS is exactly zero along the scan; the log-RSS criterion is undefined, use the "
              "rss criterion instead");
        return std::log(r);
      }
      return r;
    };
    slope = (fit(0) - fit(breve)) / static_cast<double>(breve);
  }
  // parameters are priced just below the average fit gain per candidate, so
  // a period explaining the whole drop is selected over theta = 1 while the
  // marginal gains of its overfit multiples stay under water
  return (1.0 - 1.0 / T) * slope;
}

double information_criterion(const ScanResult& scan, int theta_hat, double g,
                             CriterionKind kind) {
  if (theta_hat < 1 || theta_hat > scan.theta_max)
    throw ValidationError("information_criterion: theta_hat outside 1..theta_max");
  if (!(g > 0.0)) throw ValidationError("information_criterion: g must be positive");
  double rss_value = scan.rss[static_cast<std::size_t>(theta_hat - 1)];
  double fit_term;
  if (kind == CriterionKind::log_rss) {
    if (rss_value == 0.0)
      throw ZeroRSSError("RSS(theta_hat) is exactly zero; the log-RSS criterion is undefined, "
                         "use the rss criterion instead");
    fit_term = std::log(rss_value / static_cast<double>(scan.T));
  } else {
    fit_term = rss_value / static_cast<double>(scan.T);
  }
  return fit_term + static_cast<double>(theta_hat) * g;
}

ICReport select(const ScanResult& scan, CriterionKind kind) {
  return select(scan, kind, g_adaptive(scan, kind));
}

ICReport select(const ScanResult& scan, CriterionKind kind, double g) {
  LambdaPath path = lambda_path(scan);

  ICReport report;
  report.kind = kind;
  report.g_value = g;
  report.records.reserve(path.segments());

  for (std::size_t k = 0; k < path.segments(); ++k) {
    ICRecord rec;
    rec.theta_hat = path.theta_on_segment[k];
    rec.rss_over_t =
        scan.rss[static_cast<std::size_t>(rec.theta_hat - 1)] / static_cast<double>(scan.T);
    rec.penalty = static_cast<double>(rec.theta_hat) * g;
    rec.value = information_criterion(scan, rec.theta_hat, g, kind);
    rec.segment_begin = path.breakpoints[k];
    rec.segment_end = (k + 1 < path.segments()) ? path.breakpoints[k + 1]
                                                : std::numeric_limits<double>::infinity();
    report.records.push_back(rec);
  }

  std::size_t best = 0;
  for (std::size_t k = 1; k < report.records.size(); ++k) {
    const ICRecord& cur = report.records[k];
    const ICRecord& inc = report.records[best];
    if (cur.value < inc.value ||
        (cur.value == inc.value && cur.theta_hat < inc.theta_hat))
      best = k;
  }
  const ICRecord& win = report.records[best];
  report.selected_theta = win.theta_hat;
  report.selected_lambda = std::isinf(win.segment_end)
                               ? win.segment_begin + 1.0
                               : 0.5 * (win.segment_begin + win.segment_end);
  return report;
}

}  // namespace objper
