#pragma once

#include <vector>

#include "objper/period_scan.hpp"

namespace objper {

enum class CriterionKind { log_rss, rss };

const char* criterion_kind_name(CriterionKind kind);
CriterionKind criterion_kind_from_name(const std::string& name);

/// Exact piecewise-constant solution path lambda -> selected period.
/// Segment k covers [breakpoints[k], breakpoints[k+1]) (the last segment is
/// unbounded); theta_on_segment is strictly decreasing and ends at 1.
struct LambdaPath {
  std::vector<double> breakpoints;    // ascending, breakpoints[0] == 0
  std::vector<int> theta_on_segment;  // same length as breakpoints

  int theta_at(double lambda) const;
  std::size_t segments() const { return breakpoints.size(); }
};

/// The selected period is affine in lambda per candidate, so the path is the
/// lower envelope of the lines RSS(theta) + lambda * theta; ties go to the
/// smallest theta.
LambdaPath lambda_path(const ScanResult& scan);

/// Reference regularizer g(T) = log(T / theta_max) / (T / theta_max)^1.01.
double g_default(int T, int theta_max);

/// Data-driven regularizer: the penalty slope calibrated from the scan
/// itself, g = (1 - 1/T) * (fit(1) - fit(theta_breve)) / (theta_breve - 1),
/// where fit is the criterion's goodness-of-fit term (RSS/T or log(RSS/T))
/// and theta_breve is the smallest unpenalized argmin of the RSS; when
/// theta_breve = 1 the slope falls back to 1/T. This is the default used by
/// select(): unlike g_default it adapts to the noise scale of the data.
double g_adaptive(const ScanResult& scan, CriterionKind kind);

/// Information-criterion value for one fitted period:
/// log{RSS(theta_hat)/T} + theta_hat * g, or RSS(theta_hat)/T + theta_hat * g.
double information_criterion(const ScanResult& scan, int theta_hat, double g,
                             CriterionKind kind);

struct ICRecord {
  int theta_hat = 0;
  double rss_over_t = 0.0;
  double penalty = 0.0;        // theta_hat * g
  double value = 0.0;          // fit term + penalty
  double segment_begin = 0.0;  // lambda range selecting this theta_hat
  double segment_end = 0.0;    // +inf encoded as infinity()
};

struct ICReport {
  CriterionKind kind = CriterionKind::rss;
  std::vector<ICRecord> records;  // one per path segment, lambda ascending
  double selected_lambda = 0.0;
  int selected_theta = 0;
  double g_value = 0.0;
};

/// Evaluates the IC on every distinct period along the lambda path and picks
/// the minimizing segment; selected_lambda is a representative of that
/// segment (midpoint; left endpoint + 1 for the unbounded segment).
/// The two-argument form uses the data-driven regularizer g_adaptive.
ICReport select(const ScanResult& scan, CriterionKind kind);
ICReport select(const ScanResult& scan, CriterionKind kind, double g);

}  // namespace objper
