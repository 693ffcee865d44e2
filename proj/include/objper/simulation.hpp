#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "objper/period_scan.hpp"
#include "objper/tuning.hpp"

namespace objper {

/// Periodic compositional family: Y_t ~ Dir(l_t * alpha, l_t * alpha, alpha),
/// square-root transformed onto the sphere. Smaller alpha means larger
/// element-wise variance. With noiseless set, the series is the exact mean
/// sequence (no sampling).
struct DirichletConfig {
  int T = 240;
  double alpha = 1.0;
  int theta0 = 12;
  std::uint64_t seed = 0;
  bool noiseless = false;
};

/// Periodic network family on p nodes: edge weights oscillate around a fixed
/// base pattern with period theta0, plus Gaussian noise, clipped at zero and
/// converted to graph Laplacians.
struct NetworkConfig {
  int T = 240;
  int theta0 = 12;
  int nodes = 8;
  double amplitude = 1.0;
  double noise = 0.3;
  std::uint64_t seed = 0;
};

/// Periodic distribution family: Y_t is the quantile function of
/// N(mu_t, sigma_t^2) on the mid-level grid, with mu_t a noisy sine and
/// sigma_t a cosine around 1 with the same period.
struct DistributionConfig {
  int T = 240;
  int theta0 = 12;
  int grid_size = 100;
  double amplitude = 1.0;
  double sigma_amplitude = 0.2;
  double noise = 0.25;
  std::uint64_t seed = 0;
};

/// Phase level of the compositional design: sin(0.1 + k (pi - 0.2) / 11)
/// with k = (t - 1) mod theta0. Defined for theta0 <= 12, where every level
/// is strictly inside (0, 1).
double l_schedule(long t, int theta0);

ObjectSeries generate_dirichlet(const DirichletConfig& config);
ObjectSeries generate_networks(const NetworkConfig& config);
ObjectSeries generate_distributions(const DistributionConfig& config);

/// Noise-free truth sequence over t = 1..T when one exists for the config:
/// always for dirichlet and distribution; for networks only when noise == 0.
std::optional<std::vector<Point>> truth_sequence(const DirichletConfig& config);
std::optional<std::vector<Point>> truth_sequence(const NetworkConfig& config);
std::optional<std::vector<Point>> truth_sequence(const DistributionConfig& config);

struct SummaryStats {
  double mean = 0.0;
  double median = 0.0;
};

struct MonteCarloReport {
  int replicates = 0;
  int theta0 = 0;
  int failures = 0;
  std::vector<int> theta_hats;       // successful replicates, in replicate order
  std::vector<double> mse_values;    // present when a truth sequence exists
  std::vector<double> max_distance_values;
  SummaryStats mse;
  SummaryStats max_distance;
  double total_seconds = 0.0;
  double mean_seconds_per_replicate = 0.0;

  /// Fraction of successful replicates with theta_hat == a.
  double p_equal(int a) const;
  /// Fraction of successful replicates with b <= theta_hat <= c.
  double p_between(int b, int c) const;
};

struct MonteCarloOptions {
  int replicates = 200;
  CriterionKind kind = CriterionKind::rss;
  std::optional<int> theta_max;           // default: default_theta_max(T)
  std::optional<double> g_override;       // default: g_default(T, theta_max)
  std::optional<SolverSettings> solver;   // default: per-space defaults
};

/// Full pipeline (generate -> scan -> select -> extract) per replicate, with
/// independent seed streams per replicate index; solver failures are counted
/// and skipped, never fatal.
MonteCarloReport run_monte_carlo(const DirichletConfig& config, const MonteCarloOptions& options);
MonteCarloReport run_monte_carlo(const NetworkConfig& config, const MonteCarloOptions& options);
MonteCarloReport run_monte_carlo(const DistributionConfig& config, const MonteCarloOptions& options);

MonteCarloReport run_monte_carlo(const DirichletConfig& config, int replicates, CriterionKind kind);
MonteCarloReport run_monte_carlo(const NetworkConfig& config, int replicates, CriterionKind kind);
MonteCarloReport run_monte_carlo(const DistributionConfig& config, int replicates, CriterionKind kind);

}  // namespace objper
