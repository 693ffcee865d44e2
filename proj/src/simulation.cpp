#include "objper/simulation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <string>

#include "objper/parallel.hpp"
#include "objper/periodic_component.hpp"
#include "objper/rng.hpp"

namespace objper {

namespace {

// Phase offset inside the seasonal sine; keeps the per-phase levels distinct
// for every period length.
constexpr double kSeasonPhase = 0.6366197723675814;

void check_common(int T, int theta0) {
  if (T < 2) throw ValidationError("generator config: T must be >= 2");
  if (theta0 < 1) throw ValidationError("generator config: theta0 must be >= 1");
  if (T < theta0) throw ValidationError("generator config: T must be >= theta0");
}

double season(long t, int theta0, double phase_offset) {
  double angle = 2.0 * std::numbers::pi * static_cast<double>(phase_of(t, theta0)) /
                 static_cast<double>(theta0);
  return std::sin(angle + phase_offset);
}

Eigen::MatrixXd network_adjacency(const NetworkConfig& config, long t, Rng* rng) {
  const int p = config.nodes;
  double s = season(t, config.theta0, kSeasonPhase);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(p, p);
  for (int i = 0; i < p; ++i) {
    for (int j = i + 1; j < p; ++j) {
      double base = 0.5 + 0.5 * static_cast<double>((i + j) % 3);
      double pattern = (1.0 + static_cast<double>((i + 2 * j) % 5)) / 5.0;
      double w = base + config.amplitude * s * pattern;
      if (rng != nullptr) w += config.noise * rng->normal();
      w = std::max(0.0, w);
      a(i, j) = w;
      a(j, i) = w;
    }
  }
  return a;
}

Eigen::VectorXd distribution_quantiles(const DistributionConfig& config, long t, Rng* rng,
                                       const Eigen::VectorXd& z_grid) {
  double angle = 2.0 * std::numbers::pi * static_cast<double>(phase_of(t, config.theta0)) /
                 static_cast<double>(config.theta0);
  double mu = config.amplitude * std::sin(angle);
  if (rng != nullptr) mu += config.noise * rng->normal();
  double sigma = 1.0 + config.sigma_amplitude * std::cos(angle);
  return (mu + (sigma * z_grid).array()).matrix();
}

Eigen::VectorXd midlevel_normal_grid(int grid_size) {
  Eigen::VectorXd z(grid_size);
  for (int k = 1; k <= grid_size; ++k)
    z[k - 1] = normal_quantile((static_cast<double>(k) - 0.5) / static_cast<double>(grid_size));
  return z;
}

}  // namespace

double l_schedule(long t, int theta0) {
  if (t < 1) throw ValidationError("l_schedule: t must be >= 1");
  if (theta0 < 1 || theta0 > 12)
    throw ValidationError("l_schedule: the phase schedule is defined for theta0 in 1..12");
  long k = (t - 1) % theta0;
  return std::sin(0.1 + (static_cast<double>(k) / 11.0) * (std::numbers::pi - 0.2));
}

ObjectSeries generate_dirichlet(const DirichletConfig& config) {
  check_common(config.T, config.theta0);
  if (!(config.alpha > 0.0)) throw ValidationError("dirichlet config: alpha must be > 0");
  if (config.theta0 > 12)
    throw ValidationError("dirichlet config: theta0 must be <= 12 (see l_schedule)");

  Rng rng(config.seed);
  std::vector<Point> points;
  points.reserve(static_cast<std::size_t>(config.T));
  for (long t = 1; t <= config.T; ++t) {
    double level = l_schedule(t, config.theta0);
    Eigen::VectorXd composition;
    if (config.noiseless) {
      composition = dirichlet_mean_from_level(level);
    } else {
      Eigen::Vector3d concentration(level * config.alpha, level * config.alpha, config.alpha);
      composition = rng.dirichlet(concentration);
    }
    points.emplace_back(sqrt_compositional_transform(composition));
  }
  return ObjectSeries(MetricSpace::sphere(3), std::move(points));
}

ObjectSeries generate_networks(const NetworkConfig& config) {
  check_common(config.T, config.theta0);
  if (config.nodes < 2) throw ValidationError("network config: nodes must be >= 2");
  if (config.amplitude < 0.0 || config.noise < 0.0)
    throw ValidationError("network config: amplitude and noise must be >= 0");

  Rng rng(config.seed);
  Rng* noise_source = config.noise > 0.0 ? &rng : nullptr;
  std::vector<Point> points;
  points.reserve(static_cast<std::size_t>(config.T));
  for (long t = 1; t <= config.T; ++t)
    points.emplace_back(laplacian_from_adjacency(network_adjacency(config, t, noise_source)));
  return ObjectSeries(MetricSpace::laplacian(config.nodes), std::move(points));
}

ObjectSeries generate_distributions(const DistributionConfig& config) {
  check_common(config.T, config.theta0);
  if (config.grid_size < 2) throw ValidationError("distribution config: grid_size must be >= 2");
  if (config.amplitude < 0.0 || config.noise < 0.0)
    throw ValidationError("distribution config: amplitude and noise must be >= 0");
  if (std::abs(config.sigma_amplitude) >= 1.0)
    throw ValidationError("distribution config: |sigma_amplitude| must be < 1");

  Eigen::VectorXd z = midlevel_normal_grid(config.grid_size);
  Rng rng(config.seed);
  Rng* noise_source = config.noise > 0.0 ? &rng : nullptr;
  std::vector<Point> points;
  points.reserve(static_cast<std::size_t>(config.T));
  for (long t = 1; t <= config.T; ++t)
    points.emplace_back(QuantileFunction(distribution_quantiles(config, t, noise_source, z)));
  return ObjectSeries(MetricSpace::wasserstein1d(config.grid_size), std::move(points));
}

std::optional<std::vector<Point>> truth_sequence(const DirichletConfig& config) {
  std::vector<Point> truth;
  truth.reserve(static_cast<std::size_t>(config.T));
  for (long t = 1; t <= config.T; ++t)
    truth.emplace_back(
        sqrt_compositional_transform(dirichlet_mean_from_level(l_schedule(t, config.theta0))));
  return truth;
}

std::optional<std::vector<Point>> truth_sequence(const NetworkConfig& config) {
  // With clipping active, the population mean under noise has no closed form.
  if (config.noise > 0.0) return std::nullopt;
  std::vector<Point> truth;
  truth.reserve(static_cast<std::size_t>(config.T));
  for (long t = 1; t <= config.T; ++t)
    truth.emplace_back(laplacian_from_adjacency(network_adjacency(config, t, nullptr)));
  return truth;
}

std::optional<std::vector<Point>> truth_sequence(const DistributionConfig& config) {
  Eigen::VectorXd z = midlevel_normal_grid(config.grid_size);
  std::vector<Point> truth;
  truth.reserve(static_cast<std::size_t>(config.T));
  for (long t = 1; t <= config.T; ++t)
    truth.emplace_back(QuantileFunction(distribution_quantiles(config, t, nullptr, z)));
  return truth;
}

double MonteCarloReport::p_equal(int a) const {
  if (theta_hats.empty()) return 0.0;
  long hits = std::count(theta_hats.begin(), theta_hats.end(), a);
  return static_cast<double>(hits) / static_cast<double>(theta_hats.size());
}

double MonteCarloReport::p_between(int b, int c) const {
  if (theta_hats.empty()) return 0.0;
  long hits = std::count_if(theta_hats.begin(), theta_hats.end(),
                            [&](int v) { return b <= v && v <= c; });
  return static_cast<double>(hits) / static_cast<double>(theta_hats.size());
}

namespace {

SummaryStats summarize(std::vector<double> values) {
  SummaryStats s;
  if (values.empty()) return s;
  double total = 0.0;
  for (double v : values) total += v;
  s.mean = total / static_cast<double>(values.size());
  std::sort(values.begin(), values.end());
  std::size_t n = values.size();
  s.median = (n % 2 == 1) ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
  return s;
}

template <typename Config>
ObjectSeries generate_series(const Config& config) {
  if constexpr (std::is_same_v<Config, DirichletConfig>) return generate_dirichlet(config);
  else if constexpr (std::is_same_v<Config, NetworkConfig>) return generate_networks(config);
  else return generate_distributions(config);
}

template <typename Config>
MonteCarloReport run_monte_carlo_impl(const Config& config, const MonteCarloOptions& options) {
  if (options.replicates < 1) throw ValidationError("run_monte_carlo: replicates must be >= 1");

  struct Slot {
    bool ok = false;
    int theta_hat = 0;
    double mse = -1.0;
    double max_distance = -1.0;
    double seconds = 0.0;
  };
  std::vector<Slot> slots(static_cast<std::size_t>(options.replicates));

  const auto truth = truth_sequence(config);
  const auto run_start = std::chrono::steady_clock::now();

  parallel_for(options.replicates, [&](int rep) {
    const auto rep_start = std::chrono::steady_clock::now();
    Slot& slot = slots[static_cast<std::size_t>(rep)];
    Config rep_config = config;
    rep_config.seed = splitmix64(config.seed) ^
                      splitmix64(0xC2B2AE3D27D4EB4FULL + static_cast<std::uint64_t>(rep));
    try {
      ObjectSeries series = generate_series(rep_config);
      if (options.solver) {
        MetricSpace base = series.space();
        MetricSpace tuned = [&] {
          switch (base.kind()) {
            case SpaceKind::sphere: return MetricSpace::sphere(base.dimension(), *options.solver);
            case SpaceKind::laplacian:
              return MetricSpace::laplacian(base.dimension(), *options.solver);
            case SpaceKind::wasserstein1d:
              return MetricSpace::wasserstein1d(base.dimension(), *options.solver);
            default: return MetricSpace::euclidean(base.dimension(), *options.solver);
          }
        }();
        series = ObjectSeries(tuned, series.points());
      }

      int theta_max = options.theta_max ? *options.theta_max : default_theta_max(config.T);
      ScanResult sc = scan(series, theta_max);
      ICReport ic = options.g_override ? select(sc, options.kind, *options.g_override)
                                       : select(sc, options.kind);
      slot.theta_hat = ic.selected_theta;
      if (truth) {
        PeriodicComponent comp = extract_component(series, sc, ic.selected_theta);
        slot.mse = component_mse(comp, *truth);
        slot.max_distance = component_max_distance(comp, *truth);
      }
      slot.ok = true;
    } catch (const ConvergenceError&) {
    } catch (const DegenerateConfigurationError&) {
    } catch (const ZeroRSSError&) {
    }
    slot.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - rep_start).count();
  });

  MonteCarloReport report;
  report.replicates = options.replicates;
  report.theta0 = config.theta0;
  double seconds_sum = 0.0;
  for (const Slot& slot : slots) {
    seconds_sum += slot.seconds;
    if (!slot.ok) {
      ++report.failures;
      continue;
    }
    report.theta_hats.push_back(slot.theta_hat);
    if (slot.mse >= 0.0) {
      report.mse_values.push_back(slot.mse);
      report.max_distance_values.push_back(slot.max_distance);
    }
  }
  report.mse = summarize(report.mse_values);
  report.max_distance = summarize(report.max_distance_values);
  report.total_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - run_start).count();
  report.mean_seconds_per_replicate = seconds_sum / static_cast<double>(options.replicates);
  return report;
}

}  // namespace

MonteCarloReport run_monte_carlo(const DirichletConfig& config, const MonteCarloOptions& options) {
  return run_monte_carlo_impl(config, options);
}
MonteCarloReport run_monte_carlo(const NetworkConfig& config, const MonteCarloOptions& options) {
  return run_monte_carlo_impl(config, options);
}
MonteCarloReport run_monte_carlo(const DistributionConfig& config,
                                 const MonteCarloOptions& options) {
  return run_monte_carlo_impl(config, options);
}

MonteCarloReport run_monte_carlo(const DirichletConfig& config, int replicates,
                                 CriterionKind kind) {
  MonteCarloOptions options;
  options.replicates = replicates;
  options.kind = kind;
  return run_monte_carlo_impl(config, options);
}
MonteCarloReport run_monte_carlo(const NetworkConfig& config, int replicates, CriterionKind kind) {
  MonteCarloOptions options;
  options.replicates = replicates;
  options.kind = kind;
  return run_monte_carlo_impl(config, options);
}
MonteCarloReport run_monte_carlo(const DistributionConfig& config, int replicates,
                                 CriterionKind kind) {
  MonteCarloOptions options;
  options.replicates = replicates;
  options.kind = kind;
  return run_monte_carlo_impl(config, options);
}

}  // namespace objper
