#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "objper/periodic_component.hpp"
#include "objper/rng.hpp"
#include "objper/simulation.hpp"
#include "objper/tuning.hpp"
#include "oracles.hpp"

using namespace objper;

TEST_CASE("l_schedule values and periodicity") {
  // frozen by hand: l_1 = sin(0.1)
  CHECK(l_schedule(1, 12) == doctest::Approx(0.09983341664682815).epsilon(1e-15));
  // the sine peak sits between integer phases, so levels stay strictly < 1
  for (long t = 1; t <= 12; ++t) {
    CHECK(l_schedule(t, 12) < 1.0);
    CHECK(l_schedule(t, 12) > 0.0);
  }
  CHECK(l_schedule(6, 12) == doctest::Approx(0.9910742938867125).epsilon(1e-15));

  std::mt19937_64 eng(5);
  for (int i = 0; i < 100; ++i) {
    long t = 1 + static_cast<long>(eng() % 100000);
    CHECK(l_schedule(t, 12) == l_schedule(t + 12, 12));
  }

  CHECK_THROWS_AS(l_schedule(0, 12), ValidationError);
  CHECK_THROWS_AS(l_schedule(5, 13), ValidationError);
}

TEST_CASE("generate_dirichlet determinism and shape") {
  DirichletConfig config;
  config.T = 50;
  config.alpha = 0.5;
  config.seed = 123;
  ObjectSeries a = generate_dirichlet(config);
  ObjectSeries b = generate_dirichlet(config);
  REQUIRE(a.size() == 50);
  CHECK(a.space().kind() == SpaceKind::sphere);
  for (int t = 0; t < 50; ++t) CHECK(points_equal(a.points()[t], b.points()[t]));

  config.seed = 124;
  ObjectSeries c = generate_dirichlet(config);
  bool any_different = false;
  for (int t = 0; t < 50; ++t)
    if (!points_equal(a.points()[t], c.points()[t])) any_different = true;
  CHECK(any_different);
}

TEST_CASE("dirichlet sample mean approaches the closed-form mean") {
  // law of large numbers at one fixed time point
  const long t = 3;
  const double alpha = 1.0;
  double level = l_schedule(t, 12);
  Rng rng(99);
  Eigen::Vector3d concentration(level * alpha, level * alpha, alpha);
  Eigen::Vector3d acc = Eigen::Vector3d::Zero();
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) acc += rng.dirichlet(concentration);
  acc /= draws;
  Eigen::Vector3d expected = dirichlet_mean_from_level(level);
  for (int j = 0; j < 3; ++j) CHECK(std::abs(acc[j] - expected[j]) < 0.01);
}

TEST_CASE("dirichlet element-wise variance grows as alpha shrinks") {
  const long t = 4;
  double level = l_schedule(t, 12);
  std::vector<double> variances;
  for (double alpha : {1.0, 0.5, 0.1}) {
    Rng rng(7);
    Eigen::Vector3d concentration(level * alpha, level * alpha, alpha);
    double mean = 0.0, sq = 0.0;
    const int draws = 10000;
    for (int i = 0; i < draws; ++i) {
      double v = rng.dirichlet(concentration)[2];
      mean += v;
      sq += v * v;
    }
    mean /= draws;
    variances.push_back(sq / draws - mean * mean);
  }
  CHECK(variances[0] < variances[1]);
  CHECK(variances[1] < variances[2]);
}

TEST_CASE("marginals repeat across one period: energy-distance test") {
  // two-sample energy statistic with a permutation null; n kept at desk scale
  const int n = 1000;
  const int perms = 199;
  const double alpha = 0.5;

  auto draw_at = [&](long t, std::uint64_t seed) {
    Rng rng(seed);
    double level = l_schedule(t, 12);
    Eigen::Vector3d conc(level * alpha, level * alpha, alpha);
    std::vector<Eigen::Vector3d> out;
    out.reserve(n);
    for (int i = 0; i < n; ++i) {
      Eigen::VectorXd comp = rng.dirichlet(conc);
      out.emplace_back(comp.cwiseSqrt());
    }
    return out;
  };

  auto energy_p_value = [&](const std::vector<Eigen::Vector3d>& xs,
                            const std::vector<Eigen::Vector3d>& ys) {
    const int m = 2 * n;
    std::vector<Eigen::Vector3d> pool = xs;
    pool.insert(pool.end(), ys.begin(), ys.end());
    std::vector<float> dist(static_cast<std::size_t>(m) * m, 0.0f);
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j) {
        float d = static_cast<float>((pool[i] - pool[j]).norm());
        dist[static_cast<std::size_t>(i) * m + j] = d;
        dist[static_cast<std::size_t>(j) * m + i] = d;
      }

    std::vector<int> label(m);
    for (int i = 0; i < m; ++i) label[i] = i < n ? 0 : 1;
    auto statistic = [&]() {
      double within0 = 0.0, within1 = 0.0, between = 0.0;
      for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) {
          double d = dist[static_cast<std::size_t>(i) * m + j];
          if (label[i] == label[j])
            (label[i] == 0 ? within0 : within1) += d;
          else
            between += d;
        }
      double pairs_within = 0.5 * n * (n - 1);
      return 2.0 * between / (static_cast<double>(n) * n) - within0 / pairs_within -
             within1 / pairs_within;
    };

    double observed = statistic();
    std::mt19937_64 eng(2024);
    int geq = 0;
    for (int p = 0; p < perms; ++p) {
      for (int i = m - 1; i > 0; --i) {
        int j = static_cast<int>(eng() % static_cast<std::uint64_t>(i + 1));
        std::swap(label[i], label[j]);
      }
      if (statistic() >= observed) ++geq;
    }
    return (1.0 + geq) / (1.0 + perms);
  };

  // same marginal one period apart: fail to reject at 1%
  CHECK(energy_p_value(draw_at(3, 41), draw_at(15, 42)) > 0.01);
  // adjacent phases differ: reject at 1%
  CHECK(energy_p_value(draw_at(3, 43), draw_at(4, 44)) <= 0.01);
}

TEST_CASE("generate_networks structure") {
  SUBCASE("noise off series is exactly periodic and scan hits zero") {
    NetworkConfig config;
    config.T = 36;
    config.theta0 = 12;
    config.noise = 0.0;
    config.nodes = 6;
    ObjectSeries s = generate_networks(config);
    for (int t = 0; t + 12 < 36; ++t) CHECK(points_equal(s.points()[t], s.points()[t + 12]));
    ScanResult sc = scan(s, 18);
    CHECK(sc.rss[11] == 0.0);
    CHECK(sc.rss[0] > 0.0);
  }
  SUBCASE("flat configuration selects period 1") {
    NetworkConfig config;
    config.T = 40;
    config.theta0 = 8;
    config.amplitude = 0.0;
    config.noise = 0.0;
    ObjectSeries s = generate_networks(config);
    ICReport report = select(scan(s, 16), CriterionKind::rss);
    CHECK(report.selected_theta == 1);
  }
  SUBCASE("default noisy config recovers the period in most replicates") {
    NetworkConfig config;
    config.T = 240;
    MonteCarloReport report = run_monte_carlo(config, 200, CriterionKind::rss);
    CHECK(report.failures == 0);
    CHECK(report.p_equal(12) >= 0.90);
  }
}

TEST_CASE("generate_distributions structure") {
  SUBCASE("noise off scan hits zero at the period exactly") {
    DistributionConfig config;
    config.T = 35;
    config.theta0 = 7;
    config.noise = 0.0;
    config.grid_size = 40;
    ObjectSeries s = generate_distributions(config);
    ScanResult sc = scan(s, 17);
    CHECK(sc.rss[6] == 0.0);
    CHECK(sc.rss[13] == 0.0);
    CHECK(sc.rss[0] > 0.0);
  }
  SUBCASE("flat configuration selects period 1") {
    DistributionConfig config;
    config.T = 42;
    config.theta0 = 6;
    config.amplitude = 0.0;
    config.sigma_amplitude = 0.0;
    config.noise = 0.0;
    ObjectSeries s = generate_distributions(config);
    ICReport report = select(scan(s, 14), CriterionKind::rss);
    CHECK(report.selected_theta == 1);
  }
  SUBCASE("grid W2 between shifted normals matches the closed form") {
    DistributionConfig config;
    config.grid_size = 100;
    Eigen::VectorXd z(100);
    for (int k = 1; k <= 100; ++k) z[k - 1] = normal_quantile((k - 0.5) / 100.0);
    QuantileFunction standard(z);
    QuantileFunction shifted((z.array() + 1.0).matrix());
    MetricSpace space = MetricSpace::wasserstein1d(100);
    CHECK(std::abs(distance(space, Point{standard}, Point{shifted}) - 1.0) < 1e-3);
  }
}

TEST_CASE("run_monte_carlo reporting") {
  DirichletConfig config;
  config.T = 60;
  config.alpha = 1.0;
  config.seed = 31;

  SUBCASE("reports are deterministic given the seed") {
    MonteCarloReport a = run_monte_carlo(config, 20, CriterionKind::rss);
    MonteCarloReport b = run_monte_carlo(config, 20, CriterionKind::rss);
    CHECK(a.theta_hats == b.theta_hats);
    CHECK(a.mse_values == b.mse_values);
    CHECK(a.failures == b.failures);
    CHECK(a.replicates == 20);
    CHECK(static_cast<int>(a.theta_hats.size()) + a.failures == a.replicates);
  }

  SUBCASE("probability helpers") {
    MonteCarloReport report = run_monte_carlo(config, 25, CriterionKind::rss);
    double exact = report.p_equal(12);
    double window = report.p_between(8, 16);
    CHECK(exact >= 0.0);
    CHECK(exact <= window);
    CHECK(window <= 1.0);
  }

  SUBCASE("solver failures are counted, not fatal") {
    MonteCarloOptions options;
    options.replicates = 8;
    options.kind = CriterionKind::rss;
    options.solver = SolverSettings{1e-16, 1};  // unreachable tolerance
    MonteCarloReport report = run_monte_carlo(config, options);
    CHECK(report.failures == 8);
    CHECK(report.theta_hats.empty());
  }
}

TEST_CASE("per-cell hit rates do not degrade as T grows") {
  // small-replicate version of the monotone-in-T pattern, with binomial slack
  DirichletConfig config;
  config.alpha = 1.0;
  config.seed = 9;
  std::vector<double> rates;
  for (int T : {100, 240}) {
    config.T = T;
    MonteCarloReport report = run_monte_carlo(config, 40, CriterionKind::rss);
    rates.push_back(report.p_equal(12));
  }
  double se = std::sqrt(rates[0] * (1 - rates[0]) / 40.0 + rates[1] * (1 - rates[1]) / 40.0);
  CHECK(rates[1] >= rates[0] - 1.96 * se - 1e-12);
}
