#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <random>

namespace objper {

/// splitmix64 mixing step; used to derive independent seeds.
std::uint64_t splitmix64(std::uint64_t x);

/// Deterministic random source. The core engine is std::mt19937_64, whose
/// output sequence is pinned by the C++ standard, and every sampler below is
/// implemented in-repo, so identical seeds give identical draws on every
/// platform and standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  /// Independent stream for one replicate of a seeded experiment.
  static Rng for_replicate(std::uint64_t seed, std::uint64_t replicate);

  /// Uniform draw on the open interval (0, 1).
  double uniform();

  /// Standard normal draw (Box-Muller, pair cached).
  double normal();

  /// Gamma(shape, 1) via Marsaglia-Tsang, boosted for shape < 1.
  double gamma(double shape);

  /// Dirichlet draw from positive concentration parameters.
  Eigen::VectorXd dirichlet(const Eigen::VectorXd& concentration);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Inverse standard normal CDF (Acklam's rational approximation plus one
/// Halley refinement; accurate to ~1e-15 over (0, 1)).
double normal_quantile(double p);

}  // namespace objper
