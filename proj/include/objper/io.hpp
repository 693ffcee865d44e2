#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "objper/period_scan.hpp"
#include "objper/periodic_component.hpp"
#include "objper/simulation.hpp"
#include "objper/tuning.hpp"

namespace objper {

/// Declared on-disk formats. Compositional and euclidean series are CSV
/// (one observation per row, '#' metadata lines); laplacian and
/// wasserstein1d series are JSON documents.
///
///   sphere-composition  CSV rows are simplex vectors, square-root
///                       transformed on load (rows already on the sphere are
///                       accepted when the file says "# space: sphere")
///   euclidean           CSV rows are coordinate vectors
///   laplacian           JSON with "adjacency" stacks (converted) or
///                       "laplacians" (validated as-is)
///   wasserstein1d       JSON with "grid" + "curves" (normalized to
///                       densities, then converted to M quantile values) or
///                       "quantiles" (validated as-is)
ObjectSeries parse_series(const std::filesystem::path& path, const std::string& declared_space);

/// Writes the canonical lossless form for the series' space;
/// parse_series(serialize_series(s)) reproduces s exactly.
void serialize_series(const ObjectSeries& series, const std::filesystem::path& path);

/// Quantile grid size used when converting sampled curves.
inline constexpr int kCurveQuantileGrid = 100;

/// Writes contents to path atomically (temp file + rename).
void atomic_write_file(const std::filesystem::path& path, const std::string& contents);

nlohmann::json point_to_json(const Point& p);

/// Everything the scan pipeline produced for one series.
struct ScanOutputs {
  int T = 0;
  std::string space;
  ScanResult scan;
  LambdaPath path;
  ICReport ic;
  std::optional<PeriodicComponent> component;
  std::vector<double> lambda_multipliers;            // as requested
  std::vector<double> loss_lambdas;                  // multiplier * selected lambda
  std::vector<std::vector<double>> loss_curves;      // one curve per multiplier
};

nlohmann::json build_result_json(const ScanOutputs& outputs, const nlohmann::json& config_echo);

nlohmann::json monte_carlo_report_json(const MonteCarloReport& report,
                                       const nlohmann::json& config_echo, bool include_timing);

/// Throws ValidationError when a result document is missing required fields
/// or carries the wrong schema version.
void validate_result_schema(const nlohmann::json& doc);

/// Machine-readable error payload written to stderr by the CLI.
nlohmann::json error_json(const std::string& type, const std::string& message);

}  // namespace objper
