#include "objper/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "objper/version.hpp"

namespace objper {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open file: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct CsvContents {
  std::map<std::string, std::string> metadata;
  std::vector<std::vector<double>> rows;
};

CsvContents parse_csv(const std::string& text) {
  CsvContents out;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::string body = line.substr(1);
      auto colon = body.find(':');
      if (colon != std::string::npos) {
        auto trim = [](std::string s) {
          s.erase(0, s.find_first_not_of(" \t"));
          s.erase(s.find_last_not_of(" \t") + 1);
          return s;
        };
        out.metadata[trim(body.substr(0, colon))] = trim(body.substr(colon + 1));
      }
      continue;
    }
    std::vector<double> row;
    const char* p = line.data();
    const char* end = p + line.size();
    while (p < end) {
      while (p < end && (*p == ' ' || *p == '\t')) ++p;
      double value = 0.0;
      auto [next, ec] = std::from_chars(p, end, value);
      if (ec != std::errc())
        throw ParseError("row " + std::to_string(line_no) + ": cannot parse number near '" +
                             std::string(p, std::min<std::size_t>(8, static_cast<std::size_t>(end - p))) + "'",
                         line_no);
      row.push_back(value);
      p = next;
      while (p < end && (*p == ' ' || *p == '\t')) ++p;
      if (p < end) {
        if (*p != ',')
          throw ParseError("row " + std::to_string(line_no) + ": expected ',' separator", line_no);
        ++p;
      }
    }
    if (row.empty())
      throw ParseError("row " + std::to_string(line_no) + ": no values", line_no);
    if (!out.rows.empty() && row.size() != out.rows.front().size())
      throw ParseError("row " + std::to_string(line_no) + ": expected " +
                           std::to_string(out.rows.front().size()) + " columns, got " +
                           std::to_string(row.size()),
                       line_no);
    out.rows.push_back(std::move(row));
  }
  if (out.rows.empty()) throw ValidationError("series file has no data rows");
  return out;
}

Eigen::VectorXd to_vector(const std::vector<double>& row) {
  return Eigen::Map<const Eigen::VectorXd>(row.data(), static_cast<Eigen::Index>(row.size()));
}

json load_json(const fs::path& path) {
  json doc = json::parse(read_file(path), nullptr, false);
  if (doc.is_discarded()) throw ParseError("file is not valid JSON: " + path.string());
  return doc;
}

Eigen::MatrixXd json_to_matrix(const json& rows, const char* what) {
  if (!rows.is_array() || rows.empty())
    throw ParseError(std::string(what) + ": expected a non-empty array of rows");
  const std::size_t n = rows.size();
  Eigen::MatrixXd m(static_cast<Eigen::Index>(n), 0);
  for (std::size_t i = 0; i < n; ++i) {
    const json& row = rows[i];
    if (!row.is_array())
      throw ParseError(std::string(what) + ": row " + std::to_string(i + 1) + " is not an array",
                       i + 1);
    if (i == 0) m.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(row.size()));
    if (row.size() != static_cast<std::size_t>(m.cols()))
      throw ParseError(std::string(what) + ": row " + std::to_string(i + 1) + " has " +
                           std::to_string(row.size()) + " entries, expected " +
                           std::to_string(m.cols()),
                       i + 1);
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (!row[j].is_number())
        throw ParseError(std::string(what) + ": non-numeric entry in row " + std::to_string(i + 1),
                         i + 1);
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = row[j].get<double>();
    }
  }
  return m;
}

Eigen::VectorXd json_to_row(const json& row, std::size_t index, const char* what) {
  if (!row.is_array() || row.empty())
    throw ParseError(std::string(what) + ": entry " + std::to_string(index + 1) +
                         " is not a non-empty array",
                     index + 1);
  Eigen::VectorXd v(static_cast<Eigen::Index>(row.size()));
  for (std::size_t j = 0; j < row.size(); ++j) {
    if (!row[j].is_number())
      throw ParseError(std::string(what) + ": non-numeric value in entry " +
                           std::to_string(index + 1),
                       index + 1);
    v[static_cast<Eigen::Index>(j)] = row[j].get<double>();
  }
  return v;
}

/// Converts one sampled nonnegative curve to M quantile values: normalize to
/// a density by its trapezoid integral, accumulate the piecewise-linear CDF,
/// and invert it at the mid-levels (k - 0.5)/M.
Eigen::VectorXd curve_to_quantiles(const Eigen::VectorXd& grid, const Eigen::VectorXd& curve,
                                   int M, std::size_t row_index) {
  if (grid.size() != curve.size())
    throw ParseError("curve " + std::to_string(row_index + 1) + " length does not match grid",
                     row_index + 1);
  if (grid.size() < 2) throw ValidationError("curve grid needs at least two nodes");
  for (Eigen::Index i = 0; i + 1 < grid.size(); ++i) {
    if (!(grid[i] < grid[i + 1]))
      throw ValidationError("curve grid must be strictly increasing");
  }
  for (Eigen::Index i = 0; i < curve.size(); ++i) {
    if (curve[i] < 0.0)
      throw ValidationError("curve " + std::to_string(row_index + 1) +
                            " has negative mass at node " + std::to_string(i + 1));
  }

  const Eigen::Index n = grid.size();
  Eigen::VectorXd cdf(n);
  cdf[0] = 0.0;
  for (Eigen::Index i = 1; i < n; ++i)
    cdf[i] = cdf[i - 1] + 0.5 * (curve[i] + curve[i - 1]) * (grid[i] - grid[i - 1]);
  double total = cdf[n - 1];
  if (!(total > 0.0))
    throw ValidationError("curve " + std::to_string(row_index + 1) + " has zero total mass");
  cdf /= total;

  Eigen::VectorXd quantiles(M);
  Eigen::Index seg = 0;
  for (int k = 1; k <= M; ++k) {
    double level = (static_cast<double>(k) - 0.5) / static_cast<double>(M);
    while (seg + 1 < n - 1 && cdf[seg + 1] < level) ++seg;
    double lo = cdf[seg], hi = cdf[seg + 1];
    double f = (hi > lo) ? (level - lo) / (hi - lo) : 0.0;
    f = std::clamp(f, 0.0, 1.0);
    quantiles[k - 1] = grid[seg] + f * (grid[seg + 1] - grid[seg]);
  }
  return quantiles;
}

ObjectSeries parse_csv_series(const fs::path& path, bool as_composition) {
  CsvContents csv = parse_csv(read_file(path));
  bool rows_on_sphere = false;
  if (auto it = csv.metadata.find("space"); it != csv.metadata.end()) {
    if (it->second == "sphere") rows_on_sphere = true;
  }

  std::vector<Point> points;
  points.reserve(csv.rows.size());
  const Eigen::Index dim = static_cast<Eigen::Index>(csv.rows.front().size());
  for (std::size_t i = 0; i < csv.rows.size(); ++i) {
    Eigen::VectorXd v = to_vector(csv.rows[i]);
    try {
      if (!as_composition)
        points.emplace_back(EuclideanPoint(v));
      else if (rows_on_sphere)
        points.emplace_back(SpherePoint(v));
      else
        points.emplace_back(sqrt_compositional_transform(v));
    } catch (const Error& e) {
      throw ValidationError("row " + std::to_string(i + 1) + ": " + e.what());
    }
  }
  MetricSpace space =
      as_composition ? MetricSpace::sphere(dim) : MetricSpace::euclidean(dim);
  return ObjectSeries(space, std::move(points));
}

ObjectSeries parse_laplacian_series(const fs::path& path) {
  json doc = load_json(path);
  std::vector<Point> points;
  if (doc.contains("laplacians")) {
    const json& stack = doc["laplacians"];
    if (!stack.is_array() || stack.empty())
      throw ParseError("'laplacians' must be a non-empty array");
    for (std::size_t i = 0; i < stack.size(); ++i) {
      try {
        points.emplace_back(GraphLaplacian(json_to_matrix(stack[i], "laplacians")));
      } catch (const InvalidPointError& e) {
        throw ValidationError("laplacian " + std::to_string(i + 1) + ": " + e.what());
      }
    }
  } else if (doc.contains("adjacency")) {
    const json& stack = doc["adjacency"];
    if (!stack.is_array() || stack.empty())
      throw ParseError("'adjacency' must be a non-empty array");
    for (std::size_t i = 0; i < stack.size(); ++i) {
      try {
        points.emplace_back(laplacian_from_adjacency(json_to_matrix(stack[i], "adjacency")));
      } catch (const InvalidAdjacencyError& e) {
        throw ValidationError("adjacency " + std::to_string(i + 1) + ": " + e.what());
      }
    }
  } else {
    throw ParseError("laplacian series needs an 'adjacency' or 'laplacians' field");
  }
  Eigen::Index nodes = point_dimension(points.front());
  return ObjectSeries(MetricSpace::laplacian(nodes), std::move(points));
}

ObjectSeries parse_wasserstein_series(const fs::path& path) {
  json doc = load_json(path);
  std::vector<Point> points;
  if (doc.contains("quantiles")) {
    const json& stack = doc["quantiles"];
    if (!stack.is_array() || stack.empty())
      throw ParseError("'quantiles' must be a non-empty array");
    for (std::size_t i = 0; i < stack.size(); ++i) {
      try {
        points.emplace_back(QuantileFunction(json_to_row(stack[i], i, "quantiles")));
      } catch (const InvalidPointError& e) {
        throw ValidationError("quantile row " + std::to_string(i + 1) + ": " + e.what());
      }
    }
  } else if (doc.contains("curves")) {
    if (!doc.contains("grid")) throw ParseError("'curves' requires a 'grid' field");
    Eigen::VectorXd grid = json_to_row(doc["grid"], 0, "grid");
    const json& stack = doc["curves"];
    if (!stack.is_array() || stack.empty())
      throw ParseError("'curves' must be a non-empty array");
    int M = kCurveQuantileGrid;
    if (doc.contains("quantile_grid_size")) M = doc["quantile_grid_size"].get<int>();
    if (M < 2) throw ValidationError("quantile_grid_size must be >= 2");
    for (std::size_t i = 0; i < stack.size(); ++i) {
      Eigen::VectorXd curve = json_to_row(stack[i], i, "curves");
      points.emplace_back(QuantileFunction(curve_to_quantiles(grid, curve, M, i)));
    }
  } else {
    throw ParseError("wasserstein1d series needs a 'quantiles' or 'curves' field");
  }
  Eigen::Index grid_size = point_dimension(points.front());
  return ObjectSeries(MetricSpace::wasserstein1d(grid_size), std::move(points));
}

}  // namespace

ObjectSeries parse_series(const fs::path& path, const std::string& declared_space) {
  if (!fs::exists(path)) throw ValidationError("input file does not exist: " + path.string());
  if (declared_space == "sphere-composition" || declared_space == "sphere")
    return parse_csv_series(path, /*as_composition=*/true);
  if (declared_space == "euclidean") return parse_csv_series(path, /*as_composition=*/false);
  if (declared_space == "laplacian") return parse_laplacian_series(path);
  if (declared_space == "wasserstein1d") return parse_wasserstein_series(path);
  throw ValidationError("unknown space: " + declared_space +
                        " (expected sphere-composition, laplacian, wasserstein1d, or euclidean)");
}

void serialize_series(const ObjectSeries& series, const fs::path& path) {
  const MetricSpace& space = series.space();
  if (space.kind() == SpaceKind::sphere || space.kind() == SpaceKind::euclidean) {
    std::ostringstream out;
    out << "# objper-series v" << kSchemaVersion << "\n";
    out << "# space: " << space_kind_name(space.kind()) << "\n";
    out << "# T: " << series.size() << "\n";
    out << "# columns: " << space.dimension() << "\n";
    for (const Point& p : series.points()) {
      const Eigen::VectorXd& v = space.kind() == SpaceKind::sphere
                                     ? std::get<SpherePoint>(p).coords()
                                     : std::get<EuclideanPoint>(p).coords();
      for (Eigen::Index j = 0; j < v.size(); ++j) {
        if (j > 0) out << ',';
        out << format_double(v[j]);
      }
      out << '\n';
    }
    atomic_write_file(path, out.str());
    return;
  }

  json doc;
  doc["format"] = "objper-series";
  doc["version"] = kSchemaVersion;
  doc["space"] = space_kind_name(space.kind());
  doc["T"] = series.size();
  if (space.kind() == SpaceKind::laplacian) {
    doc["nodes"] = space.dimension();
    json stack = json::array();
    for (const Point& p : series.points()) {
      const Eigen::MatrixXd& m = std::get<GraphLaplacian>(p).matrix();
      json rows = json::array();
      for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
      }
      stack.push_back(std::move(rows));
    }
    doc["laplacians"] = std::move(stack);
  } else {
    doc["quantile_grid_size"] = space.dimension();
    json stack = json::array();
    for (const Point& p : series.points()) {
      const Eigen::VectorXd& v = std::get<QuantileFunction>(p).values();
      json row = json::array();
      for (Eigen::Index j = 0; j < v.size(); ++j) row.push_back(v[j]);
      stack.push_back(std::move(row));
    }
    doc["quantiles"] = std::move(stack);
  }
  atomic_write_file(path, doc.dump(2) + "\n");
}

void atomic_write_file(const fs::path& path, const std::string& contents) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot write file: " + tmp.string());
    out << contents;
    if (!out) throw ValidationError("write failed: " + tmp.string());
  }
  fs::rename(tmp, path);
}

json point_to_json(const Point& p) {
  if (const auto* s = std::get_if<SpherePoint>(&p)) {
    json row = json::array();
    for (Eigen::Index j = 0; j < s->coords().size(); ++j) row.push_back(s->coords()[j]);
    return row;
  }
  if (const auto* e = std::get_if<EuclideanPoint>(&p)) {
    json row = json::array();
    for (Eigen::Index j = 0; j < e->coords().size(); ++j) row.push_back(e->coords()[j]);
    return row;
  }
  if (const auto* q = std::get_if<QuantileFunction>(&p)) {
    json row = json::array();
    for (Eigen::Index j = 0; j < q->values().size(); ++j) row.push_back(q->values()[j]);
    return row;
  }
  const Eigen::MatrixXd& m = std::get<GraphLaplacian>(p).matrix();
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json build_result_json(const ScanOutputs& outputs, const json& config_echo) {
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
  doc["config"] = config_echo;
  doc["series"] = {{"T", outputs.T}, {"space", outputs.space}};

  doc["scan"] = {{"theta_max", outputs.scan.theta_max}, {"rss", outputs.scan.rss}};

  doc["lambda_path"] = {{"breakpoints", outputs.path.breakpoints},
                        {"theta", outputs.path.theta_on_segment}};

  json records = json::array();
  for (const ICRecord& rec : outputs.ic.records) {
    records.push_back({{"theta", rec.theta_hat},
                       {"rss_over_t", rec.rss_over_t},
                       {"penalty", rec.penalty},
                       {"value", rec.value},
                       {"segment_begin", rec.segment_begin},
                       {"segment_end", std::isinf(rec.segment_end)
                                           ? json(nullptr)
                                           : json(rec.segment_end)}});
  }
  doc["ic"] = {{"criterion", criterion_kind_name(outputs.ic.kind)},
               {"g", outputs.ic.g_value},
               {"records", std::move(records)},
               {"selected_lambda", outputs.ic.selected_lambda},
               {"selected_theta", outputs.ic.selected_theta}};
  doc["selected_period"] = outputs.ic.selected_theta;

  json curves = json::array();
  for (std::size_t i = 0; i < outputs.loss_curves.size(); ++i) {
    curves.push_back({{"multiplier", outputs.lambda_multipliers[i]},
                      {"lambda", outputs.loss_lambdas[i]},
                      {"values", outputs.loss_curves[i]}});
  }
  doc["penalized_loss"] = std::move(curves);

  if (outputs.component) {
    json values = json::array();
    for (const Point& p : outputs.component->values) values.push_back(point_to_json(p));
    doc["component"] = {{"period", outputs.component->period},
                        {"phase_counts", outputs.component->phase_counts},
                        {"values", std::move(values)}};
  }
  return doc;
}

json monte_carlo_report_json(const MonteCarloReport& report, const json& config_echo,
                             bool include_timing) {
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
  doc["config"] = config_echo;

  std::map<std::string, int> histogram;
  for (int v : report.theta_hats) ++histogram[std::to_string(v)];

  int lo = std::max(1, report.theta0 - 4);
  int hi = report.theta0 + 4;
  json body = {{"replicates", report.replicates},
               {"failures", report.failures},
               {"theta0", report.theta0},
               {"theta_hats", report.theta_hats},
               {"histogram", histogram},
               {"hit", {{"p_exact", report.p_equal(report.theta0)},
                        {"window", {lo, hi}},
                        {"p_window", report.p_between(lo, hi)}}}};
  if (!report.mse_values.empty()) {
    body["mse"] = {{"mean", report.mse.mean},
                   {"median", report.mse.median},
                   {"values", report.mse_values}};
    body["max_distance"] = {{"mean", report.max_distance.mean},
                            {"median", report.max_distance.median},
                            {"values", report.max_distance_values}};
  }
  doc["report"] = std::move(body);
  if (include_timing) {
    doc["timing"] = {{"total_seconds", report.total_seconds},
                     {"mean_seconds_per_replicate", report.mean_seconds_per_replicate}};
  }
  return doc;
}

void validate_result_schema(const json& doc) {
  auto require = [&](const json& node, const char* key, const char* where) {
    if (!node.contains(key))
      throw ValidationError(std::string("result document missing '") + key + "' in " + where);
  };
  require(doc, "schema_version", "root");
  if (doc["schema_version"].get<int>() != kSchemaVersion)
    throw ValidationError("unsupported schema_version");
  require(doc, "tool", "root");

  if (doc.contains("report")) {
    require(doc, "config", "root");
    const json& report = doc["report"];
    for (const char* key : {"replicates", "failures", "theta0", "theta_hats", "histogram", "hit"})
      require(report, key, "report");
    return;
  }
  if (doc.contains("cells")) {
    for (const json& cell : doc["cells"]) validate_result_schema(cell);
    return;
  }

  require(doc, "config", "root");
  require(doc, "series", "root");
  const bool has_scan = doc.contains("scan");
  const bool has_component = doc.contains("component");
  if (!has_scan && !has_component)
    throw ValidationError("result document carries neither a scan nor a component");
  if (has_scan) {
    for (const char* key : {"lambda_path", "ic", "selected_period"}) require(doc, key, "root");
    require(doc["scan"], "rss", "scan");
    require(doc["scan"], "theta_max", "scan");
    require(doc["lambda_path"], "breakpoints", "lambda_path");
    require(doc["lambda_path"], "theta", "lambda_path");
    for (const char* key : {"criterion", "g", "records", "selected_lambda", "selected_theta"})
      require(doc["ic"], key, "ic");
    if (doc["selected_period"].get<int>() != doc["ic"]["selected_theta"].get<int>())
      throw ValidationError("selected_period disagrees with ic.selected_theta");
  }
  if (has_component) {
    require(doc["component"], "period", "component");
    require(doc["component"], "values", "component");
    require(doc["component"], "phase_counts", "component");
  }
}

json error_json(const std::string& type, const std::string& message) {
  return json{{"error", {{"type", type}, {"message", message}}}};
}

}  // namespace objper
