#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "objper/io.hpp"
#include "objper/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct ScanArgs {
  std::string input;
  std::string space;
  std::optional<int> theta_max;
  std::string criterion = "rss";
  std::optional<double> g_override;
  std::string lambda_multipliers = "1";
  std::string output;
};

std::vector<double> parse_multipliers(const std::string& csv) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= csv.size()) {
    std::size_t comma = csv.find(',', pos);
    std::string token = csv.substr(pos, comma == std::string::npos ? csv.size() - pos : comma - pos);
    if (token.empty()) throw objper::ValidationError("empty entry in --lambda-multipliers");
    try {
      double v = std::stod(token);
      if (!(v > 0.0)) throw objper::ValidationError("lambda multipliers must be positive");
      out.push_back(v);
    } catch (const std::invalid_argument&) {
      throw objper::ValidationError("cannot parse lambda multiplier '" + token + "'");
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (out.empty()) throw objper::ValidationError("--lambda-multipliers needs at least one value");
  return out;
}

void emit(const json& doc, const std::string& output) {
  std::string text = doc.dump(2) + "\n";
  if (output.empty())
    std::cout << text;
  else
    objper::atomic_write_file(output, text);
}

objper::ScanOutputs run_pipeline(const ScanArgs& args, json* config_echo) {
  objper::ObjectSeries series = objper::parse_series(args.input, args.space);
  const int T = series.size();
  int theta_max = args.theta_max ? *args.theta_max : objper::default_theta_max(T);
  objper::CriterionKind kind = objper::criterion_kind_from_name(args.criterion);

  objper::ScanOutputs out;
  out.T = T;
  out.space = args.space;
  out.scan = objper::scan(series, theta_max);
  out.path = objper::lambda_path(out.scan);
  out.ic = args.g_override ? objper::select(out.scan, kind, *args.g_override)
                           : objper::select(out.scan, kind);
  out.component = objper::extract_component(series, out.scan, out.ic.selected_theta);

  out.lambda_multipliers = parse_multipliers(args.lambda_multipliers);
  for (double m : out.lambda_multipliers) {
    double lambda = m * out.ic.selected_lambda;
    out.loss_lambdas.push_back(lambda);
    out.loss_curves.push_back(objper::penalized_loss(out.scan, lambda));
  }

  *config_echo = {{"input", args.input},
                  {"space", args.space},
                  {"theta_max", theta_max},
                  {"criterion", args.criterion},
                  {"g", out.ic.g_value},
                  {"lambda_multipliers", out.lambda_multipliers}};
  return out;
}

struct SimulateArgs {
  std::string family;
  int T = 240;
  double alpha = 1.0;
  int theta0 = 12;
  int nodes = 8;
  double amplitude = 1.0;
  double sigma_amplitude = 0.2;
  std::optional<double> noise;  // per-family default when unset
  int grid_size = 100;
  int reps = 200;
  bool fast = false;
  bool noiseless = false;
  bool timings = false;
  std::uint64_t seed = 0;
  std::string criterion = "rss";
  std::optional<int> theta_max;
  std::string table;
  std::string output;
};

json simulate_config_echo(const SimulateArgs& args, int replicates) {
  json echo = {{"family", args.family}, {"T", args.T},     {"theta0", args.theta0},
               {"seed", args.seed},     {"reps", replicates}, {"criterion", args.criterion}};
  if (args.family == "dirichlet") {
    echo["alpha"] = args.alpha;
    echo["noiseless"] = args.noiseless;
  } else if (args.family == "network") {
    echo["nodes"] = args.nodes;
    echo["amplitude"] = args.amplitude;
    echo["noise"] = args.noise.value_or(objper::NetworkConfig{}.noise);
  } else {
    echo["grid_size"] = args.grid_size;
    echo["amplitude"] = args.amplitude;
    echo["sigma_amplitude"] = args.sigma_amplitude;
    echo["noise"] = args.noise.value_or(objper::DistributionConfig{}.noise);
  }
  return echo;
}

objper::MonteCarloReport run_simulation(const SimulateArgs& args, int replicates, int T,
                                        double alpha) {
  objper::MonteCarloOptions options;
  options.replicates = replicates;
  options.kind = objper::criterion_kind_from_name(args.criterion);
  options.theta_max = args.theta_max;

  if (args.family == "dirichlet") {
    objper::DirichletConfig config;
    config.T = T;
    config.alpha = alpha;
    config.theta0 = args.theta0;
    config.seed = args.seed;
    config.noiseless = args.noiseless;
    return objper::run_monte_carlo(config, options);
  }
  if (args.family == "network") {
    objper::NetworkConfig config;
    config.T = T;
    config.theta0 = args.theta0;
    config.nodes = args.nodes;
    config.amplitude = args.amplitude;
    if (args.noise) config.noise = *args.noise;
    config.seed = args.seed;
    return objper::run_monte_carlo(config, options);
  }
  if (args.family == "distribution") {
    objper::DistributionConfig config;
    config.T = T;
    config.theta0 = args.theta0;
    config.grid_size = args.grid_size;
    config.amplitude = args.amplitude;
    config.sigma_amplitude = args.sigma_amplitude;
    if (args.noise) config.noise = *args.noise;
    config.seed = args.seed;
    return objper::run_monte_carlo(config, options);
  }
  throw objper::ValidationError("unknown family: " + args.family +
                                " (expected dirichlet, network, or distribution)");
}

int run_simulate(const SimulateArgs& args) {
  int replicates = args.reps;
  if (args.fast && replicates == 200) replicates = 50;

  if (!args.table.empty()) {
    if (args.family != "dirichlet")
      throw objper::ValidationError("--table is only available for the dirichlet family");
    if (args.table != "prob" && args.table != "range" && args.table != "mse")
      throw objper::ValidationError("--table must be prob, range, or mse");

    const std::vector<int> grid_T = {100, 240, 500};
    const std::vector<double> grid_alpha = {1.0, 0.5, 0.1};
    std::vector<std::vector<objper::MonteCarloReport>> cells(grid_alpha.size());
    json cell_docs = json::array();
    for (std::size_t a = 0; a < grid_alpha.size(); ++a) {
      for (int T : grid_T) {
        SimulateArgs cell = args;
        cell.T = T;
        cell.alpha = grid_alpha[a];
        objper::MonteCarloReport report = run_simulation(cell, replicates, T, grid_alpha[a]);
        cells[a].push_back(report);
        cell_docs.push_back(objper::monte_carlo_report_json(
            report, simulate_config_echo(cell, replicates), args.timings));
      }
    }

    char line[160];
    if (args.table == "mse") {
      std::printf("Mean squared error of the periodic component (%d replicates, %s criterion)\n",
                  replicates, args.criterion.c_str());
      std::printf("%-8s %10s %10s %10s\n", "", "alpha=1", "alpha=0.5", "alpha=0.1");
      for (std::size_t ti = 0; ti < grid_T.size(); ++ti) {
        std::snprintf(line, sizeof(line), "T=%d", grid_T[ti]);
        std::printf("%-8s %10.3f %10.3f %10.3f\n", line, cells[0][ti].mse.mean,
                    cells[1][ti].mse.mean, cells[2][ti].mse.mean);
      }
    } else {
      bool exact = args.table == "prob";
      std::printf("%s (%d replicates, %s criterion)\n",
                  exact ? "p(theta_hat = theta0)" : "p(theta0 - 4 <= theta_hat <= theta0 + 4)",
                  replicates, args.criterion.c_str());
      std::printf("%-10s %8s %8s %8s\n", "", "T=100", "T=240", "T=500");
      for (std::size_t a = 0; a < grid_alpha.size(); ++a) {
        std::snprintf(line, sizeof(line), "alpha=%g", grid_alpha[a]);
        auto value = [&](const objper::MonteCarloReport& r) {
          return exact ? r.p_equal(args.theta0)
                       : r.p_between(std::max(1, args.theta0 - 4), args.theta0 + 4);
        };
        std::printf("%-10s %8.3f %8.3f %8.3f\n", line, value(cells[a][0]), value(cells[a][1]),
                    value(cells[a][2]));
      }
    }
    if (!args.output.empty()) {
      json doc = {{"schema_version", objper::kSchemaVersion},
                  {"tool", {{"name", objper::kToolName}, {"version", objper::kToolVersion}}},
                  {"table", args.table},
                  {"cells", cell_docs}};
      emit(doc, args.output);
    }
    return 0;
  }

  objper::MonteCarloReport report = run_simulation(args, replicates, args.T, args.alpha);
  emit(objper::monte_carlo_report_json(report, simulate_config_echo(args, replicates),
                                       args.timings),
       args.output);
  return 0;
}

int classify_exit_code(const std::exception& e) {
  if (dynamic_cast<const objper::ValidationError*>(&e) ||
      dynamic_cast<const objper::ParseError*>(&e) ||
      dynamic_cast<const objper::DimensionError*>(&e) ||
      dynamic_cast<const objper::InvalidPointError*>(&e) ||
      dynamic_cast<const objper::InvalidCompositionError*>(&e) ||
      dynamic_cast<const objper::InvalidAdjacencyError*>(&e) ||
      dynamic_cast<const objper::InvalidRegularizerError*>(&e))
    return 2;
  return 3;
}

std::string error_type_name(const std::exception& e) {
  if (dynamic_cast<const objper::ParseError*>(&e)) return "ParseError";
  if (dynamic_cast<const objper::ValidationError*>(&e)) return "ValidationError";
  if (dynamic_cast<const objper::DimensionError*>(&e)) return "DimensionError";
  if (dynamic_cast<const objper::InvalidPointError*>(&e)) return "InvalidPointError";
  if (dynamic_cast<const objper::InvalidCompositionError*>(&e)) return "InvalidCompositionError";
  if (dynamic_cast<const objper::InvalidAdjacencyError*>(&e)) return "InvalidAdjacencyError";
  if (dynamic_cast<const objper::InvalidRegularizerError*>(&e)) return "InvalidRegularizerError";
  if (dynamic_cast<const objper::ConvergenceError*>(&e)) return "ConvergenceError";
  if (dynamic_cast<const objper::DegenerateConfigurationError*>(&e))
    return "DegenerateConfigurationError";
  if (dynamic_cast<const objper::DegenerateWeightsError*>(&e)) return "DegenerateWeightsError";
  if (dynamic_cast<const objper::ZeroRSSError*>(&e)) return "ZeroRSSError";
  if (dynamic_cast<const objper::Error*>(&e)) return "Error";
  return "InternalError";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Period estimation and periodic-component extraction for metric-space time series"};
  app.require_subcommand(1);

  const std::vector<std::string> spaces = {"sphere-composition", "laplacian", "wasserstein1d",
                                           "euclidean"};

  ScanArgs scan_args;
  CLI::App* cmd_scan = app.add_subcommand("scan", "Scan candidate periods and select one");
  cmd_scan->add_option("--input", scan_args.input, "Series file")->required();
  cmd_scan->add_option("--space", scan_args.space, "Space of the observations")
      ->required()
      ->check(CLI::IsMember(spaces));
  cmd_scan->add_option("--theta-max", scan_args.theta_max, "Largest candidate period");
  cmd_scan->add_option("--criterion", scan_args.criterion, "Information criterion")
      ->check(CLI::IsMember({"rss", "log-rss"}));
  cmd_scan->add_option("--g-override", scan_args.g_override, "Fixed regularizer g(T)");
  cmd_scan->add_option("--lambda-multipliers", scan_args.lambda_multipliers,
                       "Comma-separated multiples of the selected lambda for loss curves");
  cmd_scan->add_option("--output", scan_args.output, "Result file (stdout when omitted)");

  ScanArgs component_args;
  std::optional<int> fixed_period;
  CLI::App* cmd_component =
      app.add_subcommand("component", "Extract the periodic component");
  cmd_component->add_option("--input", component_args.input, "Series file")->required();
  cmd_component->add_option("--space", component_args.space, "Space of the observations")
      ->required()
      ->check(CLI::IsMember(spaces));
  cmd_component->add_option("--period", fixed_period, "Use this period instead of estimating");
  cmd_component->add_option("--theta-max", component_args.theta_max, "Largest candidate period");
  cmd_component->add_option("--criterion", component_args.criterion, "Information criterion")
      ->check(CLI::IsMember({"rss", "log-rss"}));
  cmd_component->add_option("--g-override", component_args.g_override, "Fixed regularizer g(T)");
  cmd_component->add_option("--output", component_args.output, "Result file (stdout when omitted)");

  ScanArgs icpath_args;
  CLI::App* cmd_icpath =
      app.add_subcommand("ic-path", "Report the lambda path and IC records without a component");
  cmd_icpath->add_option("--input", icpath_args.input, "Series file")->required();
  cmd_icpath->add_option("--space", icpath_args.space, "Space of the observations")
      ->required()
      ->check(CLI::IsMember(spaces));
  cmd_icpath->add_option("--theta-max", icpath_args.theta_max, "Largest candidate period");
  cmd_icpath->add_option("--criterion", icpath_args.criterion, "Information criterion")
      ->check(CLI::IsMember({"rss", "log-rss"}));
  cmd_icpath->add_option("--g-override", icpath_args.g_override, "Fixed regularizer g(T)");
  cmd_icpath->add_option("--output", icpath_args.output, "Result file (stdout when omitted)");

  SimulateArgs sim_args;
  CLI::App* cmd_simulate = app.add_subcommand("simulate", "Seeded Monte Carlo runs per family");
  cmd_simulate->add_option("family", sim_args.family, "dirichlet, network, or distribution")
      ->required();
  cmd_simulate->add_option("--T", sim_args.T, "Series length");
  cmd_simulate->add_option("--alpha", sim_args.alpha, "Dirichlet noise level");
  cmd_simulate->add_option("--theta0", sim_args.theta0, "True period");
  cmd_simulate->add_option("--nodes", sim_args.nodes, "Network node count");
  cmd_simulate->add_option("--amplitude", sim_args.amplitude, "Signal amplitude");
  cmd_simulate->add_option("--sigma-amplitude", sim_args.sigma_amplitude,
                           "Scale oscillation of the distribution family");
  cmd_simulate->add_option("--noise", sim_args.noise, "Noise scale (network/distribution)");
  cmd_simulate->add_option("--grid-size", sim_args.grid_size, "Quantile grid size");
  cmd_simulate->add_option("--reps", sim_args.reps, "Replicates");
  cmd_simulate->add_option("--seed", sim_args.seed, "Base seed");
  cmd_simulate->add_option("--criterion", sim_args.criterion, "Information criterion")
      ->check(CLI::IsMember({"rss", "log-rss"}));
  cmd_simulate->add_option("--theta-max", sim_args.theta_max, "Largest candidate period");
  cmd_simulate->add_option("--table", sim_args.table,
                           "Run the T x alpha grid and print a table (prob, range, or mse)");
  cmd_simulate->add_option("--output", sim_args.output, "Report file (stdout when omitted)");
  cmd_simulate->add_flag("--fast", sim_args.fast, "50 replicates instead of 200");
  cmd_simulate->add_flag("--noiseless", sim_args.noiseless,
                         "Dirichlet family: emit the exact mean sequence");
  cmd_simulate->add_flag("--timings", sim_args.timings, "Include wall-clock stats in the report");

  try {
    app.parse(argc, argv);

    if (cmd_scan->parsed()) {
      json echo;
      objper::ScanOutputs outputs = run_pipeline(scan_args, &echo);
      echo["command"] = "scan";
      emit(objper::build_result_json(outputs, echo), scan_args.output);
      return 0;
    }

    if (cmd_component->parsed()) {
      json doc;
      doc["schema_version"] = objper::kSchemaVersion;
      doc["tool"] = {{"name", objper::kToolName}, {"version", objper::kToolVersion}};
      if (fixed_period) {
        objper::ObjectSeries series =
            objper::parse_series(component_args.input, component_args.space);
        objper::PeriodicComponent comp = objper::extract_component(series, *fixed_period);
        json values = json::array();
        for (const objper::Point& p : comp.values) values.push_back(objper::point_to_json(p));
        doc["config"] = {{"command", "component"},
                         {"input", component_args.input},
                         {"space", component_args.space},
                         {"period", *fixed_period}};
        doc["series"] = {{"T", series.size()}, {"space", component_args.space}};
        doc["component"] = {{"period", comp.period},
                            {"phase_counts", comp.phase_counts},
                            {"values", std::move(values)}};
      } else {
        json echo;
        component_args.lambda_multipliers = "1";
        objper::ScanOutputs outputs = run_pipeline(component_args, &echo);
        echo["command"] = "component";
        doc = objper::build_result_json(outputs, echo);
        doc.erase("penalized_loss");
      }
      emit(doc, component_args.output);
      return 0;
    }

    if (cmd_icpath->parsed()) {
      json echo;
      icpath_args.lambda_multipliers = "1";
      objper::ScanOutputs outputs = run_pipeline(icpath_args, &echo);
      echo["command"] = "ic-path";
      json doc = objper::build_result_json(outputs, echo);
      doc.erase("component");
      doc.erase("penalized_loss");
      emit(doc, icpath_args.output);
      return 0;
    }

    if (cmd_simulate->parsed()) return run_simulate(sim_args);
    return 0;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << objper::error_json("UsageError", e.what()).dump() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << objper::error_json(error_type_name(e), e.what()).dump() << "\n";
    return classify_exit_code(e);
  }
}
