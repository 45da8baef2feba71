#include <cstdlib>
#include <filesystem>
#include <future>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lcone/config.hpp"
#include "lcone/envelope.hpp"
#include "lcone/errors.hpp"
#include "lcone/evolve.hpp"
#include "lcone/io.hpp"
#include "lcone/verify.hpp"

namespace {

namespace fs = std::filesystem;
using namespace lcone;

struct CommonArgs {
  std::string config_path;
  std::string out_dir;  // --out-dir flag, empty when absent
};

std::string resolve_out_dir(const CommonArgs& args, const RunConfig& run) {
  if (!args.out_dir.empty()) return args.out_dir;
  if (const char* env = std::getenv("LCONE_OUT_DIR"); env && *env) return env;
  return run.output.directory;
}

std::vector<double> region_distances(const Lattice& lat, const std::vector<int>& region) {
  std::vector<double> distances(static_cast<std::size_t>(lat.num_sites()));
  for (int j = 0; j < lat.num_sites(); ++j) {
    distances[static_cast<std::size_t>(j)] = lat.site_region_distance(j, region);
  }
  return distances;
}

int cmd_envelope(const CommonArgs& args) {
  RunConfig run = load_config(args.config_path);
  const ExperimentConfig& cfg = run.experiment;
  const Lattice& lat = *cfg.model.lattice;
  fs::path out(resolve_out_dir(args, run));

  EnvelopeParams params = make_params(lat, cfg.model.tau.sup_abs());
  Eigen::VectorXd alpha0 = initial_densities(cfg.model, cfg.initial);
  double n0 = alpha0.sum();

  Eigen::MatrixXd gamma(static_cast<Eigen::Index>(cfg.times.size()), lat.num_sites());
  for (std::size_t i = 0; i < cfg.times.size(); ++i) {
    gamma.row(static_cast<Eigen::Index>(i)) =
        envelope_ode(lat, cfg.model.tau.sup_abs(), alpha0, cfg.times[i]).transpose();
  }
  Eigen::MatrixXd bound = analytic_bound_matrix(
      cfg.times, region_distances(lat, cfg.initial.region), params, n0);

  write_constants_json((out / "constants.json").string(), params);
  write_envelope_csv((out / "envelope.csv").string(), cfg.times, gamma, bound);
  std::cout << "wrote " << (out / "constants.json").string() << " and "
            << (out / "envelope.csv").string() << "\n";
  return 0;
}

int cmd_simulate(const CommonArgs& args) {
  RunConfig run = load_config(args.config_path);
  fs::path out(resolve_out_dir(args, run));

  SimulationTrace trace = run_simulation(run.experiment);
  if (run.output.csv) write_trace_csv((out / "trace.csv").string(), trace);
  if (run.output.json) write_trace_json((out / "trace.json").string(), trace);
  std::cout << "wrote simulation trace under " << out.string() << "\n";
  return 0;
}

void write_verification(const fs::path& out, const RunConfig& run, const SimulationTrace& trace,
                        const VerificationReport& report) {
  const ExperimentConfig& cfg = run.experiment;
  const Lattice& lat = *cfg.model.lattice;
  Eigen::MatrixXd gamma = envelope_curves(lat, cfg.model.tau.sup_abs(), trace);
  Eigen::MatrixXd bound = analytic_bound_matrix(
      trace.times, region_distances(lat, cfg.initial.region), report.params, report.n0);

  if (run.output.csv) {
    write_trace_csv((out / "trace.csv").string(), trace, &gamma, &bound);
    write_envelope_csv((out / "envelope.csv").string(), trace.times, gamma, bound);
  }
  if (run.output.json) write_trace_json((out / "trace.json").string(), trace);
  write_constants_json((out / "constants.json").string(), report.params);
  write_report_json((out / "report.json").string(), report);
  write_report_txt((out / "report.txt").string(), report);
}

int cmd_verify(const CommonArgs& args) {
  RunConfig run = load_config(args.config_path);
  fs::path out(resolve_out_dir(args, run));

  auto [trace, report] = run_experiment(run.experiment);
  write_verification(out, run, trace, report);

  int failed = 0;
  for (const CheckResult& c : report.checks) {
    if (c.applicable && !c.passed) ++failed;
  }
  if (failed > 0) {
    std::cerr << failed << " gated check(s) failed; see " << (out / "report.txt").string() << "\n";
    return 1;
  }
  std::cout << "all gated checks passed; report under " << out.string() << "\n";
  return 0;
}

ExperimentConfig apply_sweep_value(const ExperimentConfig& base, const std::string& parameter,
                                   double value) {
  ExperimentConfig cfg = base;
  if (parameter == "tau") {
    cfg.model.tau = TauSchedule::constant(value);
  } else if (parameter == "U") {
    for (double& u : cfg.model.U) u = value;
  } else {
    cfg.model.loss_rate = value;
    cfg.dissipative = cfg.dissipative || value > 0.0;
  }
  return cfg;
}

int cmd_sweep(const CommonArgs& args) {
  RunConfig run = load_config(args.config_path);
  if (run.sweep.parameter.empty()) {
    throw ConfigError("sweep: config has no sweep block");
  }
  fs::path out(resolve_out_dir(args, run));

  std::vector<std::future<std::pair<SimulationTrace, VerificationReport>>> futures;
  futures.reserve(run.sweep.values.size());
  for (double value : run.sweep.values) {
    ExperimentConfig cfg = apply_sweep_value(run.experiment, run.sweep.parameter, value);
    futures.push_back(std::async(std::launch::async,
                                 [cfg = std::move(cfg)] { return run_experiment(cfg); }));
  }

  std::vector<SweepRow> rows;
  bool all_passed = true;
  for (std::size_t i = 0; i < futures.size(); ++i) {
    std::pair<SimulationTrace, VerificationReport> result;
    try {
      result = futures[i].get();
    } catch (const std::exception& e) {
      throw std::runtime_error("sweep " + run.sweep.parameter + "=" +
                               format_g17(run.sweep.values[i]) + ": " + e.what());
    }
    RunConfig value_run = run;
    value_run.experiment = apply_sweep_value(run.experiment, run.sweep.parameter,
                                             run.sweep.values[i]);
    fs::path value_dir = out / ("value_" + std::to_string(i));
    write_verification(value_dir, value_run, result.first, result.second);

    SweepRow row;
    row.value = run.sweep.values[i];
    row.passed = result.second.all_passed();
    row.v_bound = result.second.params.v;
    row.v_emp = result.second.velocity.conclusive ? result.second.velocity.v_emp : 0.0;
    row.alpha_over_gamma = result.second.alpha_over_gamma;
    row.alpha_over_cone = result.second.alpha_over_cone;
    rows.push_back(row);
    all_passed = all_passed && row.passed;
  }
  write_sweep_csv((out / "sweep.csv").string(), run.sweep.parameter, rows);

  if (!all_passed) {
    std::cerr << "one or more sweep values failed gated checks; see "
              << (out / "sweep.csv").string() << "\n";
    return 1;
  }
  std::cout << "sweep complete; table at " << (out / "sweep.csv").string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lcone: lattice light-cone simulation and bound verification"};
  app.require_subcommand(1);

  CommonArgs envelope_args, simulate_args, verify_args, sweep_args;
  auto add_common = [](CLI::App* sub, CommonArgs& args) {
    sub->add_option("config", args.config_path, "JSON run configuration")->required();
    sub->add_option("--out-dir", args.out_dir,
                    "output directory (overrides LCONE_OUT_DIR and the config)");
  };
  CLI::App* envelope =
      app.add_subcommand("envelope", "bound-side constants and envelope curves, no simulation");
  add_common(envelope, envelope_args);
  CLI::App* simulate = app.add_subcommand("simulate", "evolve the configured state, write traces");
  add_common(simulate, simulate_args);
  CLI::App* verify =
      app.add_subcommand("verify", "simulate, compute envelopes, check every asserted inequality");
  add_common(verify, verify_args);
  CLI::App* sweep = app.add_subcommand("sweep", "verify across a parameter axis (tau, U, lambda)");
  add_common(sweep, sweep_args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (envelope->parsed()) return cmd_envelope(envelope_args);
    if (simulate->parsed()) return cmd_simulate(simulate_args);
    if (verify->parsed()) return cmd_verify(verify_args);
    return cmd_sweep(sweep_args);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const ResourceLimitError& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
