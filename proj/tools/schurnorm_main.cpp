// schurnorm: Schur-test norm estimates for delay-equation transfer kernels.
//
//   schurnorm estimate  --config run.json --omega 0
//   schurnorm sweep     --config run.json [--resume]
//   schurnorm baselines --config run.json
//   schurnorm plot      --sweep out/sweep.csv --baselines out/baselines.json --output out
//
// Exit codes: 0 success, 1 other error, 2 config error,
// 3 degenerate denominator, 4 solver failure.

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <optional>

#include "schurnorm/config.hpp"
#include "schurnorm/errors.hpp"
#include "schurnorm/plot.hpp"
#include "schurnorm/sweep.hpp"

namespace {

enum Exit { kOk = 0, kOther = 1, kConfig = 2, kDegenerate = 3, kSolver = 4 };

void log_line(const std::string& msg) { std::cerr << "schurnorm: " << msg << '\n'; }

schurnorm::RunConfig make_config(const std::string& path, const std::optional<std::string>& output,
                                 const std::optional<std::uint64_t>& seed) {
  schurnorm::RunConfig c = path.empty() ? schurnorm::RunConfig{} : schurnorm::load_config(path);
  if (output) c.output_dir = *output;
  if (seed) c.seed = *seed;
  schurnorm::validate(c);
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Schur-test norm estimates for delay-equation transfer kernels"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::string> output;
  std::optional<std::uint64_t> seed;
  double omega = 0.0;
  bool resume = false;
  schurnorm::PlotInputs plot_in;
  std::string plot_out = ".";

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON run configuration (defaults if omitted)");
    sub->add_option("--output", output, "Output directory (overrides the config)");
    sub->add_option("--seed", seed, "Model initialization seed (overrides the config)");
  };

  CLI::App* est = app.add_subcommand("estimate", "Optimize the Schur test at one frequency");
  add_common(est);
  est->add_option("--omega", omega, "Frequency")->required();

  CLI::App* sweep = app.add_subcommand("sweep", "Warm-started sweep over the frequency range");
  add_common(sweep);
  sweep->add_flag("--resume", resume, "Continue after the last completed frequency");

  CLI::App* base = app.add_subcommand("baselines", "Frequency-independent reference norms");
  add_common(base);

  CLI::App* plot = app.add_subcommand("plot", "Render SVG figures from result files");
  plot->add_option("--sweep", plot_in.sweep_csv, "sweep.csv");
  plot->add_option("--baselines", plot_in.baselines_json, "baselines.json");
  plot->add_option("--history", plot_in.history_csv, "history.csv");
  plot->add_option("--profiles", plot_in.profiles_csv, "profiles.csv");
  plot->add_option("--output", plot_out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (est->parsed()) {
      const auto cfg = make_config(config_path, output, seed);
      const auto r = schurnorm::cmd_estimate(cfg, omega, log_line);
      std::cout << schurnorm::kSweepHeader << '\n' << schurnorm::csv_row(r.record) << '\n';
      return r.record.failed ? kSolver : kOk;
    }
    if (sweep->parsed()) {
      const auto cfg = make_config(config_path, output, seed);
      const auto s = schurnorm::cmd_sweep(cfg, resume, log_line);
      log_line(std::to_string(s.computed) + " computed, " + std::to_string(s.resumed) +
               " resumed, " + std::to_string(s.failures) + " solver failures");
      return s.failures > 0 ? kSolver : kOk;
    }
    if (base->parsed()) {
      const auto cfg = make_config(config_path, output, seed);
      std::cout << schurnorm::baselines_to_json(schurnorm::cmd_baselines(cfg));
      return kOk;
    }
    for (const auto& path : schurnorm::cmd_plot(plot_in, plot_out)) {
      std::cout << path.string() << '\n';
    }
    return kOk;
  } catch (const schurnorm::ConfigError& e) {
    log_line(std::string("config error: ") + e.what());
    return kConfig;
  } catch (const schurnorm::DegenerateDenominator& e) {
    log_line(e.what());
    return kDegenerate;
  } catch (const schurnorm::SolverFailure& e) {
    log_line(e.what());
    return kSolver;
  } catch (const std::exception& e) {
    log_line(e.what());
    return kOther;
  }
}
