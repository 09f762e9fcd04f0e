// Command-line driver: simulate, learn, evaluate, config.
//
// Exit codes: 0 ok, 2 config/parse/usage, 3 runtime (instability, domain),
// 4 solver factorization, 5 model/config mismatch.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "lpvff/config.hpp"
#include "lpvff/csv.hpp"
#include "lpvff/errors.hpp"
#include "lpvff/text.hpp"

namespace fs = std::filesystem;
using namespace lpvff;

namespace {

enum Exit { kOk = 0, kConfig = 2, kRuntime = 3, kSolver = 4, kMismatch = 5 };

struct Options {
  std::string config_path;
  std::string model_path;
  std::string out_dir;
  bool lambda_grid = false;
};

RunConfig effective_config(const Options& opt) {
  RunConfig cfg = opt.config_path.empty() ? RunConfig{} : load_config(opt.config_path);
  if (const char* env = std::getenv("LPVFF_OUTPUT_DIR"); env && *env) cfg.output_dir = env;
  if (!opt.out_dir.empty()) cfg.output_dir = opt.out_dir;
  if (opt.lambda_grid) cfg.kernels.lambda_grid = true;
  return cfg;
}

fs::path prepare_output(const RunConfig& cfg) {
  const fs::path dir(cfg.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw ParseError("output.dir", 0, "cannot create output directory '" + cfg.output_dir + "'");
  }
  return dir;
}

int cmd_simulate(const Options& opt) {
  const RunConfig cfg = effective_config(opt);
  const fs::path dir = prepare_output(cfg);
  const Trajectory traj = make_trajectory(cfg);
  const TrackingResult run = run_closed_loop(traj, nullptr, cfg.controller, cfg.plant,
                                             {cfg.noise_std, cfg.seed});
  write_file((dir / "traces.csv").string(), traces_csv(run.traces));
  write_file((dir / "trajectory.csv").string(), trajectory_csv(traj));
  std::printf("e_max    %s m\ne_2norm  %s m\n", format_double(run.e_max).c_str(),
              format_double(run.e_2norm).c_str());
  std::printf("wrote %s\n", (dir / "traces.csv").string().c_str());
  return kOk;
}

int cmd_learn(const Options& opt) {
  const RunConfig cfg = effective_config(opt);
  const fs::path dir = prepare_output(cfg);
  const Trajectory traj = make_trajectory(cfg);
  const IdentificationResult id = identify_feedforward(
      traj, cfg.controller, cfg.plant, make_identification_config(cfg));

  const fs::path model_path = opt.model_path.empty() ? dir / "model.txt" : fs::path(opt.model_path);
  save_model(id.model, model_path.string());
  write_file((dir / "figure3.csv").string(), figure3_csv(figure3_data(id.model, cfg.plant, 81)));
  write_file((dir / "effective_config.ini").string(), dump_config(cfg));

  for (std::size_t i = 0; i < id.reports.size(); ++i) {
    const LearnReport& r = id.reports[i];
    std::printf("iteration %zu: training residual %s N m (rms), lambda %s\n", i + 1,
                format_double(r.training_rms).c_str(), format_double(r.lambda).c_str());
  }
  const LearnReport& last = id.reports.back();
  if (!last.lambda_scores.empty()) {
    std::printf("chosen lambda %s (held-out rms %s)\n", format_double(last.lambda).c_str(),
                format_double([&] {
                  for (const auto& [l, s] : last.lambda_scores) {
                    if (l == last.lambda) return s;
                  }
                  return 0.0;
                }()).c_str());
  }
  if (last.low_coverage) {
    std::fprintf(stderr, "warning: experiment covers less than half of the rho domain\n");
  }
  std::printf("wrote %s\n", model_path.string().c_str());
  return kOk;
}

void check_model_domain(const FFModel& model, const RunConfig& cfg, const Trajectory& traj) {
  const double lo = cfg.plant.rho_min;
  const double hi = cfg.plant.rho_max;
  for (double c : model.centers) {
    if (c < lo || c > hi) {
      throw MismatchError("model center " + format_double(c) + " outside plant rho domain [" +
                          format_double(lo) + ", " + format_double(hi) + "]");
    }
  }
  for (double r : traj.r0) {
    const double rho = cfg.plant.rho_of(r);
    if (rho < model.rho_min || rho > model.rho_max) {
      throw MismatchError("trajectory reaches rho = " + format_double(rho) +
                          " outside the model domain [" + format_double(model.rho_min) + ", " +
                          format_double(model.rho_max) + "]");
    }
  }
}

int cmd_evaluate(const Options& opt) {
  const RunConfig cfg = effective_config(opt);
  const fs::path dir = prepare_output(cfg);
  const std::string model_path =
      opt.model_path.empty() ? (dir / "model.txt").string() : opt.model_path;
  const FFModel model = load_model(model_path);
  const Trajectory traj = make_trajectory(cfg);
  check_model_domain(model, cfg, traj);

  IdentificationConfig base_cfg = make_identification_config(cfg);
  base_cfg.learn = baseline_learn_config(base_cfg.learn);
  const IdentificationResult base = identify_feedforward(traj, cfg.controller, cfg.plant, base_cfg);

  const MeasurementNoise noise{cfg.noise_std, cfg.seed};
  const TrackingResult rb = run_closed_loop(traj, &base.model, cfg.controller, cfg.plant, noise);
  const TrackingResult rd = run_closed_loop(traj, &model, cfg.controller, cfg.plant, noise);
  const auto table = compare_table(rb, rd);

  write_file((dir / "table.csv").string(), table_csv(table));
  write_file((dir / "table.txt").string(), table_text(table));
  write_file((dir / "traces_baseline.csv").string(), traces_csv(rb.traces));
  write_file((dir / "traces_developed.csv").string(), traces_csv(rd.traces));
  std::fputs(table_text(table).c_str(), stdout);
  return kOk;
}

int cmd_config(const Options& opt) {
  std::fputs(dump_config(effective_config(opt)).c_str(), stdout);
  return kOk;
}

int report(const char* kind, const std::exception& e, int code) {
  std::fprintf(stderr, "lpvff: %s: %s\n", kind, e.what());
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Position-dependent feedforward learning for a belt-driven carriage"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&opt](CLI::App* sub) {
    sub->add_option("--config", opt.config_path, "INI config file (defaults when omitted)");
    sub->add_option("--out", opt.out_dir,
                    "Output directory (overrides LPVFF_OUTPUT_DIR and output.dir)");
  };
  CLI::App* sim = app.add_subcommand("simulate", "Feedback-only closed-loop run");
  add_common(sim);
  CLI::App* lrn = app.add_subcommand("learn", "Identify the feedforward model");
  add_common(lrn);
  lrn->add_option("--model", opt.model_path, "Model file to write (default <out>/model.txt)");
  lrn->add_flag("--lambda-grid", opt.lambda_grid, "Pick lambda from a decade ladder");
  CLI::App* ev = app.add_subcommand("evaluate", "Compare against the position-independent baseline");
  add_common(ev);
  ev->add_option("--model", opt.model_path, "Model file (default <out>/model.txt)");
  CLI::App* cf = app.add_subcommand("config", "Print the effective config");
  add_common(cf);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfig;
  }

  try {
    if (sim->parsed()) return cmd_simulate(opt);
    if (lrn->parsed()) return cmd_learn(opt);
    if (ev->parsed()) return cmd_evaluate(opt);
    return cmd_config(opt);
  } catch (const ParseError& e) {
    return report("config error", e, kConfig);
  } catch (const InvalidArgument& e) {
    return report("config error", e, kConfig);
  } catch (const MismatchError& e) {
    return report("mismatch", e, kMismatch);
  } catch (const FactorizationError& e) {
    return report("solver failure", e, kSolver);
  } catch (const std::exception& e) {
    return report("runtime error", e, kRuntime);
  }
}
