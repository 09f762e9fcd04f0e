#include "lpvff/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "lpvff/errors.hpp"

namespace lpvff {

void ControllerParams::validate() const {
  if (!(kp > 0.0)) throw InvalidArgument("controller.kp must be > 0");
  if (!(kd >= 0.0)) throw InvalidArgument("controller.kd must be >= 0");
}

std::pair<double, double> tracking_metrics(std::span<const double> e, double dt) {
  double peak = 0.0;
  double sum_sq = 0.0;
  for (double v : e) {
    peak = std::max(peak, std::abs(v));
    sum_sq += v * v;
  }
  return {peak, std::sqrt(sum_sq * dt)};
}

TrackingResult run_closed_loop(const Trajectory& traj, std::span<const double> u_ff,
                               const ControllerParams& ctrl, const PlantParams& plant,
                               const MeasurementNoise& noise) {
  traj.validate();
  ctrl.validate();
  const std::size_t n = traj.size();
  if (u_ff.size() != n) throw DimensionError("run_closed_loop: feedforward length mismatch");

  double stroke = 0.0;
  for (double r : traj.r0) stroke = std::max(stroke, std::abs(r - traj.r0.front()));
  if (stroke == 0.0) stroke = (plant.rho_max - plant.rho_min) * plant.ell;
  const double error_bound = 10.0 * stroke;

  std::mt19937_64 rng(noise.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  TrackingResult res;
  TrackingTraces& tr = res.traces;
  for (auto* v : {&tr.t, &tr.r0, &tr.y, &tr.e, &tr.u_ff, &tr.u_fb, &res.y_measured}) {
    v->resize(n);
  }

  PlantState s = rest_state(traj.r0.front(), plant);
  for (std::size_t i = 0; i < n; ++i) {
    const double y_meas = noise.stddev > 0.0 ? s.y + noise.stddev * gauss(rng) : s.y;
    const double e = traj.r0[i] - s.y;
    if (!(std::abs(e) <= error_bound)) {
      throw InstabilityError("tracking error " + std::to_string(e) + " at sample " +
                             std::to_string(i) + " exceeds 10x stroke");
    }
    const double u_fb = ctrl.kp * (traj.r0[i] - y_meas) + ctrl.kd * (traj.r1[i] - s.y_dot);

    tr.t[i] = traj.time(i);
    tr.r0[i] = traj.r0[i];
    tr.y[i] = s.y;
    tr.e[i] = e;
    tr.u_ff[i] = u_ff[i];
    tr.u_fb[i] = u_fb;
    res.y_measured[i] = y_meas;

    if (i + 1 == n) break;
    StepInput u = StepInput::ramp(u_ff[i], u_ff[i + 1]);
    u.begin += u_fb;
    u.mid += u_fb;
    u.end += u_fb;
    try {
      s = rk4_step(s, u, traj.dt, plant);
    } catch (const DomainError& err) {
      throw DomainError("sample " + std::to_string(i) + ": " + err.what());
    }
    if (!s.finite()) {
      throw NonfiniteStateError("closed loop state not finite after sample " +
                                std::to_string(i));
    }
  }
  std::tie(res.e_max, res.e_2norm) = tracking_metrics(tr.e, traj.dt);
  return res;
}

TrackingResult run_closed_loop(const Trajectory& traj, const FFModel* model,
                               const ControllerParams& ctrl, const PlantParams& plant,
                               const MeasurementNoise& noise) {
  const std::vector<double> u_ff =
      model ? synthesize_ff(*model, traj, plant.ell) : std::vector<double>(traj.size(), 0.0);
  return run_closed_loop(traj, u_ff, ctrl, plant, noise);
}

ExperimentLog to_experiment_log(const Trajectory& traj, const TrackingResult& run,
                                const PlantParams& plant) {
  ExperimentLog log;
  log.dt = traj.dt;
  log.trajectory = traj;
  const std::size_t n = run.traces.t.size();
  log.u_total.resize(n);
  log.rho.resize(n);
  log.y = run.y_measured;
  for (std::size_t i = 0; i < n; ++i) {
    log.u_total[i] = run.traces.u_ff[i] + run.traces.u_fb[i];
    log.rho[i] = std::clamp(plant.rho_of(log.y[i]), plant.rho_min, plant.rho_max);
  }
  return log;
}

std::vector<TableRow> compare_table(const TrackingResult& baseline,
                                    const TrackingResult& developed) {
  const auto& tb = baseline.traces.t;
  const auto& td = developed.traces.t;
  if (tb.size() != td.size() || tb.size() < 2) {
    throw MismatchError("compare_table: runs have different horizons");
  }
  if (tb[1] - tb[0] != td[1] - td[0] || tb.back() != td.back()) {
    throw MismatchError("compare_table: runs have different sampling");
  }
  auto ratio = [](double num, double den) { return den > 0.0 ? num / den : 1.0; };
  return {
      {"baseline", 1.0, 1.0},
      {"developed", ratio(developed.e_max, baseline.e_max),
       ratio(developed.e_2norm, baseline.e_2norm)},
  };
}

std::vector<Figure3Row> figure3_data(const FFModel& model, const PlantParams& plant,
                                     std::size_t n_grid) {
  if (n_grid < 2) throw InvalidArgument("figure3_data: n_grid must be >= 2");
  const double span = plant.rho_max - plant.rho_min;
  const double lo = plant.rho_min + 0.05 * span;
  const double hi = plant.rho_max - 0.05 * span;
  std::vector<Figure3Row> rows(n_grid);
  for (std::size_t i = 0; i < n_grid; ++i) {
    const double rho =
        i + 1 == n_grid ? hi : lo + (hi - lo) * static_cast<double>(i) / (n_grid - 1);
    rows[i] = {rho, evaluate(model, rho).theta2, true_parameters(rho, plant).theta2};
  }
  return rows;
}

IdentificationResult identify_feedforward(const Trajectory& traj, const ControllerParams& ctrl,
                                          const PlantParams& plant,
                                          const IdentificationConfig& cfg) {
  if (cfg.iterations < 1) throw InvalidArgument("identification needs at least 1 iteration");
  IdentificationResult out;
  MeasurementNoise noise = cfg.noise;
  TrackingResult run = run_closed_loop(traj, nullptr, ctrl, plant, noise);
  for (int it = 0; it < cfg.iterations; ++it) {
    out.last_log = to_experiment_log(traj, run, plant);
    LearnResult fit = learn(out.last_log, cfg.learn);
    out.reports.push_back(fit.report);
    out.model = std::move(fit.model);
    if (it + 1 < cfg.iterations) {
      ++noise.seed;
      run = run_closed_loop(traj, &out.model, ctrl, plant, noise);
    }
  }
  return out;
}

LearnConfig default_learn_config(const PlantParams& plant, std::size_t centers, double lambda) {
  LearnConfig cfg;
  cfg.spec1 = KernelSpec::squared_exponential(1e-6, 100.0);
  cfg.spec2 = KernelSpec::squared_exponential(1e-17, 0.15) + KernelSpec::periodic(1e-17, 1.0, 5.0);
  cfg.centers = uniform_centers(plant.rho_min, plant.rho_max, centers);
  cfg.lambda = lambda;
  cfg.ell = plant.ell;
  cfg.rho_min = plant.rho_min;
  cfg.rho_max = plant.rho_max;
  return cfg;
}

LearnConfig baseline_learn_config(const LearnConfig& developed) {
  LearnConfig cfg = developed;
  cfg.spec1 = KernelSpec::constant(developed.spec1.total_variance());
  cfg.spec2 = KernelSpec::constant(developed.spec2.total_variance());
  cfg.centers = uniform_centers(developed.rho_min, developed.rho_max, 1);
  return cfg;
}

}  // namespace lpvff
