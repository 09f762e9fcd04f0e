#include <cmath>
#include <vector>

#include <doctest.h>

#include "lpvff/errors.hpp"
#include "lpvff/evaluation.hpp"
#include "oracles.hpp"

using namespace lpvff;

namespace {

Trajectory default_motion() { return point_to_point(0.15, 0.85, 0.5, 1e-4, 0.7); }

FFModel zero_model(const PlantParams& p) {
  FFModel m;
  m.centers = uniform_centers(p.rho_min, p.rho_max, 5);
  m.alpha1.assign(5, 0.0);
  m.alpha2.assign(5, 0.0);
  m.spec1 = KernelSpec::squared_exponential(1.0, 0.2);
  m.spec2 = KernelSpec::squared_exponential(1.0, 0.2);
  m.rho_min = p.rho_min;
  m.rho_max = p.rho_max;
  m.lambda = 1.0;
  return m;
}

const IdentificationResult& default_identification() {
  static const IdentificationResult id = [] {
    const PlantParams p;
    IdentificationConfig cfg;
    cfg.learn = default_learn_config(p);
    return identify_feedforward(default_motion(), ControllerParams{}, p, cfg);
  }();
  return id;
}

}  // namespace

TEST_CASE("controller validation") {
  CHECK_NOTHROW(ControllerParams{}.validate());
  CHECK_THROWS_AS((ControllerParams{0.0, 1.0}.validate()), InvalidArgument);
  CHECK_THROWS_AS((ControllerParams{1.0, -1.0}.validate()), InvalidArgument);
}

TEST_CASE("parked reference at equilibrium stays error free") {
  const PlantParams p;
  const Trajectory t = constant_trajectory(0.4, 1e-4, 2000);
  const TrackingResult r = run_closed_loop(t, nullptr, ControllerParams{}, p);
  for (std::size_t i = 0; i < t.size(); ++i) {
    CHECK(std::abs(r.traces.e[i]) < 1e-15);
    CHECK(std::abs(r.traces.u_fb[i]) < 1e-13);
  }
  CHECK(r.e_max < 1e-15);
}

TEST_CASE("metrics are recomputable from the traces") {
  const PlantParams p;
  const Trajectory t = default_motion();
  const TrackingResult r = run_closed_loop(t, nullptr, ControllerParams{}, p);
  double peak = 0.0, sq = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    CHECK(r.traces.e[i] == r.traces.r0[i] - r.traces.y[i]);
    CHECK(r.traces.t[i] == t.time(i));
    peak = std::max(peak, std::abs(r.traces.e[i]));
    sq += r.traces.e[i] * r.traces.e[i];
  }
  CHECK(std::abs(r.e_max - peak) <= 1e-12 * peak);
  CHECK(std::abs(r.e_2norm - std::sqrt(sq * t.dt)) <= 1e-12 * r.e_2norm);
}

TEST_CASE("closed loop runs are deterministic") {
  const PlantParams p;
  const Trajectory t = default_motion();
  const MeasurementNoise noise{1e-6, 42};
  const TrackingResult a = run_closed_loop(t, nullptr, ControllerParams{}, p, noise);
  const TrackingResult b = run_closed_loop(t, nullptr, ControllerParams{}, p, noise);
  CHECK(a.traces.y == b.traces.y);
  CHECK(a.traces.u_fb == b.traces.u_fb);
  CHECK(a.e_max == b.e_max);
  CHECK(a.e_2norm == b.e_2norm);
}

TEST_CASE("doubling the proportional gain reduces the feedback-only error") {
  const PlantParams p;
  const Trajectory t = default_motion();
  const ControllerParams base;
  const ControllerParams stiff{2.0 * base.kp, base.kd};
  CHECK(run_closed_loop(t, nullptr, stiff, p).e_max < run_closed_loop(t, nullptr, base, p).e_max);
}

TEST_CASE("diverging loop raises an instability error") {
  const PlantParams p;
  const Trajectory t = point_to_point(0.5, 0.51, 0.1, 1e-4, 2.0);
  CHECK_THROWS_AS(run_closed_loop(t, nullptr, ControllerParams{400.0, 0.1}, p), InstabilityError);
}

TEST_CASE("feedforward length must match the trajectory") {
  const PlantParams p;
  const Trajectory t = constant_trajectory(0.4, 1e-4, 10);
  const std::vector<double> u(9, 0.0);
  CHECK_THROWS_AS(run_closed_loop(t, u, ControllerParams{}, p), DimensionError);
}

TEST_CASE("comparison table normalization") {
  const PlantParams p;
  const Trajectory t = default_motion();
  const TrackingResult none = run_closed_loop(t, nullptr, ControllerParams{}, p);
  const auto self = compare_table(none, none);
  REQUIRE(self.size() == 2);
  CHECK(self[0].e_max_ratio == 1.0);
  CHECK(self[0].e_2_ratio == 1.0);
  CHECK(self[1].e_max_ratio == 1.0);
  CHECK(self[1].e_2_ratio == 1.0);
  CHECK(self[1].name == "developed");

  const FFModel zero = zero_model(p);
  const auto z = compare_table(none, run_closed_loop(t, &zero, ControllerParams{}, p));
  CHECK(z[1].e_max_ratio == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(z[1].e_2_ratio == doctest::Approx(1.0).epsilon(1e-12));

  const TrackingResult shorter =
      run_closed_loop(point_to_point(0.15, 0.85, 0.5, 1e-4, 0.6), nullptr, ControllerParams{}, p);
  CHECK_THROWS_AS(compare_table(none, shorter), MismatchError);
}

TEST_CASE("figure data grid and truth column") {
  const PlantParams p;
  const FFModel zero = zero_model(p);
  const auto two = figure3_data(zero, p, 2);
  REQUIRE(two.size() == 2);
  CHECK(two[0].rho == doctest::Approx(0.14).epsilon(1e-14));
  CHECK(two[1].rho == doctest::Approx(0.86).epsilon(1e-14));
  const auto rows = figure3_data(zero, p, 200);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double dk = stiffness(rows[i].rho, p) - stiffness(rows[i - 1].rho, p);
    if (dk > 0) CHECK(rows[i].theta2_true < rows[i - 1].theta2_true);
    CHECK(rows[i].theta2_learned == 0.0);
  }
  CHECK_THROWS_AS(figure3_data(zero, p, 1), InvalidArgument);
}

TEST_CASE("experiment log packs the applied input") {
  const PlantParams p;
  const Trajectory t = default_motion();
  const TrackingResult r = run_closed_loop(t, nullptr, ControllerParams{}, p);
  const ExperimentLog log = to_experiment_log(t, r, p);
  CHECK_NOTHROW(log.validate());
  for (std::size_t i = 0; i < t.size(); i += 97) {
    CHECK(log.u_total[i] == r.traces.u_ff[i] + r.traces.u_fb[i]);
    CHECK(log.rho[i] == r.y_measured[i] / p.ell);
  }
}

TEST_CASE("baseline config is a single constant-kernel center") {
  const PlantParams p;
  const LearnConfig dev = default_learn_config(p);
  const LearnConfig base = baseline_learn_config(dev);
  CHECK(base.centers == std::vector<double>{0.5});
  REQUIRE(base.spec1.terms.size() == 1);
  CHECK(base.spec1.terms[0].family == KernelFamily::Constant);
  CHECK(base.spec2.terms[0].family == KernelFamily::Constant);
  CHECK(base.lambda == dev.lambda);
}

TEST_CASE("learned feedforward beats feedback alone on the default scenario") {
  const PlantParams p;
  const Trajectory t = default_motion();
  const IdentificationResult& id = default_identification();
  CHECK(id.reports.size() == 5);
  const TrackingResult none = run_closed_loop(t, nullptr, ControllerParams{}, p);
  const TrackingResult dev = run_closed_loop(t, &id.model, ControllerParams{}, p);
  CHECK(dev.e_max < none.e_max);
  CHECK(oracle::theta2_rms_error(id.model, p) < 0.05);
}

TEST_CASE("identification is robust to position measurement noise") {
  const PlantParams p;
  IdentificationConfig cfg;
  cfg.learn = default_learn_config(p);
  cfg.noise = {1e-6, 7};
  const IdentificationResult noisy =
      identify_feedforward(default_motion(), ControllerParams{}, p, cfg);
  const FFModel& clean = default_identification().model;
  double acc = 0.0;
  const int n = 121;
  for (int i = 0; i < n; ++i) {
    const double rho = 0.2 + 0.6 * i / (n - 1);
    const double c = evaluate(clean, rho).theta2;
    const double d = (evaluate(noisy.model, rho).theta2 - c) / c;
    acc += d * d;
  }
  CHECK(std::sqrt(acc / n) < 0.2);
  CHECK(oracle::theta2_rms_error(noisy.model, p) < 0.2);
}
