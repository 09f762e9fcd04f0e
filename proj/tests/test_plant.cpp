#include <cmath>
#include <vector>

#include <doctest.h>

#include "lpvff/errors.hpp"
#include "lpvff/plant.hpp"
#include "oracles.hpp"

using namespace lpvff;

namespace {

// Parameters of the small reference drive used in hand calculations.
PlantParams hand_plant() {
  PlantParams p;
  p.J = 1e-5;
  p.d = 0.5;
  return p;
}

// RK4 driven with a smooth torque evaluated at the exact stage times.
PlantState forced_run(const PlantParams& p, double dt, double t_end) {
  auto u = [](double t) { return 2e-3 * std::sin(40.0 * t) + 1e-3 * std::cos(90.0 * t); };
  PlantState s = rest_state(0.4, p);
  s.y_dot = 0.05;
  const long n = std::lround(t_end / dt);
  for (long i = 0; i < n; ++i) {
    const double t = i * dt;
    s = rk4_step(s, {u(t), u(t + 0.5 * dt), u(t + dt)}, dt, p);
  }
  return s;
}

double distance(const PlantState& a, const PlantState& b, const PlantParams& p) {
  return std::hypot(a.y - b.y, p.r_pulley * (a.phi - b.phi));
}

}  // namespace

TEST_CASE("stiffness at mid stroke matches hand evaluation") {
  const PlantParams p;
  const double rational = 2.0 * 0.5 * 1000.0 / (0.5 * 0.5);
  CHECK(rational == doctest::Approx(4000.0));
  CHECK(stiffness(0.5, p) == doctest::Approx(rational + 100.0 * std::sin(2.5)).epsilon(1e-14));
  CHECK(stiffness(0.5, p) == doctest::Approx(4059.847).epsilon(1e-6));
}

TEST_CASE("rational stiffness term is symmetric about L / ell") {
  const PlantParams p;
  const double a = stiffness(0.2, p) - 100.0 * std::sin(1.0);
  const double b = stiffness(0.8, p) - 100.0 * std::sin(4.0);
  CHECK(a == doctest::Approx(b).epsilon(1e-14));
}

TEST_CASE("stiffness outside the domain is a domain error") {
  const PlantParams p;
  CHECK_THROWS_AS(stiffness(p.rho_min - 1e-9, p), DomainError);
  CHECK_THROWS_AS(stiffness(p.rho_max + 1e-9, p), DomainError);
  CHECK_THROWS_AS(belt_stiffness(0.95, p), DomainError);
}

TEST_CASE("stiffness is positive on a dense grid with default parameters") {
  const PlantParams p;
  for (int i = 0; i <= 2000; ++i) {
    const double rho = p.rho_min + (p.rho_max - p.rho_min) * i / 2000.0;
    REQUIRE(stiffness(rho, p) > 0.0);
  }
}

TEST_CASE("parameter validation names the violated bound") {
  PlantParams p;
  p.rho_max = 1.5;
  try {
    p.validate();
    FAIL("expected InvalidArgument");
  } catch (const InvalidArgument& e) {
    CHECK(std::string(e.what()).find("plant.rho_max") != std::string::npos);
    CHECK(std::string(e.what()).find("2L/ell") != std::string::npos);
  }
  PlantParams q;
  q.m = 0.0;
  CHECK_THROWS_AS(q.validate(), InvalidArgument);
  PlantParams weak;
  weak.EA = 10.0;  // sinusoid overwhelms the rational term
  CHECK_THROWS_AS(weak.validate(), InvalidArgument);
  CHECK_NOTHROW(PlantParams{}.validate());
}

TEST_CASE("true parameters follow the closed form") {
  PlantParams p = hand_plant();
  CHECK(true_parameters(0.5, p).theta1 == doctest::Approx(2e-3).epsilon(1e-14));
  p.frozen_stiffness = 4000.0;
  CHECK(true_parameters(0.5, p).theta2 == doctest::Approx(2.5e-8).epsilon(1e-14));
}

TEST_CASE("snap parameter ratio is the inverse stiffness ratio") {
  const PlantParams p;
  for (double a : {0.15, 0.3, 0.55}) {
    for (double b : {0.2, 0.7, 0.85}) {
      const double lhs = true_parameters(a, p).theta2 / true_parameters(b, p).theta2;
      CHECK(lhs == doctest::Approx(stiffness(b, p) / stiffness(a, p)).epsilon(1e-13));
    }
  }
}

TEST_CASE("unstretched belt produces no force") {
  const PlantParams p;
  PlantState s = rest_state(0.3, p);
  s.y_dot = 0.2;
  s.phi_dot = 0.2 / p.r_pulley;
  const PlantState ds = dynamics_rhs(s, 0.0, p);
  CHECK(ds.y == 0.2);
  CHECK(std::abs(ds.y_dot) < 1e-12);
  CHECK(std::abs(ds.phi_dot) < 1e-9);
}

TEST_CASE("equilibrium stays put under zero input") {
  const PlantParams p;
  const std::vector<double> u(500, 0.0);
  const auto out = simulate(rest_state(0.5, p), u, 1e-4, p);
  REQUIRE(out.size() == u.size());
  for (const auto& s : out) {
    CHECK(std::abs(s.y - 0.5) < 1e-15);
    CHECK(s.y_dot == doctest::Approx(0.0).epsilon(1e-12));
  }
}

TEST_CASE("constant-stiffness realization reproduces the lumped-spring IO equation") {
  for (double d : {0.0, 0.5, 2.0}) {
    for (double k : {800.0, 4000.0, 1.2e4}) {
      PlantParams p;
      p.d = d;
      p.frozen_stiffness = k;
      Eigen::Matrix4d a;
      Eigen::Vector4d b;
      oracle::probe_linear(p, 0.5, a, b);
      const auto got = oracle::leverrier(a, b);
      const auto want = oracle::io_equation(p, k);
      const double omega = std::sqrt(want.den[2]);
      CHECK(oracle::coefficient_mismatch(got, want, omega) < 1e-12);
      for (std::size_t i = 0; i < want.den.size(); ++i) {
        if (want.den[i] != 0.0) CHECK(got.den[i] == doctest::Approx(want.den[i]).epsilon(1e-12));
      }
      for (std::size_t i = 0; i < want.num.size(); ++i) {
        if (want.num[i] != 0.0) CHECK(got.num[i] == doctest::Approx(want.num[i]).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("energy is conserved without damping or forcing") {
  PlantParams p = hand_plant();
  p.d = 0.0;
  const double k = stiffness(0.5, p);
  p.frozen_stiffness = k;
  PlantState s0 = rest_state(0.5, p);
  s0.phi += 1e-3 / p.r_pulley;
  const double dt = 1e-4;
  const std::vector<double> u(10000, 0.0);
  const auto out = simulate(s0, u, dt, p);
  const double e0 = oracle::energy(s0, p, k);
  double drift = 0.0;
  for (const auto& s : out) drift = std::max(drift, std::abs(oracle::energy(s, p, k) - e0) / e0);
  CHECK(drift < 1e-6);
}

TEST_CASE("RK4 converges at fourth order") {
  const PlantParams p;
  const double t_end = 0.05;
  const double dt = 2e-4;
  const PlantState ref = forced_run(p, dt / 16.0, t_end);
  const double e1 = distance(forced_run(p, dt, t_end), ref, p);
  const double e2 = distance(forced_run(p, dt / 2.0, t_end), ref, p);
  const double e4 = distance(forced_run(p, dt / 4.0, t_end), ref, p);
  CHECK(e1 / e2 >= 10.0);
  CHECK(e1 / e2 <= 22.0);
  CHECK(std::log2(e2 / e4) >= 3.7);
}

TEST_CASE("simulate is deterministic") {
  const PlantParams p;
  std::vector<double> u(800);
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = 1e-3 * std::sin(0.01 * i);
  const auto a = simulate(rest_state(0.5, p), u, 1e-4, p);
  const auto b = simulate(rest_state(0.5, p), u, 1e-4, p);
  CHECK(a == b);
}

TEST_CASE("leaving the stiffness domain reports the step") {
  const PlantParams p;
  PlantState s = rest_state(0.85, p);
  s.y_dot = 5.0;
  s.phi_dot = 5.0 / p.r_pulley;
  const std::vector<double> u(1000, 0.0);
  try {
    simulate(s, u, 1e-4, p);
    FAIL("expected DomainError");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("step ") == 0);
  }
}

TEST_CASE("runaway state raises a nonfinite-state error") {
  PlantParams p;
  p.frozen_stiffness = 4000.0;
  const std::vector<double> u(1000, 1e3);
  CHECK_THROWS_AS(simulate(rest_state(0.5, p), u, 1e-4, p, {1e3}), NonfiniteStateError);
}
