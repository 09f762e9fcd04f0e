#include <cmath>

#include <doctest.h>

#include "lpvff/errors.hpp"
#include "lpvff/trajectory.hpp"

using namespace lpvff;

namespace {

double peak(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

TEST_CASE("profile boundary values") {
  CHECK(126.0 - 420.0 + 540.0 - 315.0 + 70.0 == 1.0);
  CHECK(rest_to_rest_profile(0.0, 0) == 0.0);
  CHECK(rest_to_rest_profile(1.0, 0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::abs(rest_to_rest_profile(0.5, 0) - 0.5) < 1e-15);
  for (int order = 1; order <= 4; ++order) {
    CHECK(rest_to_rest_profile(0.0, order) == 0.0);
    CHECK(std::abs(rest_to_rest_profile(1.0, order)) < 1e-9);
  }
}

TEST_CASE("profile is antisymmetric about the midpoint") {
  for (double x : {0.05, 0.2, 0.37, 0.49}) {
    CHECK(rest_to_rest_profile(x, 0) + rest_to_rest_profile(1.0 - x, 0) ==
          doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("profile derivatives agree with finite differences") {
  const double h = 1e-5;
  for (int order = 0; order < 4; ++order) {
    for (double x : {0.1, 0.3, 0.6, 0.85}) {
      const double fd =
          (rest_to_rest_profile(x + h, order) - rest_to_rest_profile(x - h, order)) / (2 * h);
      CHECK(fd == doctest::Approx(rest_to_rest_profile(x, order + 1)).epsilon(1e-7));
    }
  }
}

TEST_CASE("point to point motion is rest to rest") {
  const Trajectory t = point_to_point(0.15, 0.85, 0.5, 1e-4, 0.7);
  CHECK(t.size() == 7001);
  CHECK(t.r0.front() == 0.15);
  CHECK(t.r0.back() == doctest::Approx(0.85).epsilon(1e-15));
  const std::size_t end = 5000;
  CHECK(t.r0[2500] == doctest::Approx(0.5).epsilon(1e-15));
  for (const auto* v : {&t.r1, &t.r2, &t.r3, &t.r4}) {
    const double pk = peak(*v);
    CHECK(std::abs(v->front()) <= 1e-12 * pk);
    CHECK(std::abs((*v)[end]) <= 1e-12 * pk);
    CHECK(v->back() == 0.0);
  }
}

TEST_CASE("sampled derivatives are consistent to second order") {
  auto errors = [](double dt) {
    const Trajectory t = point_to_point(0.2, 0.8, 0.5, dt, 0.6);
    double e2 = 0.0, e4 = 0.0;
    // r5 jumps at t = 0 and t = T, so stay clear of those knots.
    const std::size_t knot = static_cast<std::size_t>(std::llround(0.5 / dt));
    for (std::size_t k = 3; k + 3 < knot; ++k) {
      e2 = std::max(e2, std::abs((t.r0[k - 1] - 2 * t.r0[k] + t.r0[k + 1]) / (dt * dt) - t.r2[k]));
      e4 = std::max(e4, std::abs((t.r3[k + 1] - t.r3[k - 1]) / (2 * dt) - t.r4[k]));
    }
    return std::pair{e2, e4};
  };
  const auto [a2, a4] = errors(4e-4);
  const auto [b2, b4] = errors(2e-4);
  CHECK(a2 / b2 == doctest::Approx(4.0).epsilon(0.1));
  CHECK(a4 / b4 == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("position is monotone during the move") {
  const Trajectory t = point_to_point(0.15, 0.85, 0.5, 1e-4, 0.5);
  // Near the end of the move the increments fall below one ulp.
  for (std::size_t k = 1; k < t.size(); ++k) CHECK(t.r0[k] >= t.r0[k - 1] - 1e-15);
}

TEST_CASE("invalid trajectory arguments") {
  CHECK_THROWS_AS(point_to_point(0.2, 0.8, 0.0, 1e-4, 1.0), InvalidArgument);
  CHECK_THROWS_AS(point_to_point(0.2, 0.8, 0.5, -1e-4, 1.0), InvalidArgument);
  CHECK_THROWS_AS(point_to_point(0.2, 0.8, 0.5, 1e-4, 0.4), InvalidArgument);
}

TEST_CASE("constant trajectory has zero derivatives") {
  const Trajectory t = constant_trajectory(0.4, 1e-3, 10);
  CHECK(t.size() == 10);
  CHECK(peak(t.r1) + peak(t.r2) + peak(t.r3) + peak(t.r4) == 0.0);
}
