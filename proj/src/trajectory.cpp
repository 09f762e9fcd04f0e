#include "lpvff/trajectory.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "lpvff/errors.hpp"

namespace lpvff {

namespace {

// Coefficients of p(x) by power, x^0..x^9.
constexpr std::array<double, 10> kProfile = {0, 0, 0, 0, 0, 126, -420, 540, -315, 70};

}  // namespace

void Trajectory::validate() const {
  const std::size_t n = r0.size();
  if (n < 2) throw InvalidArgument("trajectory needs at least 2 samples");
  if (r1.size() != n || r2.size() != n || r3.size() != n || r4.size() != n) {
    throw InvalidArgument("trajectory arrays differ in length");
  }
  if (!(dt > 0.0)) throw InvalidArgument("trajectory dt must be > 0");
  for (const auto* v : {&r0, &r1, &r2, &r3, &r4}) {
    if (!std::all_of(v->begin(), v->end(), [](double x) { return std::isfinite(x); })) {
      throw InvalidArgument("trajectory contains non-finite samples");
    }
  }
}

double rest_to_rest_profile(double x, int order) {
  if (order < 0 || order > 4) throw InvalidArgument("profile derivative order must be 0..4");
  x = std::clamp(x, 0.0, 1.0);
  // p(x) = 1 - p(1 - x); evaluating the upper half through the mirror keeps
  // the end of the move free of Horner cancellation.
  const bool mirror = x > 0.5;
  const double z = mirror ? 1.0 - x : x;
  double acc = 0.0;
  for (int power = 9; power >= order; --power) {
    double c = kProfile[power];
    for (int j = 0; j < order; ++j) c *= power - j;
    acc = acc * z + c;
  }
  if (!mirror) return acc;
  if (order == 0) return 1.0 - acc;
  return order % 2 == 1 ? acc : -acc;
}

Trajectory point_to_point(double y_start, double y_end, double duration, double dt,
                          double t_total) {
  if (!(duration > 0.0)) throw InvalidArgument("point_to_point: duration must be > 0");
  if (!(dt > 0.0)) throw InvalidArgument("point_to_point: dt must be > 0");
  if (!(t_total >= duration)) {
    throw InvalidArgument("point_to_point: t_total must be >= duration");
  }
  const auto n = static_cast<std::size_t>(std::llround(t_total / dt)) + 1;
  const double stroke = y_end - y_start;

  Trajectory tr;
  tr.dt = dt;
  std::array<std::vector<double>*, 5> out = {&tr.r0, &tr.r1, &tr.r2, &tr.r3, &tr.r4};
  for (auto* v : out) v->resize(n);

  for (std::size_t i = 0; i < n; ++i) {
    const double x = tr.time(i) / duration;
    double scale = stroke;
    for (int q = 0; q < 5; ++q) {
      (*out[q])[i] = x > 1.0 && q > 0 ? 0.0 : scale * rest_to_rest_profile(x, q);
      scale /= duration;
    }
    tr.r0[i] += y_start;
  }
  return tr;
}

Trajectory constant_trajectory(double y, double dt, std::size_t n) {
  Trajectory tr;
  tr.dt = dt;
  tr.r0.assign(n, y);
  tr.r1.assign(n, 0.0);
  tr.r2.assign(n, 0.0);
  tr.r3.assign(n, 0.0);
  tr.r4.assign(n, 0.0);
  return tr;
}

}  // namespace lpvff
