#pragma once

#include <cstddef>
#include <vector>

namespace lpvff {

/// Uniformly sampled reference with its first four time derivatives.
struct Trajectory {
  double dt = 0.0;
  std::vector<double> r0;  ///< position [m]
  std::vector<double> r1;  ///< velocity [m/s]
  std::vector<double> r2;  ///< acceleration [m/s^2]
  std::vector<double> r3;  ///< jerk [m/s^3]
  std::vector<double> r4;  ///< snap [m/s^4]

  std::size_t size() const { return r0.size(); }
  double time(std::size_t i) const { return static_cast<double>(i) * dt; }

  /// Throws InvalidArgument unless all arrays have equal length >= 2 and
  /// every sample is finite.
  void validate() const;
};

/// Rest-to-rest C4 profile on [0, 1]:
///   p(x) = 126x^5 - 420x^6 + 540x^7 - 315x^8 + 70x^9
/// `order` selects the derivative (0..4). Arguments outside [0, 1] are
/// clamped, which yields the constant extension of the profile.
double rest_to_rest_profile(double x, int order);

/// Point-to-point motion from y_start to y_end in `duration` seconds,
/// sampled every dt up to and including t_total (held at y_end after the
/// move). Derivatives are analytic.
Trajectory point_to_point(double y_start, double y_end, double duration, double dt,
                          double t_total);

/// Reference parked at y for n samples.
Trajectory constant_trajectory(double y, double dt, std::size_t n);

}  // namespace lpvff
