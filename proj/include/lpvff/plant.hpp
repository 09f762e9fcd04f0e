#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace lpvff {

/// Physical constants of the timing-belt pulley drive.
///
/// The motor applies a torque u to a pulley of inertia J and radius
/// r_pulley; a single lumped belt spring with position-dependent stiffness
/// k(rho) and damping d couples the pulley rim to a carriage of mass m.
/// The scheduling variable is rho = y / ell.
struct PlantParams {
  double m = 0.1;          ///< carriage mass [kg]
  double J = 1e-6;         ///< pulley inertia [kg m^2]
  double r_pulley = 0.01;  ///< pulley radius [m]
  double d = 2.0;          ///< belt damping [N s/m]
  double L = 0.5;          ///< belt half-length parameter [m]
  double EA = 1000.0;      ///< elasticity modulus times cross-section [N]
  double ell = 1.0;        ///< position scaling [m]
  double rho_min = 0.1;
  double rho_max = 0.9;
  /// When set, the belt stiffness is this constant instead of k(rho).
  std::optional<double> frozen_stiffness;

  /// Throws InvalidArgument naming the first violated bound. Also samples
  /// k(rho) on 1000 points of the admissible domain and rejects parameter
  /// sets for which the stiffness is not strictly positive.
  void validate() const;

  double rho_of(double y) const { return y / ell; }
};

/// Carriage position/velocity and pulley angle/rate.
struct PlantState {
  double y = 0.0;
  double y_dot = 0.0;
  double phi = 0.0;
  double phi_dot = 0.0;

  bool finite() const;
  double max_abs() const;

  PlantState& operator+=(const PlantState& o);
  friend PlantState operator+(PlantState a, const PlantState& b) { return a += b; }
  friend PlantState operator*(double s, PlantState a);
  friend bool operator==(const PlantState&, const PlantState&) = default;
};

/// Equilibrium with the carriage at y and an unstretched belt.
PlantState rest_state(double y, const PlantParams& p);

/// k(rho) = 2 L EA / (rho ell (2L - rho ell)) + 100 sin(5 rho).
/// Throws DomainError outside [rho_min, rho_max].
double stiffness(double rho, const PlantParams& p);

/// Stiffness seen by the dynamics: frozen_stiffness when set, k(rho)
/// otherwise. Domain-checked either way.
double belt_stiffness(double rho, const PlantParams& p);

/// Belt force F = k (r phi - y) + d (r phi_dot - y_dot).
double belt_force(const PlantState& s, const PlantParams& p);

/// Time derivative of the state:
///   m  y''   = F
///   J  phi'' = u - r F
PlantState dynamics_rhs(const PlantState& s, double u, const PlantParams& p);

/// Input values seen by the three distinct RK4 stage times of one step.
struct StepInput {
  double begin = 0.0;
  double mid = 0.0;
  double end = 0.0;

  static StepInput hold(double u) { return {u, u, u}; }
  static StepInput ramp(double u0, double u1) { return {u0, 0.5 * (u0 + u1), u1}; }
};

/// One classical Runge-Kutta step. Stiffness is re-evaluated at the stage
/// carriage position inside every stage.
PlantState rk4_step(const PlantState& s, StepInput u, double dt, const PlantParams& p);

struct SimulateOptions {
  /// Any |state component| above this is reported as NonfiniteStateError.
  double state_bound = 1e6;
};

/// Integrates from s0 with u held constant over each sample interval.
/// Element i of the result is the state at t = (i + 1) dt, i.e. after u[i]
/// has been applied, so the output has the same length as u.
std::vector<PlantState> simulate(const PlantState& s0, std::span<const double> u, double dt,
                                 const PlantParams& p, const SimulateOptions& opts = {});

/// Parameters of the frozen-rho, undamped inverse
///   u = d^2/dt^2 (theta1 y + theta2(rho) y'')
struct TrueParameters {
  double theta1;  ///< (J + m r^2) / r  [kg m]
  double theta2;  ///< m J / (r k(rho)) [kg m s^2]
};

TrueParameters true_parameters(double rho, const PlantParams& p);

}  // namespace lpvff
