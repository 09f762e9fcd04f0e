#include "lpvff/plant.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "lpvff/errors.hpp"

namespace lpvff {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw InvalidArgument(msg);
}

void check_domain(double rho, const PlantParams& p) {
  if (!(rho >= p.rho_min && rho <= p.rho_max)) {
    std::ostringstream os;
    os << "rho = " << rho << " outside admissible domain [" << p.rho_min << ", " << p.rho_max
       << "]";
    throw DomainError(os.str());
  }
}

double stiffness_formula(double rho, const PlantParams& p) {
  const double x = rho * p.ell;
  return 2.0 * p.L * p.EA / (x * (2.0 * p.L - x)) + 100.0 * std::sin(5.0 * rho);
}

}  // namespace

void PlantParams::validate() const {
  require(m > 0.0, "plant.m must be > 0");
  require(J > 0.0, "plant.J must be > 0");
  require(r_pulley > 0.0, "plant.r_pulley must be > 0");
  require(d >= 0.0, "plant.d must be >= 0");
  require(L > 0.0, "plant.L must be > 0");
  require(EA > 0.0, "plant.EA must be > 0");
  require(ell > 0.0, "plant.ell must be > 0");
  require(rho_min > 0.0, "plant.rho_min must be > 0");
  require(rho_max > rho_min, "plant.rho_max must be > rho_min");
  const double singular = 2.0 * L / ell;
  if (!(rho_max < singular)) {
    std::ostringstream os;
    os << "plant.rho_max must be < 2L/ell = " << singular << " (stiffness singularity)";
    throw InvalidArgument(os.str());
  }
  if (frozen_stiffness) {
    require(*frozen_stiffness > 0.0, "plant.frozen_stiffness must be > 0");
    return;
  }
  constexpr int kSamples = 1000;
  for (int i = 0; i < kSamples; ++i) {
    const double rho = rho_min + (rho_max - rho_min) * i / (kSamples - 1);
    const double k = stiffness_formula(rho, *this);
    if (!(k > 0.0) || !std::isfinite(k)) {
      std::ostringstream os;
      os << "belt stiffness k(rho) = " << k << " is not positive at rho = " << rho;
      throw InvalidArgument(os.str());
    }
  }
}

bool PlantState::finite() const {
  return std::isfinite(y) && std::isfinite(y_dot) && std::isfinite(phi) &&
         std::isfinite(phi_dot);
}

double PlantState::max_abs() const {
  return std::max({std::abs(y), std::abs(y_dot), std::abs(phi), std::abs(phi_dot)});
}

PlantState& PlantState::operator+=(const PlantState& o) {
  y += o.y;
  y_dot += o.y_dot;
  phi += o.phi;
  phi_dot += o.phi_dot;
  return *this;
}

PlantState operator*(double s, PlantState a) {
  a.y *= s;
  a.y_dot *= s;
  a.phi *= s;
  a.phi_dot *= s;
  return a;
}

PlantState rest_state(double y, const PlantParams& p) { return {y, 0.0, y / p.r_pulley, 0.0}; }

double stiffness(double rho, const PlantParams& p) {
  check_domain(rho, p);
  return stiffness_formula(rho, p);
}

double belt_stiffness(double rho, const PlantParams& p) {
  check_domain(rho, p);
  return p.frozen_stiffness ? *p.frozen_stiffness : stiffness_formula(rho, p);
}

double belt_force(const PlantState& s, const PlantParams& p) {
  const double k = belt_stiffness(p.rho_of(s.y), p);
  return k * (p.r_pulley * s.phi - s.y) + p.d * (p.r_pulley * s.phi_dot - s.y_dot);
}

PlantState dynamics_rhs(const PlantState& s, double u, const PlantParams& p) {
  const double f = belt_force(s, p);
  return {s.y_dot, f / p.m, s.phi_dot, (u - p.r_pulley * f) / p.J};
}

PlantState rk4_step(const PlantState& s, StepInput u, double dt, const PlantParams& p) {
  const PlantState k1 = dynamics_rhs(s, u.begin, p);
  const PlantState k2 = dynamics_rhs(s + (0.5 * dt) * k1, u.mid, p);
  const PlantState k3 = dynamics_rhs(s + (0.5 * dt) * k2, u.mid, p);
  const PlantState k4 = dynamics_rhs(s + dt * k3, u.end, p);
  return s + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

std::vector<PlantState> simulate(const PlantState& s0, std::span<const double> u, double dt,
                                 const PlantParams& p, const SimulateOptions& opts) {
  if (!(dt > 0.0)) throw InvalidArgument("simulate: dt must be > 0");
  if (!s0.finite()) throw NonfiniteStateError("simulate: initial state is not finite");

  std::vector<PlantState> out;
  out.reserve(u.size());
  PlantState s = s0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    try {
      s = rk4_step(s, StepInput::hold(u[i]), dt, p);
    } catch (const DomainError& e) {
      throw DomainError("step " + std::to_string(i) + ": " + e.what());
    }
    if (!s.finite() || s.max_abs() > opts.state_bound) {
      throw NonfiniteStateError("step " + std::to_string(i) +
                                ": state left the magnitude bound");
    }
    out.push_back(s);
  }
  return out;
}

TrueParameters true_parameters(double rho, const PlantParams& p) {
  const double k = belt_stiffness(rho, p);
  return {(p.J + p.m * p.r_pulley * p.r_pulley) / p.r_pulley, p.m * p.J / (p.r_pulley * k)};
}

}  // namespace lpvff
