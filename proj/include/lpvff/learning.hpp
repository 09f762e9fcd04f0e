#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lpvff/kernel.hpp"
#include "lpvff/trajectory.hpp"

namespace lpvff {

/// Position-dependent feedforward
///   u_ff = d^2/dt^2 ( theta1(rho) r + theta2(rho) r'' )
/// with theta_i(rho) = sum_m alpha_i[m] kappa_i(rho, centers[m]).
struct FFModel {
  std::vector<double> centers;
  std::vector<double> alpha1;
  std::vector<double> alpha2;
  KernelSpec spec1;
  KernelSpec spec2;
  double lambda = 0.0;
  /// Admissible scheduling domain the model was learned for.
  double rho_min = 0.0;
  double rho_max = 0.0;

  std::size_t size() const { return centers.size(); }

  /// Throws InvalidArgument when centers are not strictly increasing inside
  /// [rho_min, rho_max], arrays differ in length, or values are not finite.
  void validate() const;
};

struct ParameterValues {
  double theta1;
  double theta2;
};

/// Kernel-expansion values at rho. Throws DomainError outside the model's
/// scheduling domain.
ParameterValues evaluate(const FFModel& model, double rho);

/// Data recorded during one tracking experiment.
struct ExperimentLog {
  double dt = 0.0;
  std::vector<double> u_total;  ///< applied input [N m]
  std::vector<double> y;        ///< measured carriage position [m]
  std::vector<double> rho;      ///< y / ell
  Trajectory trajectory;

  std::size_t size() const { return u_total.size(); }
  void validate() const;
};

/// Samples dropped at each end of the regression (boundary stencil bias).
constexpr std::size_t kRegressionTrim = 2;

/// (v[k-1] - 2 v[k] + v[k+1]) / dt^2 on the interior; the two end samples
/// replicate their nearest interior neighbour.
std::vector<double> second_difference(std::span<const double> v, double dt);

struct Regression {
  Eigen::MatrixXd phi;     ///< N' x 2M
  Eigen::VectorXd target;  ///< N'
};

/// Regression of the applied input onto the feedforward basis. Column j < M
/// is the second difference of kappa1(rho(t), c_j) r0(t); column M + j that
/// of kappa2(rho(t), c_j) r2(t). The differentiation acts on the whole
/// position-dependent product. rho(t) is the reference schedule r0 / ell,
/// identical to the one synthesize_ff uses.
Regression build_regression(const ExperimentLog& log, std::span<const double> centers,
                            const KernelSpec& spec1, const KernelSpec& spec2, double ell);

struct LearnConfig {
  KernelSpec spec1;
  KernelSpec spec2;
  std::vector<double> centers;
  double lambda = 1e-12;
  /// When non-empty, lambda is picked from this ladder by held-out RMS.
  std::vector<double> lambda_grid;
  double ell = 1.0;
  double rho_min = 0.1;
  double rho_max = 0.9;
};

/// Decade ladder used when grid search is requested without an explicit one.
std::vector<double> default_lambda_ladder();

/// Uniform grid of m centers over [lo, hi]; a single center sits at the
/// midpoint.
std::vector<double> uniform_centers(double lo, double hi, std::size_t m);

struct LearnReport {
  double training_rms = 0.0;
  double lambda = 0.0;
  double normal_residual = 0.0;
  /// Held-out RMS per ladder entry, empty without grid search.
  std::vector<std::pair<double, double>> lambda_scores;
  /// Scheduling range covered by the log is below half the domain.
  bool low_coverage = false;
};

struct LearnResult {
  FFModel model;
  LearnReport report;
};

/// Kernel-regularized fit of the feedforward parameters to one log.
///
/// The unknowns are the parameter values at the centers, c_i = theta_i(C),
/// with prior covariance G_i (Gram plus jitter), so the penalty is
/// lambda * c^T blockdiag(G_1^-1, G_2^-1) c. The stored expansion
/// coefficients are alpha_i = G_i^-1 c_i.
LearnResult learn(const ExperimentLog& log, const LearnConfig& cfg);

/// u_ff = second difference of theta1(rho) r0 + theta2(rho) r2, with rho
/// taken from `rho_schedule` (same length as the trajectory).
std::vector<double> synthesize_ff(const FFModel& model, const Trajectory& traj,
                                  std::span<const double> rho_schedule);

/// Same with the reference schedule r0 / ell.
std::vector<double> synthesize_ff(const FFModel& model, const Trajectory& traj, double ell);

/// Plain-text model file. Header lines are `key value`; after the `data`
/// line come M rows `center alpha1 alpha2`. Numbers use the shortest
/// round-trip decimal form so save/load is bit-exact.
std::string serialize_model(const FFModel& model);

/// Throws ParseError with the offending line.
FFModel parse_model(const std::string& text, const std::string& source = "<model>");

void save_model(const FFModel& model, const std::string& path);
FFModel load_model(const std::string& path);

}  // namespace lpvff
