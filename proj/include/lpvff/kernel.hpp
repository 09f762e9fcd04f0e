#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace lpvff {

enum class KernelFamily {
  SquaredExponential,  ///< var * exp(-(a-b)^2 / (2 l^2))
  Periodic,            ///< var * exp(-2 sin^2(w (a-b) / 2) / l^2)
  Constant,            ///< var
};

struct KernelTerm {
  KernelFamily family = KernelFamily::SquaredExponential;
  double variance = 1.0;
  double length_scale = 1.0;  ///< unused by Constant
  double period_freq = 0.0;   ///< Periodic only [rad per unit rho]

  friend bool operator==(const KernelTerm&, const KernelTerm&) = default;
};

/// Prior on a position-dependent parameter: a sum of kernel terms.
struct KernelSpec {
  std::vector<KernelTerm> terms;

  void validate() const;
  double total_variance() const;

  static KernelSpec squared_exponential(double variance, double length_scale);
  static KernelSpec periodic(double variance, double length_scale, double period_freq);
  static KernelSpec constant(double variance);
  KernelSpec operator+(const KernelSpec& other) const;

  friend bool operator==(const KernelSpec&, const KernelSpec&) = default;
};

/// Text form used by configs and model files, e.g.
///   se(1e-17, 0.15) + periodic(1e-17, 1, 5) + const(1)
/// Numbers are written in shortest round-trip form.
std::string to_string(const KernelSpec& spec);

/// Inverse of to_string. Throws InvalidArgument on malformed input.
KernelSpec parse_kernel_spec(const std::string& text);

double eval(const KernelSpec& spec, double a, double b);

/// G(i, j) = eval(spec, c_i, c_j). No jitter.
Eigen::MatrixXd gram(const KernelSpec& spec, std::span<const double> centers);

/// Cross-kernel K(i, j) = eval(spec, points_i, centers_j).
Eigen::MatrixXd cross_kernel(const KernelSpec& spec, std::span<const double> points,
                             std::span<const double> centers);

constexpr double kGramJitter = 1e-10;

/// Adds kGramJitter * mean(diag) to the diagonal.
Eigen::MatrixXd with_jitter(Eigen::MatrixXd g);

/// Cholesky factor L (G = L L^T). Throws FactorizationError.
Eigen::MatrixXd cholesky_factor(const Eigen::MatrixXd& g);

struct RidgeSolution {
  Eigen::VectorXd coefficients;
  /// ||(Phi^T Phi + lambda R) c - Phi^T y|| / ||Phi^T y|| evaluated in the
  /// whitened coordinates the solver works in.
  double normal_residual = 0.0;
};

/// Minimizes ||y - Phi c||^2 + lambda c^T R c with
/// R = blockdiag(prior_covariances[b]^-1).
///
/// The blocks are covariance (Gram) matrices; their inverses are never
/// formed. With G_b = L_b L_b^T the solver substitutes c = L z, which turns
/// the penalty into lambda ||z||^2, and factors (Phi L)^T (Phi L) + lambda I.
///
/// Throws InvalidArgument for lambda <= 0, DimensionError when the block
/// sizes do not add up to Phi.cols() or y.size() != Phi.rows(), and
/// FactorizationError when a block is not positive definite.
RidgeSolution ridge_solve(const Eigen::MatrixXd& phi, const Eigen::VectorXd& y,
                          std::span<const Eigen::MatrixXd> prior_covariances, double lambda);

}  // namespace lpvff
