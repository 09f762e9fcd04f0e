#include "lpvff/learning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lpvff/errors.hpp"

namespace lpvff {

namespace {

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

void validate_centers(std::span<const double> centers, double lo, double hi) {
  if (centers.empty()) throw InvalidArgument("need at least one kernel center");
  for (std::size_t i = 0; i < centers.size(); ++i) {
    if (!std::isfinite(centers[i]) || centers[i] < lo || centers[i] > hi) {
      throw InvalidArgument("kernel center outside the scheduling domain");
    }
    if (i > 0 && !(centers[i] > centers[i - 1])) {
      throw InvalidArgument("kernel centers must be strictly increasing");
    }
  }
}

double theta_at(const KernelSpec& spec, std::span<const double> centers,
                std::span<const double> alpha, double rho) {
  double acc = 0.0;
  for (std::size_t m = 0; m < centers.size(); ++m) acc += alpha[m] * eval(spec, rho, centers[m]);
  return acc;
}

// Rows [begin, end) of every block of `block` rows whose index is a multiple
// of `stride` are held out.
struct Split {
  std::vector<Eigen::Index> train;
  std::vector<Eigen::Index> test;
};

Split holdout_split(Eigen::Index n) {
  constexpr Eigen::Index kBlock = 250;
  constexpr Eigen::Index kStride = 4;
  Split s;
  for (Eigen::Index i = 0; i < n; ++i) {
    ((i / kBlock) % kStride == kStride - 1 ? s.test : s.train).push_back(i);
  }
  return s;
}

}  // namespace

void FFModel::validate() const {
  if (!(rho_max > rho_min)) throw InvalidArgument("model rho domain is empty");
  validate_centers(centers, rho_min, rho_max);
  if (alpha1.size() != centers.size() || alpha2.size() != centers.size()) {
    throw InvalidArgument("model coefficient arrays must match the number of centers");
  }
  if (!all_finite(alpha1) || !all_finite(alpha2)) {
    throw InvalidArgument("model coefficients must be finite");
  }
  spec1.validate();
  spec2.validate();
}

ParameterValues evaluate(const FFModel& model, double rho) {
  if (!(rho >= model.rho_min && rho <= model.rho_max)) {
    throw DomainError("evaluate: rho = " + std::to_string(rho) + " outside model domain");
  }
  return {theta_at(model.spec1, model.centers, model.alpha1, rho),
          theta_at(model.spec2, model.centers, model.alpha2, rho)};
}

void ExperimentLog::validate() const {
  const std::size_t n = u_total.size();
  if (y.size() != n || rho.size() != n || trajectory.size() != n) {
    throw DimensionError("experiment log arrays differ in length");
  }
  if (!(dt > 0.0)) throw InvalidArgument("experiment log dt must be > 0");
  if (!all_finite(u_total) || !all_finite(y) || !all_finite(rho)) {
    throw InvalidArgument("experiment log contains non-finite samples");
  }
}

std::vector<double> second_difference(std::span<const double> v, double dt) {
  const std::size_t n = v.size();
  if (n < 3) throw InvalidArgument("second_difference needs at least 3 samples");
  std::vector<double> out(n);
  const double inv = 1.0 / (dt * dt);
  for (std::size_t k = 1; k + 1 < n; ++k) out[k] = (v[k - 1] - 2.0 * v[k] + v[k + 1]) * inv;
  out.front() = out[1];
  out.back() = out[n - 2];
  return out;
}

Regression build_regression(const ExperimentLog& log, std::span<const double> centers,
                            const KernelSpec& spec1, const KernelSpec& spec2, double ell) {
  log.validate();
  const std::size_t n = log.size();
  if (n < 2 * kRegressionTrim + 1) {
    throw InvalidArgument("build_regression: log too short (" + std::to_string(n) +
                          " samples)");
  }
  if (centers.empty()) throw InvalidArgument("build_regression: no centers");
  const auto m = static_cast<Eigen::Index>(centers.size());
  const auto rows = static_cast<Eigen::Index>(n - 2 * kRegressionTrim);
  const Trajectory& tr = log.trajectory;
  const double inv = 1.0 / (log.dt * log.dt);

  Regression reg;
  reg.phi.resize(rows, 2 * m);
  reg.target.resize(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    reg.target(i) = log.u_total[static_cast<std::size_t>(i) + kRegressionTrim];
  }

  std::vector<double> w1(n), w2(n);
  for (Eigen::Index j = 0; j < m; ++j) {
    for (std::size_t k = 0; k < n; ++k) {
      const double rho = tr.r0[k] / ell;
      w1[k] = eval(spec1, rho, centers[j]) * tr.r0[k];
      w2[k] = eval(spec2, rho, centers[j]) * tr.r2[k];
    }
    for (Eigen::Index i = 0; i < rows; ++i) {
      const std::size_t k = static_cast<std::size_t>(i) + kRegressionTrim;
      reg.phi(i, j) = (w1[k - 1] - 2.0 * w1[k] + w1[k + 1]) * inv;
      reg.phi(i, m + j) = (w2[k - 1] - 2.0 * w2[k] + w2[k + 1]) * inv;
    }
  }
  return reg;
}

std::vector<double> default_lambda_ladder() {
  std::vector<double> out;
  for (int e = -16; e <= -6; ++e) out.push_back(std::pow(10.0, e));
  return out;
}

std::vector<double> uniform_centers(double lo, double hi, std::size_t m) {
  if (m == 0) throw InvalidArgument("need at least one center");
  if (m == 1) return {0.5 * (lo + hi)};
  std::vector<double> c(m);
  for (std::size_t i = 0; i < m; ++i) c[i] = lo + (hi - lo) * static_cast<double>(i) / (m - 1);
  c.back() = hi;
  return c;
}

LearnResult learn(const ExperimentLog& log, const LearnConfig& cfg) {
  cfg.spec1.validate();
  cfg.spec2.validate();
  validate_centers(cfg.centers, cfg.rho_min, cfg.rho_max);
  if (!(cfg.lambda > 0.0)) throw InvalidArgument("learn: lambda must be > 0");
  for (double l : cfg.lambda_grid) {
    if (!(l > 0.0)) throw InvalidArgument("learn: lambda grid entries must be > 0");
  }
  log.validate();
  for (double r : log.rho) {
    if (!(r >= cfg.rho_min && r <= cfg.rho_max)) {
      throw DomainError("learn: logged rho = " + std::to_string(r) + " outside domain");
    }
  }

  LearnReport report;
  const auto [lo, hi] = std::minmax_element(log.rho.begin(), log.rho.end());
  report.low_coverage = (*hi - *lo) < 0.5 * (cfg.rho_max - cfg.rho_min);

  const Regression reg = build_regression(log, cfg.centers, cfg.spec1, cfg.spec2, cfg.ell);
  const auto m = static_cast<Eigen::Index>(cfg.centers.size());

  const std::vector<Eigen::MatrixXd> priors = {with_jitter(gram(cfg.spec1, cfg.centers)),
                                               with_jitter(gram(cfg.spec2, cfg.centers))};
  std::vector<Eigen::LLT<Eigen::MatrixXd>> llts;
  for (const auto& g : priors) {
    llts.emplace_back(g);
    if (llts.back().info() != Eigen::Success) {
      throw FactorizationError("learn: kernel Gram matrix is not positive definite");
    }
  }

  // Regressors with respect to the center values c = G alpha.
  Eigen::MatrixXd phi_c(reg.phi.rows(), reg.phi.cols());
  for (Eigen::Index b = 0; b < 2; ++b) {
    phi_c.middleCols(b * m, m) =
        llts[b].solve(reg.phi.middleCols(b * m, m).transpose()).transpose();
  }

  double lambda = cfg.lambda;
  if (!cfg.lambda_grid.empty()) {
    const Split split = holdout_split(phi_c.rows());
    const Eigen::MatrixXd phi_train = phi_c(split.train, Eigen::all);
    const Eigen::VectorXd y_train = reg.target(split.train);
    const Eigen::MatrixXd phi_test = phi_c(split.test, Eigen::all);
    const Eigen::VectorXd y_test = reg.target(split.test);
    double best = std::numeric_limits<double>::infinity();
    std::vector<double> ladder = cfg.lambda_grid;
    std::sort(ladder.begin(), ladder.end());
    for (double l : ladder) {
      const RidgeSolution sol = ridge_solve(phi_train, y_train, priors, l);
      const double score =
          std::sqrt((y_test - phi_test * sol.coefficients).squaredNorm() / y_test.size());
      report.lambda_scores.emplace_back(l, score);
      if (score <= best) {
        best = score;
        lambda = l;
      }
    }
  }

  const RidgeSolution sol = ridge_solve(phi_c, reg.target, priors, lambda);
  report.lambda = lambda;
  report.normal_residual = sol.normal_residual;
  report.training_rms =
      std::sqrt((reg.target - phi_c * sol.coefficients).squaredNorm() / reg.target.size());

  FFModel model;
  model.centers = cfg.centers;
  model.spec1 = cfg.spec1;
  model.spec2 = cfg.spec2;
  model.lambda = lambda;
  model.rho_min = cfg.rho_min;
  model.rho_max = cfg.rho_max;
  const Eigen::VectorXd a1 = llts[0].solve(sol.coefficients.head(m));
  const Eigen::VectorXd a2 = llts[1].solve(sol.coefficients.tail(m));
  model.alpha1.assign(a1.data(), a1.data() + m);
  model.alpha2.assign(a2.data(), a2.data() + m);
  return {std::move(model), std::move(report)};
}

std::vector<double> synthesize_ff(const FFModel& model, const Trajectory& traj,
                                  std::span<const double> rho_schedule) {
  if (rho_schedule.size() != traj.size()) {
    throw DimensionError("synthesize_ff: rho schedule length differs from trajectory");
  }
  std::vector<double> v(traj.size());
  for (std::size_t k = 0; k < v.size(); ++k) {
    const ParameterValues th = evaluate(model, rho_schedule[k]);
    v[k] = th.theta1 * traj.r0[k] + th.theta2 * traj.r2[k];
  }
  return second_difference(v, traj.dt);
}

std::vector<double> synthesize_ff(const FFModel& model, const Trajectory& traj, double ell) {
  std::vector<double> rho(traj.size());
  for (std::size_t k = 0; k < rho.size(); ++k) rho[k] = traj.r0[k] / ell;
  return synthesize_ff(model, traj, rho);
}

}  // namespace lpvff
