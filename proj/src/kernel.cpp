#include "lpvff/kernel.hpp"

#include <cctype>
#include <cmath>
#include <numeric>

#include "lpvff/errors.hpp"
#include "lpvff/text.hpp"

namespace lpvff {

namespace {

double eval_term(const KernelTerm& t, double a, double b) {
  switch (t.family) {
    case KernelFamily::SquaredExponential: {
      const double r = (a - b) / t.length_scale;
      return t.variance * std::exp(-0.5 * r * r);
    }
    case KernelFamily::Periodic: {
      const double s = std::sin(0.5 * t.period_freq * (a - b)) / t.length_scale;
      return t.variance * std::exp(-2.0 * s * s);
    }
    case KernelFamily::Constant:
      return t.variance;
  }
  return 0.0;
}

}  // namespace

void KernelSpec::validate() const {
  if (terms.empty()) throw InvalidArgument("kernel spec has no terms");
  for (const auto& t : terms) {
    if (!(t.variance > 0.0) || !std::isfinite(t.variance)) {
      throw InvalidArgument("kernel variance must be > 0");
    }
    if (t.family == KernelFamily::Constant) continue;
    if (!(t.length_scale > 0.0) || !std::isfinite(t.length_scale)) {
      throw InvalidArgument("kernel length_scale must be > 0");
    }
    if (t.family == KernelFamily::Periodic &&
        (!(t.period_freq > 0.0) || !std::isfinite(t.period_freq))) {
      throw InvalidArgument("periodic kernel period_freq must be > 0");
    }
  }
}

double KernelSpec::total_variance() const {
  return std::accumulate(terms.begin(), terms.end(), 0.0,
                         [](double acc, const KernelTerm& t) { return acc + t.variance; });
}

KernelSpec KernelSpec::squared_exponential(double variance, double length_scale) {
  return {{{KernelFamily::SquaredExponential, variance, length_scale, 0.0}}};
}

KernelSpec KernelSpec::periodic(double variance, double length_scale, double period_freq) {
  return {{{KernelFamily::Periodic, variance, length_scale, period_freq}}};
}

KernelSpec KernelSpec::constant(double variance) {
  return {{{KernelFamily::Constant, variance, 1.0, 0.0}}};
}

KernelSpec KernelSpec::operator+(const KernelSpec& other) const {
  KernelSpec out = *this;
  out.terms.insert(out.terms.end(), other.terms.begin(), other.terms.end());
  return out;
}

std::string to_string(const KernelSpec& spec) {
  std::string out;
  for (const auto& t : spec.terms) {
    if (!out.empty()) out += " + ";
    switch (t.family) {
      case KernelFamily::SquaredExponential:
        out += "se(" + format_double(t.variance) + ", " + format_double(t.length_scale) + ")";
        break;
      case KernelFamily::Periodic:
        out += "periodic(" + format_double(t.variance) + ", " + format_double(t.length_scale) +
               ", " + format_double(t.period_freq) + ")";
        break;
      case KernelFamily::Constant:
        out += "const(" + format_double(t.variance) + ")";
        break;
    }
  }
  return out;
}

KernelSpec parse_kernel_spec(const std::string& text) {
  KernelSpec spec;
  std::size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  auto fail = [&](const std::string& msg) -> void {
    throw InvalidArgument("kernel spec '" + text + "': " + msg);
  };

  while (true) {
    skip_ws();
    const std::size_t name_begin = pos;
    while (pos < text.size() &&
           (std::isalpha(static_cast<unsigned char>(text[pos])) || text[pos] == '_')) {
      ++pos;
    }
    const std::string name = text.substr(name_begin, pos - name_begin);
    skip_ws();
    if (pos >= text.size() || text[pos] != '(') fail("expected '(' after kernel name");
    const std::size_t close = text.find(')', pos);
    if (close == std::string::npos) fail("missing ')'");
    const auto fields = split(std::string_view(text).substr(pos + 1, close - pos - 1), ',');
    pos = close + 1;

    std::vector<double> args;
    for (const auto f : fields) {
      const auto v = parse_double(f);
      if (!v) fail("bad number '" + std::string(f) + "'");
      args.push_back(*v);
    }

    KernelTerm term;
    if (name == "se") {
      if (args.size() != 2) fail("se takes (variance, length_scale)");
      term = {KernelFamily::SquaredExponential, args[0], args[1], 0.0};
    } else if (name == "periodic") {
      if (args.size() != 3) fail("periodic takes (variance, length_scale, period_freq)");
      term = {KernelFamily::Periodic, args[0], args[1], args[2]};
    } else if (name == "const") {
      if (args.size() != 1) fail("const takes (variance)");
      term = {KernelFamily::Constant, args[0], 1.0, 0.0};
    } else {
      fail("unknown kernel family '" + name + "'");
    }
    spec.terms.push_back(term);

    skip_ws();
    if (pos >= text.size()) break;
    if (text[pos] != '+') fail("expected '+' between terms");
    ++pos;
  }
  spec.validate();
  return spec;
}

double eval(const KernelSpec& spec, double a, double b) {
  double acc = 0.0;
  for (const auto& t : spec.terms) acc += eval_term(t, a, b);
  return acc;
}

Eigen::MatrixXd gram(const KernelSpec& spec, std::span<const double> centers) {
  const auto n = static_cast<Eigen::Index>(centers.size());
  Eigen::MatrixXd g(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    g(i, i) = eval(spec, centers[i], centers[i]);
    for (Eigen::Index j = 0; j < i; ++j) {
      g(i, j) = g(j, i) = eval(spec, centers[i], centers[j]);
    }
  }
  return g;
}

Eigen::MatrixXd cross_kernel(const KernelSpec& spec, std::span<const double> points,
                             std::span<const double> centers) {
  Eigen::MatrixXd k(static_cast<Eigen::Index>(points.size()),
                    static_cast<Eigen::Index>(centers.size()));
  for (Eigen::Index i = 0; i < k.rows(); ++i) {
    for (Eigen::Index j = 0; j < k.cols(); ++j) k(i, j) = eval(spec, points[i], centers[j]);
  }
  return k;
}

Eigen::MatrixXd with_jitter(Eigen::MatrixXd g) {
  if (g.rows() == 0) return g;
  const double jitter = kGramJitter * g.diagonal().mean();
  g.diagonal().array() += jitter;
  return g;
}

Eigen::MatrixXd cholesky_factor(const Eigen::MatrixXd& g) {
  Eigen::LLT<Eigen::MatrixXd> llt(g);
  if (llt.info() != Eigen::Success) {
    throw FactorizationError("Cholesky factorization failed: matrix is not positive definite");
  }
  return llt.matrixL();
}

RidgeSolution ridge_solve(const Eigen::MatrixXd& phi, const Eigen::VectorXd& y,
                          std::span<const Eigen::MatrixXd> prior_covariances, double lambda) {
  if (!(lambda > 0.0)) throw InvalidArgument("ridge_solve: lambda must be > 0");
  if (phi.rows() < 1 || phi.cols() < 1) throw DimensionError("ridge_solve: empty Phi");
  if (y.size() != phi.rows()) {
    throw DimensionError("ridge_solve: y has " + std::to_string(y.size()) + " rows, Phi has " +
                         std::to_string(phi.rows()));
  }
  Eigen::Index total = 0;
  for (const auto& g : prior_covariances) {
    if (g.rows() != g.cols()) throw DimensionError("ridge_solve: regularizer block not square");
    total += g.rows();
  }
  if (total != phi.cols()) {
    throw DimensionError("ridge_solve: regularizer blocks cover " + std::to_string(total) +
                         " coefficients, Phi has " + std::to_string(phi.cols()));
  }

  // Whitened regressors B = Phi * blockdiag(L_b).
  std::vector<Eigen::MatrixXd> factors;
  factors.reserve(prior_covariances.size());
  Eigen::MatrixXd b(phi.rows(), phi.cols());
  Eigen::Index offset = 0;
  for (const auto& g : prior_covariances) {
    factors.push_back(cholesky_factor(g));
    const Eigen::Index n = g.rows();
    b.middleCols(offset, n).noalias() =
        phi.middleCols(offset, n) * factors.back().triangularView<Eigen::Lower>();
    offset += n;
  }

  Eigen::MatrixXd a = b.transpose() * b;
  a.diagonal().array() += lambda;
  const Eigen::VectorXd rhs = b.transpose() * y;
  Eigen::LLT<Eigen::MatrixXd> llt(a);
  if (llt.info() != Eigen::Success) {
    throw FactorizationError("ridge_solve: normal matrix is not positive definite");
  }
  const Eigen::VectorXd z = llt.solve(rhs);

  RidgeSolution sol;
  const double rhs_norm = rhs.norm();
  sol.normal_residual = rhs_norm > 0.0 ? (a * z - rhs).norm() / rhs_norm : (a * z).norm();

  sol.coefficients.resize(phi.cols());
  offset = 0;
  for (const auto& l : factors) {
    const Eigen::Index n = l.rows();
    sol.coefficients.segment(offset, n).noalias() =
        l.triangularView<Eigen::Lower>() * z.segment(offset, n);
    offset += n;
  }
  return sol;
}

}  // namespace lpvff
