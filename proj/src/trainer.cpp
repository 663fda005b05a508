#include "flannint/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>

#include "flannint/errors.hpp"

namespace flannint {

namespace {

constexpr double kDivergenceThreshold = 1e12;

void require_interval(double a, double b) {
  if (!std::isfinite(a) || !std::isfinite(b) || !(b > a)) {
    throw InvalidArgumentError("interval must be finite with b > a");
  }
}

void require_weights(std::span<const double> w, const BasisSet& basis) {
  if (w.size() != static_cast<std::size_t>(basis.degree())) {
    throw InvalidArgumentError("expected " + std::to_string(basis.degree()) + " weights, got " +
                               std::to_string(w.size()));
  }
}

// Row-major k×n matrix of link derivatives at the sample points, plus targets.
struct DesignMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> a;
  std::vector<double> y;

  const double* row(std::size_t i) const { return a.data() + i * cols; }
};

DesignMatrix build_design(const Integrand* f, const BasisSet& basis,
                          std::span<const double> points) {
  DesignMatrix d;
  d.rows = points.size();
  d.cols = static_cast<std::size_t>(basis.degree());
  d.a.resize(d.rows * d.cols);
  if (f) d.y.resize(d.rows);
  for (std::size_t i = 0; i < d.rows; ++i) {
    basis.expand_derivative_into(points[i], d.a.data() + i * d.cols);
    if (f) d.y[i] = (*f)(points[i]);
  }
  return d;
}

double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t j = 0; j < n; ++j) s += a[j] * b[j];
  return s;
}

// Residuals e = y − Aw into `e`; returns ½‖e‖².
double residuals(const DesignMatrix& d, const std::vector<double>& w, std::vector<double>& e) {
  double sum = 0.0;
  for (std::size_t i = 0; i < d.rows; ++i) {
    e[i] = d.y[i] - dot(d.row(i), w.data(), d.cols);
    sum += e[i] * e[i];
  }
  return 0.5 * sum;
}

std::vector<double> gram(const DesignMatrix& d) {
  std::vector<double> g(d.cols * d.cols, 0.0);
  for (std::size_t i = 0; i < d.rows; ++i) {
    const double* r = d.row(i);
    for (std::size_t p = 0; p < d.cols; ++p) {
      for (std::size_t q = 0; q < d.cols; ++q) g[p * d.cols + q] += r[p] * r[q];
    }
  }
  return g;
}

double power_iteration(const std::vector<double>& g, std::size_t n) {
  std::vector<double> v(n, 1.0 / std::sqrt(static_cast<double>(n)));
  std::vector<double> gv(n);
  double lambda = 0.0;
  for (int it = 0; it < 100000; ++it) {
    for (std::size_t p = 0; p < n; ++p) gv[p] = dot(g.data() + p * n, v.data(), n);
    const double rayleigh = dot(v.data(), gv.data(), n);
    const double norm = std::sqrt(dot(gv.data(), gv.data(), n));
    if (norm == 0.0) return 0.0;
    for (std::size_t p = 0; p < n; ++p) v[p] = gv[p] / norm;
    if (std::abs(rayleigh - lambda) <= 1e-15 * std::abs(rayleigh)) return rayleigh;
    lambda = rayleigh;
  }
  return lambda;
}

std::vector<double> initial_weights(const TrainingConfig& config) {
  std::vector<double> w(static_cast<std::size_t>(config.degree), 0.0);
  if (config.init == InitScheme::Uniform) {
    // Explicit 53-bit mapping: std::uniform_real_distribution is not
    // reproducible across standard libraries.
    std::mt19937_64 gen(config.seed);
    const double span = config.init_hi - config.init_lo;
    for (auto& v : w) {
      const double unit = static_cast<double>(gen() >> 11) * 0x1.0p-53;
      v = config.init_lo + span * unit;
    }
  }
  return w;
}

}  // namespace

void TrainingConfig::validate() const {
  if (degree < 1 || degree > BasisSet::kMaxDegree) {
    throw InvalidArgumentError("degree must be in [1, " + std::to_string(BasisSet::kMaxDegree) +
                               "]");
  }
  if (k < degree) {
    throw InvalidArgumentError("k = " + std::to_string(k) + " training points cannot determine " +
                               std::to_string(degree) + " weights (need k >= degree)");
  }
  if (eta && !(*eta > 0.0 && std::isfinite(*eta))) {
    throw InvalidArgumentError("learning rate must be positive");
  }
  if (!(tolerance > 0.0)) throw InvalidArgumentError("tolerance must be positive");
  if (max_iterations < 1) throw InvalidArgumentError("max_iterations must be positive");
  if (init == InitScheme::Uniform && !(init_hi > init_lo)) {
    throw InvalidArgumentError("uniform initialization needs hi > lo");
  }
}

std::vector<double> sample_points(double a, double b, int k) {
  require_interval(a, b);
  if (k < 1) throw InvalidArgumentError("k must be at least 1");
  std::vector<double> xs(static_cast<std::size_t>(k));
  const double h = (b - a) / (k + 1);
  for (int i = 1; i <= k; ++i) xs[static_cast<std::size_t>(i - 1)] = a + i * h;
  return xs;
}

double residual(const Integrand& f, std::span<const double> w, const BasisSet& basis, double x) {
  require_weights(w, basis);
  const auto dphi = basis.expand_derivative(x);
  return f(x) - dot(w.data(), dphi.data(), w.size());
}

double error(const Integrand& f, std::span<const double> w, const BasisSet& basis,
             std::span<const double> points) {
  double sum = 0.0;
  for (double x : points) {
    const double e = residual(f, w, basis, x);
    sum += e * e;
  }
  return 0.5 * sum;
}

std::vector<double> gradient(const Integrand& f, std::span<const double> w,
                             const BasisSet& basis, std::span<const double> points) {
  require_weights(w, basis);
  std::vector<double> grad(w.size(), 0.0);
  for (double x : points) {
    const auto dphi = basis.expand_derivative(x);
    const double e = f(x) - dot(w.data(), dphi.data(), w.size());
    for (std::size_t j = 0; j < grad.size(); ++j) grad[j] -= e * dphi[j];
  }
  return grad;
}

std::vector<double> gd_step(std::span<const double> w, std::span<const double> grad, double eta) {
  if (w.size() != grad.size()) throw InvalidArgumentError("weight/gradient length mismatch");
  std::vector<double> out(w.size());
  for (std::size_t j = 0; j < w.size(); ++j) out[j] = w[j] - eta * grad[j];
  return out;
}

double max_gram_eigenvalue(const BasisSet& basis, std::span<const double> points) {
  const DesignMatrix d = build_design(nullptr, basis, points);
  return power_iteration(gram(d), d.cols);
}

TrainingResult train(const Integrand& f, double a, double b, const TrainingConfig& config) {
  require_interval(a, b);
  config.validate();

  const BasisSet basis = config.basis_for(a, b);
  const auto points = sample_points(a, b, config.k);
  const DesignMatrix d = build_design(&f, basis, points);
  const double eta = config.eta ? *config.eta : 1.0 / power_iteration(gram(d), d.cols);

  std::vector<double> w = initial_weights(config);
  std::vector<double> e(d.rows);
  std::vector<double> grad(d.cols);

  ConvergenceTrace trace;
  const double initial_error = residuals(d, w, e);
  if (!std::isfinite(initial_error)) throw DivergenceError(0, initial_error);
  double current = initial_error;

  while (current > config.tolerance && trace.iterations_run < config.max_iterations) {
    // Same arithmetic as gradient() and gd_step(), on the cached design matrix.
    std::fill(grad.begin(), grad.end(), 0.0);
    for (std::size_t i = 0; i < d.rows; ++i) {
      const double* r = d.row(i);
      for (std::size_t j = 0; j < d.cols; ++j) grad[j] -= e[i] * r[j];
    }
    for (std::size_t j = 0; j < d.cols; ++j) w[j] -= eta * grad[j];

    current = residuals(d, w, e);
    ++trace.iterations_run;
    trace.errors.push_back(current);
    if (!std::isfinite(current) ||
        (current > kDivergenceThreshold && current > initial_error)) {
      throw DivergenceError(static_cast<std::size_t>(trace.iterations_run), current);
    }
  }
  trace.converged = current <= config.tolerance;

  return TrainingResult{TrainedNetwork(std::move(w), basis, a, b, current), std::move(trace), eta};
}

std::vector<double> solve_least_squares(const Integrand& f, double a, double b,
                                        const BasisSet& basis, std::span<const double> points) {
  require_interval(a, b);
  const std::size_t n = static_cast<std::size_t>(basis.degree());
  if (points.size() < n) {
    throw InvalidArgumentError("least squares needs at least as many points as weights");
  }
  for (double x : points) {
    if (!(x >= a && x <= b)) throw InvalidArgumentError("sample point outside [a, b]");
  }

  const DesignMatrix d = build_design(&f, basis, points);
  std::vector<double> m = gram(d);
  std::vector<double> rhs(n, 0.0);
  for (std::size_t i = 0; i < d.rows; ++i) {
    for (std::size_t j = 0; j < n; ++j) rhs[j] += d.row(i)[j] * d.y[i];
  }

  std::vector<double> scale(n, 0.0);
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = 0; q < n; ++q) scale[p] = std::fmax(scale[p], std::abs(m[p * n + q]));
    if (scale[p] == 0.0) throw RankDeficiencyError("normal equations have an all-zero row");
  }

  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    double best = -1.0;
    for (std::size_t r = col; r < n; ++r) {
      const double ratio = std::abs(m[r * n + col]) / scale[r];
      if (ratio > best) {
        best = ratio;
        pivot = r;
      }
    }
    if (best < 1e-12) {
      throw RankDeficiencyError("normal equations are rank deficient (pivot " +
                                std::to_string(col + 1) + " below 1e-12 of its row scale)");
    }
    if (pivot != col) {
      for (std::size_t q = 0; q < n; ++q) std::swap(m[col * n + q], m[pivot * n + q]);
      std::swap(rhs[col], rhs[pivot]);
      std::swap(scale[col], scale[pivot]);
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      const double factor = m[r * n + col] / m[col * n + col];
      if (factor == 0.0) continue;
      for (std::size_t q = col; q < n; ++q) m[r * n + q] -= factor * m[col * n + q];
      rhs[r] -= factor * rhs[col];
    }
  }

  std::vector<double> w(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = rhs[i];
    for (std::size_t q = i + 1; q < n; ++q) s -= m[i * n + q] * w[q];
    w[i] = s / m[i * n + i];
  }
  return w;
}

DivergenceError::DivergenceError(std::size_t iteration, double error_value)
    : Error([&] {
        char buf[200];
        std::snprintf(buf, sizeof buf,
                      "training diverged at iteration %zu (E = %.6g); lower --eta or enable "
                      "--scale",
                      iteration, error_value);
        return std::string(buf);
      }()),
      iteration_(iteration),
      error_value_(error_value) {}

}  // namespace flannint
