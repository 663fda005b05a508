#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <cstring>
#include <limits>
#include <random>
#include <vector>

#include "flannint/corpus.hpp"
#include "flannint/errors.hpp"
#include "flannint/quadrature.hpp"
#include "flannint/trainer.hpp"

using namespace flannint;

namespace {

const Integrand kOne = Integrand::parse("1");
const Integrand kIdentity = Integrand::parse("x");
const Integrand kThreeXSquared = Integrand::parse("3*x^2");

double norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

Eigen::MatrixXd design(const BasisSet& basis, const std::vector<double>& points) {
  Eigen::MatrixXd a(points.size(), basis.degree());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto row = basis.expand_derivative(points[i]);
    for (int j = 0; j < basis.degree(); ++j) a(static_cast<Eigen::Index>(i), j) = row[j];
  }
  return a;
}

double eigen_lambda_max(const BasisSet& basis, const std::vector<double>& points) {
  const Eigen::MatrixXd a = design(basis, points);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a.transpose() * a);
  return solver.eigenvalues().maxCoeff();
}

// 1e-15, widened to the forward rounding error of E = ½‖y − Aw‖²: each residual
// carries ~eps·‖y‖ absolute error from the cancellation y − Aw.
double descent_slack(double e_t, double y_norm) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  return 1e-15 + 64 * eps * (e_t + y_norm * std::sqrt(2 * e_t));
}

}  // namespace

TEST_CASE("sample_points: uniform interior grid with k + 1 gaps") {
  const auto p = sample_points(0.0, 2.0, 3);
  REQUIRE(p.size() == 3);
  CHECK(p[0] == 0.5);
  CHECK(p[1] == 1.0);
  CHECK(p[2] == 1.5);

  const auto q = sample_points(0.0, 6.0, 10);
  REQUIRE(q.size() == 10);
  for (int i = 0; i < 10; ++i) CHECK(q[i] == doctest::Approx(6.0 * (i + 1) / 11.0));
  for (int i = 1; i < 10; ++i) CHECK(q[i] - q[i - 1] == doctest::Approx(6.0 / 11.0));
  CHECK(q.front() > 0.0);
  CHECK(q.back() < 6.0);

  CHECK(sample_points(0.0, 1.0, 1) == std::vector<double>{0.5});
  CHECK_THROWS_AS(sample_points(1.0, 1.0, 3), InvalidArgumentError);
  CHECK_THROWS_AS(sample_points(2.0, 1.0, 3), InvalidArgumentError);
  CHECK_THROWS_AS(sample_points(0.0, 1.0, 0), InvalidArgumentError);
}

TEST_CASE("residual") {
  CHECK(residual(kOne, std::vector<double>{0, 0, 0}, BasisSet(3), 0.7) == 1.0);
  CHECK(residual(kThreeXSquared, std::vector<double>{0, 0, 1}, BasisSet(3), 1.7) ==
        doctest::Approx(0.0).scale(1.0));
  CHECK(residual(kIdentity, std::vector<double>{1, 0}, BasisSet(2), 2.0) == 1.0);
  CHECK_THROWS_AS(residual(kOne, std::vector<double>{0}, BasisSet(3), 0.0), InvalidArgumentError);
  CHECK_THROWS_AS(residual(Integrand::parse("1/x"), std::vector<double>{0}, BasisSet(1), 0.0),
                  DomainError);
}

TEST_CASE("error: half the sum of squared residuals") {
  CHECK(error(kOne, std::vector<double>{0, 0}, BasisSet(2), std::vector<double>{0.5, 1.0}) == 1.0);

  const std::vector<double> points{0.5, 1.0, 1.5};
  const double e = error(kIdentity, std::vector<double>{0}, BasisSet(1), points);
  double brute = 0.0;
  for (double x : points) brute += x * x;
  CHECK(e == doctest::Approx(0.5 * brute));
  CHECK(e == doctest::Approx(1.75));

  const BasisSet basis(4, Scaling::Centered, 0.0, 2.0);
  const auto pts = sample_points(0.0, 2.0, 8);
  const auto w = solve_least_squares(kThreeXSquared, 0.0, 2.0, basis, pts);
  CHECK(error(kThreeXSquared, w, basis, pts) <= 1e-20);
}

TEST_CASE("gradient: -Σ eᵢ Φⱼ′(xᵢ)") {
  const auto g = gradient(kOne, std::vector<double>{0, 0}, BasisSet(2), std::vector<double>{1.0});
  CHECK(g == std::vector<double>{-1.0, -2.0});

  const auto zero = gradient(kThreeXSquared, std::vector<double>{0, 0, 1}, BasisSet(3),
                             std::vector<double>{0.5, 1.0, 2.0});
  for (double v : zero) CHECK(v == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("gd_step") {
  CHECK(gd_step(std::vector<double>{0}, std::vector<double>{-1}, 0.1) == std::vector<double>{0.1});
  CHECK(gd_step(std::vector<double>{3, 4}, std::vector<double>{0, 0}, 0.7) ==
        std::vector<double>{3, 4});
  CHECK(gd_step(std::vector<double>{1, 2}, std::vector<double>{2, -4}, 0.5) ==
        std::vector<double>{0, 4});
  CHECK_THROWS_AS(gd_step(std::vector<double>{1}, std::vector<double>{1, 2}, 0.5),
                  InvalidArgumentError);
}

TEST_CASE("property: analytic gradient matches central differences (50 configurations)") {
  std::mt19937_64 gen(2024);
  const auto entries = corpus();
  int checked = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const auto& entry = entries[std::uniform_int_distribution<std::size_t>(0, entries.size() - 1)(gen)];
    const Integrand f = Integrand::parse(entry.expression);
    const int n = std::uniform_int_distribution<int>(1, 6)(gen);
    const int k = std::uniform_int_distribution<int>(n, 12)(gen);
    const Scaling scaling = static_cast<Scaling>(std::uniform_int_distribution<int>(0, 2)(gen));
    const BasisSet basis(n, scaling, entry.a, entry.b);
    const auto points = sample_points(entry.a, entry.b, k);
    std::vector<double> w(static_cast<std::size_t>(n));
    for (auto& v : w) v = std::uniform_real_distribution<double>(-1.0, 1.0)(gen);

    const auto g = gradient(f, w, basis, points);
    std::vector<double> fd(w.size());
    for (std::size_t j = 0; j < w.size(); ++j) {
      // E is quadratic in w, so the central difference has no truncation error.
      const double h = 1e-3;
      auto up = w, down = w;
      up[j] += h;
      down[j] -= h;
      fd[j] = (error(f, up, basis, points) - error(f, down, basis, points)) / (2 * h);
    }
    std::vector<double> diff(w.size());
    for (std::size_t j = 0; j < w.size(); ++j) diff[j] = g[j] - fd[j];
    INFO(entry.name, " n=", n, " k=", k);
    CHECK(norm(diff) <= 1e-6 * std::fmax(1.0, norm(g)));
    ++checked;
  }
  CHECK(checked == 50);
}

TEST_CASE("max_gram_eigenvalue agrees with a dense eigensolver") {
  for (Scaling scaling : {Scaling::None, Scaling::Unit, Scaling::Centered}) {
    for (int n : {1, 3, 6, 8}) {
      const BasisSet basis(n, scaling, 0.0, 2.0);
      const auto points = sample_points(0.0, 2.0, 12);
      const double expected = eigen_lambda_max(basis, points);
      CHECK(max_gram_eigenvalue(basis, points) == doctest::Approx(expected).epsilon(1e-10));
    }
  }
}

TEST_CASE("train: representable 3x² converges and integrates to 8") {
  for (Scaling scaling : {Scaling::Centered, Scaling::Unit}) {
    TrainingConfig config;
    config.degree = 3;
    config.k = 10;
    config.scaling = scaling;
    config.tolerance = 1e-12;
    const auto result = train(kThreeXSquared, 0.0, 2.0, config);
    CHECK(result.trace.converged);
    CHECK(integrate(result.network, 0.0, 2.0) == doctest::Approx(8.0).epsilon(1e-6 / 8));
  }
}

TEST_CASE("train: sqrt(1+x^2) with defaults reaches E <= 1e-8 monotonically") {
  const Integrand f = Integrand::parse("sqrt(1+x^2)");
  TrainingConfig config;  // degree 8, k = 10, centered scaling, spectral η
  const auto result = train(f, 0.0, 2.0, config);
  CHECK(result.trace.converged);
  CHECK(result.network.final_error() <= 1e-8);
  const auto& errors = result.trace.errors;
  REQUIRE(errors.size() > 2);
  CHECK(errors.size() == static_cast<std::size_t>(result.trace.iterations_run));
  for (std::size_t t = 1; t + 1 < errors.size(); ++t) REQUIRE(errors[t + 1] <= errors[t] + 1e-15);

  // Cannot beat the exact minimizer of the same loss.
  const auto points = sample_points(0.0, 2.0, config.k);
  const auto w_ls = solve_least_squares(f, 0.0, 2.0, result.network.basis(), points);
  CHECK(result.network.final_error() >= error(f, w_ls, result.network.basis(), points) - 1e-18);
}

TEST_CASE("train: unscaled x^6 with eta = 0.01 diverges quickly") {
  TrainingConfig config;
  config.degree = 8;
  config.scaling = Scaling::None;
  config.eta = 0.01;
  try {
    train(Integrand::parse("x^6"), 0.0, 6.0, config);
    FAIL("expected divergence");
  } catch (const DivergenceError& e) {
    CHECK(e.iteration() <= 5);
  }
}

TEST_CASE("train: trace bookkeeping honors max_iterations") {
  TrainingConfig config;
  config.max_iterations = 25;
  const auto result = train(Integrand::parse("sqrt(1+x^2)"), 0.0, 2.0, config);
  CHECK(result.trace.iterations_run == 25);
  CHECK(result.trace.errors.size() == 25);
  CHECK_FALSE(result.trace.converged);
  CHECK(result.network.final_error() == result.trace.errors.back());
}

TEST_CASE("train: identical config is bitwise deterministic; seeds matter") {
  const Integrand f = Integrand::parse("2^x");
  TrainingConfig config;
  config.seed = 42;
  config.max_iterations = 5000;
  const auto r1 = train(f, 0.0, 2.0, config);
  const auto r2 = train(f, 0.0, 2.0, config);
  REQUIRE(r1.trace.errors.size() == r2.trace.errors.size());
  CHECK(std::memcmp(r1.trace.errors.data(), r2.trace.errors.data(),
                    r1.trace.errors.size() * sizeof(double)) == 0);
  CHECK(std::memcmp(r1.network.weights().data(), r2.network.weights().data(),
                    r1.network.weights().size() * sizeof(double)) == 0);

  config.seed = 43;
  const auto r3 = train(f, 0.0, 2.0, config);
  CHECK(r3.network.weights() != r1.network.weights());
}

TEST_CASE("train: zero initialization starts from E = ½Σf²") {
  TrainingConfig config;
  config.init = InitScheme::Zeros;
  config.max_iterations = 1;
  config.degree = 2;
  config.k = 2;
  config.eta = 1e-9;
  const auto r = train(kOne, 0.0, 3.0, config);
  CHECK(r.trace.errors[0] == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("config validation") {
  TrainingConfig config;
  config.k = 5;
  config.degree = 6;
  CHECK_THROWS_AS(config.validate(), InvalidArgumentError);
  config = {};
  config.eta = 0.0;
  CHECK_THROWS_AS(config.validate(), InvalidArgumentError);
  config = {};
  config.tolerance = 0.0;
  CHECK_THROWS_AS(config.validate(), InvalidArgumentError);
  config = {};
  config.max_iterations = 0;
  CHECK_THROWS_AS(config.validate(), InvalidArgumentError);
  CHECK_THROWS_AS(train(kOne, 1.0, 0.0, TrainingConfig{}), InvalidArgumentError);
}

TEST_CASE("solve_least_squares: exact representations") {
  for (int n : {3, 4, 5}) {
    const auto points = sample_points(0.0, 2.0, 10);
    const auto w = solve_least_squares(kThreeXSquared, 0.0, 2.0, BasisSet(n), points);
    for (int j = 0; j < n; ++j) CHECK(std::abs(w[j] - (j == 2 ? 1.0 : 0.0)) <= 1e-9);
  }
  const auto c = solve_least_squares(Integrand::parse("2.5"), 0.0, 1.0, BasisSet(1),
                                     sample_points(0.0, 1.0, 4));
  CHECK(c[0] == doctest::Approx(2.5));
}

TEST_CASE("solve_least_squares: sqrt(1+x^2), n = 8, k = 20") {
  const Integrand f = Integrand::parse("sqrt(1+x^2)");
  const BasisSet basis(8, Scaling::Centered, 0.0, 2.0);
  const auto points = sample_points(0.0, 2.0, 20);
  const auto w = solve_least_squares(f, 0.0, 2.0, basis, points);
  CHECK(error(f, w, basis, points) <= 1e-9);
  const TrainedNetwork net(w, basis, 0.0, 2.0, 0.0);
  const double exact = reference(f, 0.0, 2.0, 1e-12).value;
  CHECK(std::abs(integrate(net, 0.0, 2.0) - exact) <= 1e-5);
  CHECK(std::abs(integrate(net, 0.0, 2.0) - 2.9578857) <= 1e-5);

  // Stationarity: ‖∇E(w_ls)‖ ≤ 1e-8·max(1, ‖Aᵀy‖).
  const Eigen::MatrixXd a = design(basis, points);
  Eigen::VectorXd y(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) y(static_cast<Eigen::Index>(i)) = f(points[i]);
  const double aty = (a.transpose() * y).norm();
  CHECK(norm(gradient(f, w, basis, points)) <= 1e-8 * std::fmax(1.0, aty));

  // Independent route: Householder QR on the design matrix itself.
  const Eigen::VectorXd w_qr = a.colPivHouseholderQr().solve(y);
  for (int j = 0; j < 8; ++j) CHECK(w[j] == doctest::Approx(w_qr(j)).epsilon(1e-6));
}

TEST_CASE("solve_least_squares: rank deficiency and bad inputs") {
  const std::vector<double> repeated{1.0, 1.0, 1.0};
  CHECK_THROWS_AS(solve_least_squares(kIdentity, 0.0, 2.0, BasisSet(2), repeated),
                  RankDeficiencyError);
  CHECK_THROWS_AS(solve_least_squares(kIdentity, 0.0, 2.0, BasisSet(3), std::vector<double>{0.5, 1}),
                  InvalidArgumentError);
  CHECK_THROWS_AS(solve_least_squares(kIdentity, 0.0, 2.0, BasisSet(1), std::vector<double>{3.0}),
                  InvalidArgumentError);
}

TEST_CASE("property: GD under the spectral step cap descends monotonically") {
  std::mt19937_64 gen(99);
  const auto entries = corpus();
  for (int trial = 0; trial < 20; ++trial) {
    const auto& entry = entries[std::uniform_int_distribution<std::size_t>(0, entries.size() - 1)(gen)];
    TrainingConfig config;
    config.degree = std::uniform_int_distribution<int>(1, 6)(gen);
    config.k = std::uniform_int_distribution<int>(config.degree, 12)(gen);
    config.scaling = trial % 2 ? Scaling::Unit : Scaling::Centered;
    config.max_iterations = 20000;
    config.seed = static_cast<std::uint64_t>(trial);
    const BasisSet basis = config.basis_for(entry.a, entry.b);
    config.eta = 1.0 / eigen_lambda_max(basis, sample_points(entry.a, entry.b, config.k));
    const auto result = train(Integrand::parse(entry.expression), entry.a, entry.b, config);
    const auto& errors = result.trace.errors;
    double y_norm = 0.0;
    for (double x : sample_points(entry.a, entry.b, config.k)) {
      y_norm += std::pow(Integrand::parse(entry.expression)(x), 2);
    }
    y_norm = std::sqrt(y_norm);
    bool monotone = true;
    for (std::size_t t = 0; t + 1 < errors.size(); ++t) {
      monotone &= errors[t + 1] <= errors[t] + descent_slack(errors[t], y_norm);
    }
    INFO(entry.name, " n=", config.degree, " k=", config.k);
    CHECK(monotone);
  }
}

TEST_CASE("property: GD agrees with the least-squares oracle on well-conditioned problems") {
  for (const auto& entry : corpus()) {
    for (int n : {2, 4, 6}) {
      TrainingConfig config;
      config.degree = n;
      config.k = 10;
      config.tolerance = 1e-12;
      const Integrand f = Integrand::parse(entry.expression);
      const auto result = train(f, entry.a, entry.b, config);
      const auto w_ls = solve_least_squares(f, entry.a, entry.b, result.network.basis(),
                                            sample_points(entry.a, entry.b, config.k));
      std::vector<double> diff(w_ls.size());
      for (std::size_t j = 0; j < w_ls.size(); ++j) diff[j] = result.network.weights()[j] - w_ls[j];
      INFO(entry.name, " n=", n);
      CHECK(norm(diff) <= 1e-4 * std::fmax(1.0, norm(w_ls)));
    }
  }
}

TEST_CASE("property: polynomials of degree <= n-1 are fitted exactly") {
  const Integrand f = Integrand::parse("1 + 2*x - x^2 + 0.5*x^3");
  for (int n : {4, 5, 6}) {
    TrainingConfig config;
    config.degree = n;
    config.k = 12;
    const BasisSet basis = config.basis_for(-1.0, 2.0);
    const auto points = sample_points(-1.0, 2.0, config.k);
    const auto w_ls = solve_least_squares(f, -1.0, 2.0, basis, points);
    CHECK(error(f, w_ls, basis, points) <= 1e-18);
    const auto result = train(f, -1.0, 2.0, config);
    CHECK(result.trace.converged);
    CHECK(result.network.final_error() <= config.tolerance);
  }
}
