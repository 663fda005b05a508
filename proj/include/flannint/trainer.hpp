#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "flannint/basis.hpp"
#include "flannint/expr.hpp"
#include "flannint/integrator.hpp"

namespace flannint {

enum class InitScheme { Zeros, Uniform };

struct TrainingConfig {
  int k = 10;                 // training points
  std::optional<double> eta;  // learning rate; unset → 1/λ_max(AᵀA)
  long max_iterations = 2'000'000;
  double tolerance = 1e-11;   // stop when E ≤ tolerance
  InitScheme init = InitScheme::Uniform;
  double init_lo = -0.5;
  double init_hi = 0.5;
  std::uint64_t seed = 0;
  int degree = 8;
  Scaling scaling = Scaling::Centered;

  /// Throws InvalidArgumentError when an invariant is broken (η ≤ 0,
  /// tolerance ≤ 0, k < degree, ...).
  void validate() const;

  BasisSet basis_for(double a, double b) const { return BasisSet(degree, scaling, a, b); }
};

struct ConvergenceTrace {
  std::vector<double> errors;  // E after each completed update
  bool converged = false;
  long iterations_run = 0;
};

struct TrainingResult {
  TrainedNetwork network;
  ConvergenceTrace trace;
  double eta;  // step size actually used
};

/// xᵢ = a + i(b − a)/(k + 1), i = 1..k: k interior points, k + 1 equal gaps.
std::vector<double> sample_points(double a, double b, int k);

/// f(x) − w·Φ′(x).
double residual(const Integrand& f, std::span<const double> w, const BasisSet& basis, double x);

/// ½ Σ residual(xᵢ)².
double error(const Integrand& f, std::span<const double> w, const BasisSet& basis,
             std::span<const double> points);

/// dE/dwⱼ = −Σᵢ eᵢ Φⱼ′(xᵢ).
std::vector<double> gradient(const Integrand& f, std::span<const double> w,
                             const BasisSet& basis, std::span<const double> points);

/// w − η·grad.
std::vector<double> gd_step(std::span<const double> w, std::span<const double> grad, double eta);

/// Largest eigenvalue of AᵀA, Aᵢⱼ = Φⱼ′(xᵢ), by power iteration.
double max_gram_eigenvalue(const BasisSet& basis, std::span<const double> points);

/// Full-batch gradient descent on E over sample_points(a, b, k). Throws
/// DivergenceError when E turns non-finite or blows past 1e12.
TrainingResult train(const Integrand& f, double a, double b, const TrainingConfig& config);

/// Exact minimizer of E via the normal equations (AᵀA)w = Aᵀy, solved by
/// Gaussian elimination with scaled partial pivoting. Throws
/// RankDeficiencyError when a pivot falls below 1e-12 of its row scale.
std::vector<double> solve_least_squares(const Integrand& f, double a, double b,
                                        const BasisSet& basis, std::span<const double> points);

}  // namespace flannint
