#pragma once

#include <optional>
#include <string_view>

#include "flannint/expr.hpp"

namespace flannint {

enum class QuadratureMethod { Trapezoid, Simpson, Reference, Flann };

std::string_view to_string(QuadratureMethod m) noexcept;

struct QuadratureResult {
  double value = 0.0;
  QuadratureMethod method = QuadratureMethod::Reference;
  std::optional<int> subintervals;  // set for trapezoid and simpson only
  std::optional<double> error_bound;
};

/// Composite trapezoid over m equal subintervals.
QuadratureResult trapezoid(const Integrand& f, double a, double b, int m);

/// Composite Simpson 1/3 over m equal subintervals; m must be even.
QuadratureResult simpson(const Integrand& f, double a, double b, int m);

/// h²(b − a)/12 · max|f″|.
double trapezoid_error_bound(double max_abs_f2, double a, double b, double h);

/// (b − a)h⁴/180 · max|f⁽⁴⁾|.
double simpson_error_bound(double max_abs_f4, double a, double b, double h);

/// Adaptive Simpson with Richardson extrapolation, to relative tolerance
/// rel_tol (≥ 1e-13). Throws NonConvergenceError after 10⁶ evaluations.
QuadratureResult reference(const Integrand& f, double a, double b, double rel_tol = 1e-12);

}  // namespace flannint
