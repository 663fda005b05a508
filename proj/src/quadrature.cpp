#include "flannint/quadrature.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "flannint/errors.hpp"

namespace flannint {

namespace {

void require_interval(double a, double b) {
  if (!std::isfinite(a) || !std::isfinite(b) || !(b > a)) {
    throw InvalidArgumentError("quadrature interval must be finite with b > a");
  }
}

void require_bound_inputs(double max_abs_derivative, double a, double b, double h) {
  require_interval(a, b);
  if (!(max_abs_derivative >= 0.0)) {
    throw InvalidArgumentError("derivative bound must be non-negative");
  }
  if (!(h > 0.0)) throw InvalidArgumentError("step h must be positive");
}

constexpr long kMaxEvaluations = 1'000'000;
constexpr int kMaxDepth = 200;

class AdaptiveSimpson {
 public:
  explicit AdaptiveSimpson(const Integrand& f) : f_(f) {}

  double run(double a, double b, double rel_tol) {
    const double fa = eval(a);
    const double fm = eval(0.5 * (a + b));
    const double fb = eval(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    // Scale from a coarse 2^8-panel pass so near-cancelling integrands do not
    // get a vanishing tolerance from the first three samples.
    const double scale = std::fmax(std::abs(whole), coarse_magnitude(a, b));
    const double tol = std::fmax(rel_tol * scale, 1e-300);
    return refine(a, b, fa, fm, fb, whole, tol, 0);
  }

  long evaluations() const noexcept { return evaluations_; }

 private:
  double eval(double x) {
    if (++evaluations_ > kMaxEvaluations) {
      throw NonConvergenceError("reference quadrature did not converge within " +
                                std::to_string(kMaxEvaluations) + " evaluations");
    }
    return f_(x);
  }

  double coarse_magnitude(double a, double b) {
    constexpr int kPanels = 256;
    const double h = (b - a) / kPanels;
    double sum = 0.0;
    for (int i = 0; i <= kPanels; ++i) {
      const double w = (i == 0 || i == kPanels) ? 0.5 : 1.0;
      sum += w * std::abs(eval(a + i * h));
    }
    return sum * h;
  }

  double refine(double a, double b, double fa, double fm, double fb, double whole, double tol,
                int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = eval(lm);
    const double frm = eval(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * tol || lm <= a || rm >= b) {
      return left + right + delta / 15.0;
    }
    if (depth >= kMaxDepth) {
      throw NonConvergenceError("reference quadrature exceeded maximum bisection depth");
    }
    // Floor the split tolerance at a few ulps of the local value; below that the
    // Richardson estimate is pure rounding noise.
    const double half_tol =
        std::fmax(0.5 * tol, 4.0 * std::numeric_limits<double>::epsilon() * std::abs(left + right));
    return refine(a, m, fa, flm, fm, left, half_tol, depth + 1) +
           refine(m, b, fm, frm, fb, right, half_tol, depth + 1);
  }

  const Integrand& f_;
  long evaluations_ = 0;
};

}  // namespace

std::string_view to_string(QuadratureMethod m) noexcept {
  switch (m) {
    case QuadratureMethod::Trapezoid:
      return "trapezoid";
    case QuadratureMethod::Simpson:
      return "simpson";
    case QuadratureMethod::Reference:
      return "reference";
    case QuadratureMethod::Flann:
      return "flann";
  }
  return "reference";
}

QuadratureResult trapezoid(const Integrand& f, double a, double b, int m) {
  require_interval(a, b);
  if (m < 1) throw InvalidArgumentError("trapezoid needs at least one subinterval");
  const double h = (b - a) / m;
  double sum = 0.5 * (f(a) + f(b));
  for (int j = 1; j < m; ++j) sum += f(a + j * h);
  return {h * sum, QuadratureMethod::Trapezoid, m, std::nullopt};
}

QuadratureResult simpson(const Integrand& f, double a, double b, int m) {
  require_interval(a, b);
  if (m < 2 || m % 2 != 0) {
    throw ParityError("Simpson's rule needs an even number of subintervals >= 2, got " +
                      std::to_string(m));
  }
  const double h = (b - a) / m;
  double sum = f(a) + f(b);
  for (int j = 1; j < m; ++j) sum += (j % 2 == 1 ? 4.0 : 2.0) * f(a + j * h);
  return {h / 3.0 * sum, QuadratureMethod::Simpson, m, std::nullopt};
}

double trapezoid_error_bound(double max_abs_f2, double a, double b, double h) {
  require_bound_inputs(max_abs_f2, a, b, h);
  return h * h * (b - a) / 12.0 * max_abs_f2;
}

double simpson_error_bound(double max_abs_f4, double a, double b, double h) {
  require_bound_inputs(max_abs_f4, a, b, h);
  return (b - a) * h * h * h * h / 180.0 * max_abs_f4;
}

QuadratureResult reference(const Integrand& f, double a, double b, double rel_tol) {
  require_interval(a, b);
  if (!(rel_tol >= 1e-13)) throw InvalidArgumentError("reference rel_tol must be >= 1e-13");
  AdaptiveSimpson quad(f);
  const double value = quad.run(a, b, rel_tol);
  return {value, QuadratureMethod::Reference, std::nullopt, rel_tol * std::abs(value)};
}

}  // namespace flannint
