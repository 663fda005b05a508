#pragma once

#include <string_view>
#include <vector>

namespace flannint {

/// How the input is remapped before the monomial links are applied.
enum class Scaling {
  None,      // Φᵢ(x) = xⁱ
  Unit,      // u = (x − a)/(b − a), maps [a,b] onto [0,1]
  Centered,  // u = (2x − a − b)/(b − a), maps [a,b] onto [−1,1]
};

std::string_view to_string(Scaling s) noexcept;

/// Parses "none"/"off", "unit", "centered"/"on". Throws InvalidArgumentError.
Scaling parse_scaling(std::string_view text);

/// Functional links Φ₁..Φₙ, Φᵢ = uⁱ. There is no constant link: any constant
/// in the antiderivative cancels in N(b) − N(a) and is not identifiable from
/// derivative samples.
class BasisSet {
 public:
  static constexpr int kMaxDegree = 16;

  /// Unscaled monomials x, x², ..., xⁿ.
  explicit BasisSet(int degree);

  /// Scaled monomials on [a, b]. `scaling` may be None, in which case a and b
  /// are ignored.
  BasisSet(int degree, Scaling scaling, double a, double b);

  int degree() const noexcept { return degree_; }
  Scaling scaling() const noexcept { return scaling_; }
  double scale_a() const noexcept { return a_; }
  double scale_b() const noexcept { return b_; }

  /// [Φ₁(x), ..., Φₙ(x)].
  std::vector<double> expand(double x) const;

  /// [Φ₁′(x), ..., Φₙ′(x)], chain rule applied when scaled.
  std::vector<double> expand_derivative(double x) const;

  /// Writes expand_derivative(x) into `out` (size n) without allocating.
  void expand_derivative_into(double x, double* out) const;

  friend bool operator==(const BasisSet&, const BasisSet&) = default;

 private:
  double to_u(double x) const noexcept;
  double du_dx() const noexcept;

  int degree_;
  Scaling scaling_ = Scaling::None;
  double a_ = 0.0;
  double b_ = 1.0;
};

}  // namespace flannint
