#include "flannint/basis.hpp"

#include <cmath>
#include <string>

#include "flannint/errors.hpp"

namespace flannint {

std::string_view to_string(Scaling s) noexcept {
  switch (s) {
    case Scaling::None:
      return "none";
    case Scaling::Unit:
      return "unit";
    case Scaling::Centered:
      return "centered";
  }
  return "none";
}

Scaling parse_scaling(std::string_view text) {
  if (text == "none" || text == "off") return Scaling::None;
  if (text == "unit") return Scaling::Unit;
  if (text == "centered" || text == "on") return Scaling::Centered;
  throw InvalidArgumentError("unknown scaling '" + std::string(text) +
                             "' (expected on, off, unit or centered)");
}

BasisSet::BasisSet(int degree) : BasisSet(degree, Scaling::None, 0.0, 1.0) {}

BasisSet::BasisSet(int degree, Scaling scaling, double a, double b)
    : degree_(degree), scaling_(scaling) {
  if (degree < 1 || degree > kMaxDegree) {
    throw InvalidArgumentError("basis degree must be in [1, " + std::to_string(kMaxDegree) +
                               "], got " + std::to_string(degree));
  }
  if (scaling != Scaling::None) {
    if (!std::isfinite(a) || !std::isfinite(b) || !(b > a)) {
      throw InvalidArgumentError("scaled basis needs a finite interval with b > a");
    }
    a_ = a;
    b_ = b;
  }
}

double BasisSet::to_u(double x) const noexcept {
  switch (scaling_) {
    case Scaling::None:
      return x;
    case Scaling::Unit:
      return (x - a_) / (b_ - a_);
    case Scaling::Centered:
      return (2.0 * x - a_ - b_) / (b_ - a_);
  }
  return x;
}

double BasisSet::du_dx() const noexcept {
  switch (scaling_) {
    case Scaling::None:
      return 1.0;
    case Scaling::Unit:
      return 1.0 / (b_ - a_);
    case Scaling::Centered:
      return 2.0 / (b_ - a_);
  }
  return 1.0;
}

std::vector<double> BasisSet::expand(double x) const {
  const double u = to_u(x);
  std::vector<double> out(static_cast<std::size_t>(degree_));
  double p = 1.0;
  for (auto& v : out) {
    p *= u;
    v = p;
  }
  return out;
}

std::vector<double> BasisSet::expand_derivative(double x) const {
  std::vector<double> out(static_cast<std::size_t>(degree_));
  expand_derivative_into(x, out.data());
  return out;
}

void BasisSet::expand_derivative_into(double x, double* out) const {
  const double u = to_u(x);
  const double scale = du_dx();
  double p = 1.0;  // u^(i-1)
  for (int i = 1; i <= degree_; ++i) {
    out[i - 1] = static_cast<double>(i) * p * scale;
    p *= u;
  }
}

}  // namespace flannint
