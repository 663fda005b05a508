#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "flannint/basis.hpp"

namespace flannint {

/// The trained antiderivative approximation N(x) = Σ wᵢΦᵢ(x) together with
/// the interval it was trained on. Immutable once built.
class TrainedNetwork {
 public:
  /// Throws InvalidArgumentError when the weight count does not match the
  /// basis degree, the domain is not b > a, or final_error is negative.
  TrainedNetwork(std::vector<double> weights, BasisSet basis, double a, double b,
                 double final_error);

  const std::vector<double>& weights() const noexcept { return weights_; }
  const BasisSet& basis() const noexcept { return basis_; }
  double domain_a() const noexcept { return a_; }
  double domain_b() const noexcept { return b_; }
  double final_error() const noexcept { return final_error_; }

 private:
  std::vector<double> weights_;
  BasisSet basis_;
  double a_;
  double b_;
  double final_error_;
};

/// N(x).
double evaluate_network(const TrainedNetwork& net, double x);

/// N(b1) − N(a1). Reversed limits are allowed. Throws OutOfDomainError unless
/// both limits lie inside the trained interval.
double integrate(const TrainedNetwork& net, double a1, double b1);

/// Flat JSON object {degree, scaling, weights, domain, final_error}; weights
/// and reals are written with 17 significant digits.
std::string to_json(const TrainedNetwork& net);

/// Inverse of to_json. Throws InvalidArgumentError on malformed input.
TrainedNetwork network_from_json(std::string_view text);

}  // namespace flannint
