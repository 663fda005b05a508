#include "flannint/integrator.hpp"

#include <cmath>
#include <cstdio>
#include <json.hpp>

#include "flannint/errors.hpp"

namespace flannint {

TrainedNetwork::TrainedNetwork(std::vector<double> weights, BasisSet basis, double a, double b,
                               double final_error)
    : weights_(std::move(weights)), basis_(basis), a_(a), b_(b), final_error_(final_error) {
  if (weights_.size() != static_cast<std::size_t>(basis_.degree())) {
    throw InvalidArgumentError("network has " + std::to_string(weights_.size()) +
                               " weights for a degree-" + std::to_string(basis_.degree()) +
                               " basis");
  }
  if (!std::isfinite(a) || !std::isfinite(b) || !(b > a)) {
    throw InvalidArgumentError("network domain must satisfy b > a");
  }
  if (!(final_error >= 0.0)) throw InvalidArgumentError("final_error must be non-negative");
}

double evaluate_network(const TrainedNetwork& net, double x) {
  const auto phi = net.basis().expand(x);
  double sum = 0.0;
  for (std::size_t i = 0; i < phi.size(); ++i) sum += net.weights()[i] * phi[i];
  return sum;
}

double integrate(const TrainedNetwork& net, double a1, double b1) {
  auto inside = [&](double x) { return x >= net.domain_a() && x <= net.domain_b(); };
  if (!inside(a1) || !inside(b1)) {
    const double lo = a1 < b1 ? a1 : b1;
    const double hi = a1 < b1 ? b1 : a1;
    char buf[160];
    std::snprintf(buf, sizeof buf, "[%.17g, %.17g] is outside the trained domain [%.17g, %.17g]",
                  lo, hi, net.domain_a(), net.domain_b());
    throw OutOfDomainError(buf);
  }
  if (a1 == b1) return 0.0;
  return evaluate_network(net, b1) - evaluate_network(net, a1);
}

namespace {

std::string real17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string to_json(const TrainedNetwork& net) {
  const BasisSet& basis = net.basis();
  std::string out = "{\"degree\":" + std::to_string(basis.degree()) + ",\"scaling\":";
  if (basis.scaling() == Scaling::None) {
    out += "null";
  } else {
    out += "{\"a\":" + real17(basis.scale_a()) + ",\"b\":" + real17(basis.scale_b()) +
           ",\"map\":\"" + std::string(to_string(basis.scaling())) + "\"}";
  }
  out += ",\"weights\":[";
  for (std::size_t i = 0; i < net.weights().size(); ++i) {
    if (i) out += ',';
    out += real17(net.weights()[i]);
  }
  out += "],\"domain\":[" + real17(net.domain_a()) + "," + real17(net.domain_b()) + "]";
  out += ",\"final_error\":" + real17(net.final_error()) + "}";
  return out;
}

TrainedNetwork network_from_json(std::string_view text) {
  try {
    const auto j = nlohmann::json::parse(text);
    const int degree = j.at("degree").get<int>();
    const auto& scaling = j.at("scaling");
    BasisSet basis(degree);
    if (!scaling.is_null()) {
      const Scaling map = parse_scaling(scaling.value("map", std::string("unit")));
      basis = BasisSet(degree, map, scaling.at("a").get<double>(), scaling.at("b").get<double>());
    }
    const auto& domain = j.at("domain");
    if (!domain.is_array() || domain.size() != 2) {
      throw InvalidArgumentError("model 'domain' must be a two-element array");
    }
    return TrainedNetwork(j.at("weights").get<std::vector<double>>(), basis,
                          domain[0].get<double>(), domain[1].get<double>(),
                          j.at("final_error").get<double>());
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgumentError(std::string("malformed model JSON: ") + e.what());
  }
}

}  // namespace flannint
