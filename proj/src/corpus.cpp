#include "flannint/corpus.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace flannint {

namespace {

std::vector<CorpusEntry> build() {
  const double root5 = std::sqrt(5.0);
  return {
      {"sqrt1px2", "sqrt(1+x^2)", 0.0, 2.0, 0.5 * (2.0 * root5 + std::log(2.0 + root5)),
       "1/2 (x sqrt(1+x^2) + asinh x) at x = 2"},
      {"pow2x", "2^x", 0.0, 2.0, 3.0 / std::numbers::ln2, "(2^2 - 2^0) / ln 2"},
      {"x6", "x^6", 0.0, 6.0, std::pow(6.0, 7) / 7.0, "6^7 / 7"},
      {"elliptic_half", "sqrt(1-0.5*sin(x)^2)", 0.0, std::numbers::pi / 2.0,
       std::comp_ellint_2(std::sqrt(0.5)),
       "complete elliptic integral of the second kind E(m = 0.5)"},
      {"linear", "x", 0.0, 2.0, 2.0, "x^2 / 2 at x = 2"},
      {"quadratic", "3*x^2", 0.0, 2.0, 8.0, "x^3 at x = 2"},
      {"cubic", "4*x^3", 0.0, 1.0, 1.0, "x^4 at x = 1"},
  };
}

}  // namespace

std::span<const CorpusEntry> corpus() {
  static const std::vector<CorpusEntry> entries = build();
  return entries;
}

const CorpusEntry* find_corpus_entry(std::string_view name) {
  for (const auto& e : corpus()) {
    if (e.name == name) return &e;
  }
  return nullptr;
}

}  // namespace flannint
