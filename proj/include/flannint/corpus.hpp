#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace flannint {

struct CorpusEntry {
  std::string name;
  std::string expression;
  double a;
  double b;
  std::optional<double> analytic;  // closed-form value of the integral, when known
  std::string note;                // how the analytic value was derived
};

/// Built-in integrands: the three worked experiments, the elliptic
/// application and a few polynomial exactness witnesses.
std::span<const CorpusEntry> corpus();

/// nullptr when no entry has that name.
const CorpusEntry* find_corpus_entry(std::string_view name);

}  // namespace flannint
