#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "flannint/trainer.hpp"

namespace flannint::cli {

enum class Format { Csv, Json };

/// Everything one command needs; filled from a JSON config file, then flags.
struct RunConfig {
  std::string function;
  double a = 0.0;
  double b = 0.0;
  TrainingConfig training;
  std::string output;  // empty → standard output
  Format format = Format::Csv;
  int steps = 20;      // sweep/compare grid size
  long stride = 1;     // trace row thinning
  std::optional<double> from;  // integrate sub-interval, defaults to [a, b]
  std::optional<double> to;
  std::string save_model;
  std::string load_model;

  void validate() const;
};

using Cell = std::variant<double, long, bool, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

/// A command's table plus whether the training behind it reached tolerance.
struct CommandOutput {
  Table table;
  bool converged = true;
  std::optional<TrainedNetwork> network;
};

CommandOutput cmd_integrate(const RunConfig& config);
CommandOutput cmd_sweep(const RunConfig& config);
CommandOutput cmd_trace(const RunConfig& config);
CommandOutput cmd_compare(const RunConfig& config);
CommandOutput cmd_corpus_list();

/// Header row plus data rows; reals with 12 significant digits.
void write_csv(const Table& table, std::ostream& out);

/// Array of objects keyed by column name; same number formatting as CSV.
void write_json(const Table& table, std::ostream& out);

/// Parses a real given as a constant expression ("2", "pi/2").
double parse_constant(const std::string& text);

/// Full command-line entry point. `args` includes the program name.
/// Exit codes: 0 success, 1 usage/parse/domain error, 2 divergence or
/// training that did not reach tolerance.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace flannint::cli
