#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <map>
#include <sstream>

#include "flannint/cli.hpp"
#include "flannint/corpus.hpp"
#include "flannint/errors.hpp"
#include "flannint/quadrature.hpp"

namespace flannint::cli {

namespace {

constexpr double kReferenceTolerance = 1e-12;

constexpr const char* kGrammarHelp = R"(Expressions:
  f(x) uses + - * / ^ with the usual precedence; ^ binds tightest and is
  right-associative (2^3^2 = 512), unary minus binds looser than ^ (-x^2 = -(x^2)).
  Functions: sqrt exp log sin cos tan abs (log is natural). Constants: pi e.
  The only variable is x. Multiplication is always explicit: 2*x, not 2x.

Exit codes: 0 success, 1 usage/parse/domain error, 2 divergence or no convergence.)";

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string cell_text(const Cell& c) {
  struct Visitor {
    std::string operator()(double v) const { return format_real(v); }
    std::string operator()(long v) const { return std::to_string(v); }
    std::string operator()(bool v) const { return v ? "true" : "false"; }
    std::string operator()(const std::string& v) const { return v; }
  };
  return std::visit(Visitor{}, c);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char ch : s) {
    if (ch == '"') quoted += '"';
    quoted += ch;
  }
  return quoted + '"';
}

Integrand load_integrand(const RunConfig& config) {
  if (config.function.empty()) {
    throw InvalidArgumentError("no integrand given (use --f or --corpus)");
  }
  Integrand f = Integrand::parse(config.function);
  // Samples are interior; make sure the closed interval itself is usable.
  f(config.a);
  f(config.b);
  return f;
}

TrainingResult train_for(const RunConfig& config, const Integrand& f) {
  auto result = train(f, config.a, config.b, config.training);
  if (!config.save_model.empty()) {
    std::ofstream file(config.save_model);
    if (!file) throw InvalidArgumentError("cannot write model file '" + config.save_model + "'");
    file << to_json(result.network) << '\n';
  }
  return result;
}

// b₁ grid over (a, b]; the last point is b itself.
std::vector<double> sweep_grid(double a, double b, int steps) {
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(steps));
  for (int j = 1; j <= steps; ++j) grid.push_back(j == steps ? b : a + (b - a) * j / steps);
  return grid;
}

}  // namespace

void RunConfig::validate() const {
  if (!std::isfinite(a) || !std::isfinite(b) || !(a < b)) {
    throw InvalidArgumentError("interval must satisfy a < b");
  }
  training.validate();
  if (steps < 2) throw InvalidArgumentError("--steps must be at least 2");
  if (stride < 1) throw InvalidArgumentError("--stride must be at least 1");
}

double parse_constant(const std::string& text) {
  const Integrand value = Integrand::parse(text);
  if (!value.is_constant()) {
    throw InvalidArgumentError("'" + text + "' must be a constant expression");
  }
  return value(0.0);
}

CommandOutput cmd_integrate(const RunConfig& config) {
  CommandOutput result;
  result.table.columns = {"value", "final_error", "iterations", "converged"};

  if (!config.load_model.empty()) {
    std::ifstream file(config.load_model);
    if (!file) throw InvalidArgumentError("cannot read model file '" + config.load_model + "'");
    std::stringstream buffer;
    buffer << file.rdbuf();
    TrainedNetwork net = network_from_json(buffer.str());
    const double a1 = config.from.value_or(net.domain_a());
    const double b1 = config.to.value_or(net.domain_b());
    result.converged = net.final_error() <= config.training.tolerance;
    result.table.rows.push_back(
        {integrate(net, a1, b1), net.final_error(), 0L, result.converged});
    result.network = std::move(net);
    return result;
  }

  config.validate();
  const Integrand f = load_integrand(config);
  auto trained = train_for(config, f);
  const double value =
      integrate(trained.network, config.from.value_or(config.a), config.to.value_or(config.b));
  result.converged = trained.trace.converged;
  result.table.rows.push_back({value, trained.network.final_error(), trained.trace.iterations_run,
                               trained.trace.converged});
  result.network = std::move(trained.network);
  return result;
}

CommandOutput cmd_sweep(const RunConfig& config) {
  config.validate();
  const Integrand f = load_integrand(config);
  auto trained = train_for(config, f);

  CommandOutput result;
  result.table.columns = {"b1", "flann_value", "exact_value", "abs_error"};
  for (double b1 : sweep_grid(config.a, config.b, config.steps)) {
    const double flann = integrate(trained.network, config.a, b1);
    const double exact = reference(f, config.a, b1, kReferenceTolerance).value;
    result.table.rows.push_back({b1, flann, exact, std::abs(flann - exact)});
  }
  result.converged = trained.trace.converged;
  result.network = std::move(trained.network);
  return result;
}

CommandOutput cmd_trace(const RunConfig& config) {
  config.validate();
  const Integrand f = load_integrand(config);
  auto trained = train_for(config, f);

  CommandOutput result;
  result.table.columns = {"iteration", "error"};
  const auto& errors = trained.trace.errors;
  for (std::size_t i = 0; i < errors.size(); ++i) {
    const long iteration = static_cast<long>(i) + 1;
    if (iteration % config.stride == 0 || i + 1 == errors.size()) {
      result.table.rows.push_back({iteration, errors[i]});
    }
  }
  result.converged = trained.trace.converged;
  result.network = std::move(trained.network);
  return result;
}

CommandOutput cmd_compare(const RunConfig& config) {
  config.validate();
  const Integrand f = load_integrand(config);
  auto trained = train_for(config, f);

  // k interior training points split [a, b₁] into k + 1 pieces; Simpson needs
  // an even count, so it takes the next even number.
  const int k = config.training.k;
  const int trap_m = k + 1;
  const int simpson_m = (k + 1) % 2 == 0 ? k + 1 : k + 2;

  CommandOutput result;
  result.table.columns = {"b1",
                          "exact",
                          "flann",
                          "trapezoid_m" + std::to_string(trap_m),
                          "simpson_m" + std::to_string(simpson_m),
                          "flann_err",
                          "trap_err",
                          "simpson_err"};
  for (double b1 : sweep_grid(config.a, config.b, config.steps)) {
    const double exact = reference(f, config.a, b1, kReferenceTolerance).value;
    const double flann = integrate(trained.network, config.a, b1);
    const double trap = trapezoid(f, config.a, b1, trap_m).value;
    const double simp = simpson(f, config.a, b1, simpson_m).value;
    result.table.rows.push_back(
        {b1, exact, flann, trap, simp, flann - exact, trap - exact, simp - exact});
  }
  result.converged = trained.trace.converged;
  result.network = std::move(trained.network);
  return result;
}

CommandOutput cmd_corpus_list() {
  CommandOutput result;
  result.table.columns = {"name", "expression", "a", "b", "analytic", "note"};
  for (const auto& e : corpus()) {
    result.table.rows.push_back({e.name, e.expression, e.a, e.b,
                                 e.analytic ? cell_text(*e.analytic) : std::string(), e.note});
  }
  return result;
}

void write_csv(const Table& table, std::ostream& out) {
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    out << (i ? "," : "") << csv_field(table.columns[i]);
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_field(cell_text(row[i]));
    out << '\n';
  }
}

void write_json(const Table& table, std::ostream& out) {
  out << '[';
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    out << (r ? ",\n " : "\n ") << '{';
    const auto& row = table.rows[r];
    for (std::size_t i = 0; i < row.size(); ++i) {
      out << (i ? "," : "") << nlohmann::json(table.columns[i]).dump() << ':';
      if (const auto* s = std::get_if<std::string>(&row[i])) {
        out << nlohmann::json(*s).dump();
      } else {
        out << cell_text(row[i]);
      }
    }
    out << '}';
  }
  out << (table.rows.empty() ? "]\n" : "\n]\n");
}

namespace {

// Flag values as typed; applied on top of the config file only when given.
struct Flags {
  std::string config_path;
  std::string function;
  std::string corpus_name;
  std::string a;
  std::string b;
  std::string from;
  std::string to;
  std::uint64_t seed = 0;
  double eta = 0.0;
  int degree = 0;
  int k = 0;
  long iters = 0;
  double tol = 0.0;
  std::string scale;
  std::string init;
  std::string format;
  std::string output;
  int steps = 0;
  long stride = 0;
  std::string save_model;
  std::string load_model;

  std::map<std::string, CLI::Option*> options;

  bool given(const std::string& name) const {
    const auto it = options.find(name);
    return it != options.end() && it->second->count() > 0;
  }
};

void add_training_flags(CLI::App& cmd, Flags& flags) {
  auto& o = flags.options;
  o["config"] = cmd.add_option("--config", flags.config_path, "JSON run configuration file");
  o["f"] = cmd.add_option("--f,--function", flags.function, "integrand f(x)");
  o["corpus"] = cmd.add_option("--corpus", flags.corpus_name,
                               "use a built-in integrand and interval (see `corpus list`)");
  o["a"] = cmd.add_option("--a", flags.a, "lower limit (constant expression)");
  o["b"] = cmd.add_option("--b", flags.b, "upper limit (constant expression)");
  o["seed"] = cmd.add_option("--seed", flags.seed, "weight initialization seed [0]");
  o["eta"] = cmd.add_option("--eta", flags.eta,
                            "learning rate [1/largest eigenvalue of the Gram matrix]");
  o["degree"] = cmd.add_option("--degree", flags.degree, "number of monomial links [8]");
  o["k"] = cmd.add_option("--k", flags.k, "number of training points [10]");
  o["iters"] = cmd.add_option("--iters", flags.iters, "maximum iterations [2000000]");
  o["tol"] = cmd.add_option("--tol", flags.tol, "stop when E <= tol [1e-11]");
  o["scale"] = cmd.add_option("--scale", flags.scale,
                              "domain scaling: on (=centered), off, unit, centered [on]");
  o["init"] = cmd.add_option("--init", flags.init, "weight initialization: uniform, zeros [uniform]");
  o["format"] = cmd.add_option("--format", flags.format, "csv or json [csv]");
  o["output"] = cmd.add_option("--output", flags.output, "output file [stdout]");
  o["save-model"] = cmd.add_option("--save-model", flags.save_model, "write the trained network");
}

Format parse_format(const std::string& text) {
  if (text == "csv") return Format::Csv;
  if (text == "json") return Format::Json;
  throw InvalidArgumentError("unknown format '" + text + "' (expected csv or json)");
}

InitScheme parse_init(const std::string& text) {
  if (text == "uniform") return InitScheme::Uniform;
  if (text == "zeros") return InitScheme::Zeros;
  throw InvalidArgumentError("unknown init '" + text + "' (expected uniform or zeros)");
}

double json_real(const nlohmann::json& v) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) return parse_constant(v.get<std::string>());
  throw InvalidArgumentError("expected a number or constant expression in config");
}

void apply_corpus(RunConfig& config, const std::string& name) {
  const CorpusEntry* entry = find_corpus_entry(name);
  if (!entry) throw InvalidArgumentError("unknown corpus entry '" + name + "'");
  config.function = entry->expression;
  config.a = entry->a;
  config.b = entry->b;
}

void apply_config_file(RunConfig& config, const std::string& path) {
  std::ifstream file(path);
  if (!file) throw InvalidArgumentError("cannot read config file '" + path + "'");
  nlohmann::json j;
  try {
    file >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgumentError("malformed config file: " + std::string(e.what()));
  }
  try {
    TrainingConfig& t = config.training;
    if (j.contains("corpus")) apply_corpus(config, j["corpus"].get<std::string>());
    if (j.contains("function")) config.function = j["function"].get<std::string>();
    if (j.contains("a")) config.a = json_real(j["a"]);
    if (j.contains("b")) config.b = json_real(j["b"]);
    if (j.contains("k")) t.k = j["k"].get<int>();
    if (j.contains("eta") && !(j["eta"].is_string() && j["eta"] == "auto")) {
      t.eta = j["eta"].get<double>();
    }
    if (j.contains("max_iterations")) t.max_iterations = j["max_iterations"].get<long>();
    if (j.contains("tolerance")) t.tolerance = j["tolerance"].get<double>();
    if (j.contains("init")) t.init = parse_init(j["init"].get<std::string>());
    if (j.contains("seed")) t.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("degree")) t.degree = j["degree"].get<int>();
    if (j.contains("scaling")) t.scaling = parse_scaling(j["scaling"].get<std::string>());
    if (j.contains("output")) config.output = j["output"].get<std::string>();
    if (j.contains("format")) config.format = parse_format(j["format"].get<std::string>());
    if (j.contains("steps")) config.steps = j["steps"].get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgumentError("bad value in config file: " + std::string(e.what()));
  }
}

RunConfig resolve(const Flags& flags) {
  RunConfig config;
  TrainingConfig& t = config.training;
  if (flags.given("config")) apply_config_file(config, flags.config_path);
  if (flags.given("corpus")) apply_corpus(config, flags.corpus_name);
  if (flags.given("f")) config.function = flags.function;
  if (flags.given("a")) config.a = parse_constant(flags.a);
  if (flags.given("b")) config.b = parse_constant(flags.b);
  if (flags.given("from")) config.from = parse_constant(flags.from);
  if (flags.given("to")) config.to = parse_constant(flags.to);
  if (flags.given("seed")) t.seed = flags.seed;
  if (flags.given("eta")) t.eta = flags.eta;
  if (flags.given("degree")) t.degree = flags.degree;
  if (flags.given("k")) t.k = flags.k;
  if (flags.given("iters")) t.max_iterations = flags.iters;
  if (flags.given("tol")) t.tolerance = flags.tol;
  if (flags.given("scale")) t.scaling = parse_scaling(flags.scale);
  if (flags.given("init")) t.init = parse_init(flags.init);
  if (flags.given("format")) config.format = parse_format(flags.format);
  if (flags.given("output")) config.output = flags.output;
  if (flags.given("steps")) config.steps = flags.steps;
  if (flags.given("stride")) config.stride = flags.stride;
  if (flags.given("save-model")) config.save_model = flags.save_model;
  if (flags.given("load-model")) config.load_model = flags.load_model;
  return config;
}

void emit(const RunConfig& config, const Table& table, std::ostream& out) {
  auto write = [&](std::ostream& os) {
    if (config.format == Format::Json) {
      write_json(table, os);
    } else {
      write_csv(table, os);
    }
  };
  if (config.output.empty()) {
    write(out);
    return;
  }
  std::ofstream file(config.output);
  if (!file) throw InvalidArgumentError("cannot write output file '" + config.output + "'");
  write(file);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Definite integrals with a functional-link network trained by gradient descent"};
  app.footer(kGrammarHelp);
  app.require_subcommand(1);

  Flags integrate_flags;
  auto* integrate_cmd = app.add_subcommand("integrate", "train, then report N(b) - N(a)");
  add_training_flags(*integrate_cmd, integrate_flags);
  integrate_flags.options["from"] =
      integrate_cmd->add_option("--from", integrate_flags.from, "sub-interval lower limit [a]");
  integrate_flags.options["to"] =
      integrate_cmd->add_option("--to", integrate_flags.to, "sub-interval upper limit [b]");
  integrate_flags.options["load-model"] =
      integrate_cmd->add_option("--load-model", integrate_flags.load_model,
                                "integrate with a saved network instead of training");

  Flags sweep_flags;
  auto* sweep_cmd = app.add_subcommand("sweep", "train once, then integrate over a grid of b1");
  add_training_flags(*sweep_cmd, sweep_flags);
  sweep_flags.options["steps"] =
      sweep_cmd->add_option("--steps", sweep_flags.steps, "grid points [20]");

  Flags trace_flags;
  auto* trace_cmd = app.add_subcommand("trace", "error E after every iteration");
  add_training_flags(*trace_cmd, trace_flags);
  trace_flags.options["stride"] = trace_cmd->add_option(
      "--stride", trace_flags.stride, "emit every n-th iteration (and the last) [1]");

  Flags compare_flags;
  auto* compare_cmd =
      app.add_subcommand("compare", "FLANN against trapezoid, Simpson and the exact value");
  add_training_flags(*compare_cmd, compare_flags);
  compare_flags.options["steps"] =
      compare_cmd->add_option("--steps", compare_flags.steps, "grid points [20]");

  auto* corpus_cmd = app.add_subcommand("corpus", "built-in integrands");
  corpus_cmd->require_subcommand(1);
  auto* corpus_list = corpus_cmd->add_subcommand("list", "list the built-in integrands");
  std::string corpus_format = "csv";
  corpus_list->add_option("--format", corpus_format, "csv or json [csv]");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << '\n';
    return 1;
  }
  try {
    if (corpus_list->parsed()) {
      RunConfig config;
      config.format = parse_format(corpus_format);
      emit(config, cmd_corpus_list().table, out);
      return 0;
    }

    RunConfig config;
    CommandOutput result;
    if (integrate_cmd->parsed()) {
      config = resolve(integrate_flags);
      result = cmd_integrate(config);
    } else if (sweep_cmd->parsed()) {
      config = resolve(sweep_flags);
      result = cmd_sweep(config);
    } else if (trace_cmd->parsed()) {
      config = resolve(trace_flags);
      result = cmd_trace(config);
    } else {
      config = resolve(compare_flags);
      result = cmd_compare(config);
    }
    emit(config, result.table, out);
    if (!result.converged) {
      err << "error: training stopped before reaching tolerance " << format_real(config.training.tolerance)
          << " (final E = " << format_real(result.network ? result.network->final_error() : 0.0)
          << "); raise --iters or --tol\n";
      return 2;
    }
    return 0;
  } catch (const DivergenceError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace flannint::cli
