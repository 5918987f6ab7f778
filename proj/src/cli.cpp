#include "treelip/cli.hpp"

#include "treelip/io.hpp"
#include "treelip/multop.hpp"
#include "treelip/report.hpp"
#include "treelip/verify.hpp"

#include <array>
#include <ostream>
#include <utility>

namespace treelip::cli {

namespace {

constexpr std::array<std::pair<Command, std::string_view>, 7> kCommands{{
    {Command::gen_tree, "gen-tree"},
    {Command::norm, "norm"},
    {Command::classify, "classify"},
    {Command::spectrum, "spectrum"},
    {Command::essnorm, "essnorm"},
    {Command::verify_weights, "verify-weights"},
    {Command::verify_space, "verify-space"},
}};

constexpr std::string_view kRayDefault = "regular:q=1,depth=256";
constexpr std::string_view kBranchingDefault = "regular:q=2,depth=12";
constexpr std::string_view kDslPrefix = "dsl:";

bool uses_symbol(Command c) {
  return c == Command::classify || c == Command::spectrum || c == Command::essnorm;
}

unsigned resolved_k(const RunConfig& config, unsigned fallback) {
  return config.k.value_or(fallback);
}

Json audit(const RunConfig& config, const std::string& tree_source, unsigned k) {
  Json a;
  a["command"] = std::string(to_string(config.command));
  if (!tree_source.empty()) a["tree"] = tree_source;
  if (config.symbol_file) a["symbol_file"] = *config.symbol_file;
  if (config.symbol_text) a["symbol"] = *config.symbol_text;
  if (config.func) a["func"] = *config.func;
  a["k"] = k;
  a["window"] = config.window;
  a["tolerance"] = config.tolerance;
  a["seed"] = config.seed;
  if (config.command == Command::verify_weights) a["max_n"] = config.max_n;
  return a;
}

Json envelope(const RunConfig& config, const std::string& tree_source, unsigned k) {
  Json doc;
  doc["schema"] = kSchemaVersion;
  doc["command"] = std::string(to_string(config.command));
  doc["config"] = audit(config, tree_source, k);
  return doc;
}

Json tree_summary(const Tree& tree) {
  return Json{{"vertices", tree.size()}, {"depth", tree.depth_bound()}, {"complete", tree.complete()}};
}

void emit(const RunConfig& config, std::ostream& out, const std::string& text) {
  if (config.output) {
    write_file(*config.output, text);
  } else {
    out << text;
  }
}

void emit_json(const RunConfig& config, std::ostream& out, const Json& doc) {
  emit(config, out, config.pretty ? render_text(doc) : doc.dump(2) + "\n");
}

SymbolSpec load_symbol(const RunConfig& config) {
  if (config.symbol_text) return parse_symbol(*config.symbol_text);
  return parse_symbol(read_file(*config.symbol_file));
}

struct Loaded {
  std::string tree_source;
  std::shared_ptr<const Tree> tree;
};

Loaded load(const RunConfig& config, std::string_view fallback) {
  Loaded l;
  l.tree_source = config.tree_source.empty() ? std::string(fallback) : config.tree_source;
  l.tree = load_tree(l.tree_source);
  return l;
}

int run_gen_tree(const RunConfig& config, std::ostream& out) {
  auto tree = generate_from_spec(config.tree_source);
  if (!tree) throw ConfigError("gen-tree needs a generator spec, got '" + config.tree_source + "'");
  emit(config, out, format_tree(*tree));
  return kExitDefinite;
}

int run_norm(const RunConfig& config, std::ostream& out) {
  FunctionFile file;
  const std::string& source = *config.func;
  if (source.starts_with(kDslPrefix)) {
    file.dsl = parse_symbol(std::string_view(source).substr(kDslPrefix.size()));
  } else {
    file = parse_function_file(read_file(source));
  }
  const unsigned k = resolved_k(config, file.k);
  const Loaded l = load(config, file.dsl ? kRayDefault : kBranchingDefault);
  const WeightTable table(k, std::max<std::size_t>(1, l.tree->depth_bound()));
  const TreeFunction f = materialize(file, l.tree, table);

  Json doc = envelope(config, l.tree_source, k);
  doc["tree"] = tree_summary(*l.tree);
  doc["report"] = to_json(norm_k(f, table));
  emit_json(config, out, doc);
  return kExitDefinite;
}

int run_symbol_command(const RunConfig& config, std::ostream& out) {
  const SymbolSpec spec = load_symbol(config);
  const unsigned k = resolved_k(config, 1);
  const Loaded l = load(config, kRayDefault);
  const WeightTable table(k, std::max<std::size_t>(1, l.tree->depth_bound()));
  const Symbol psi = make_symbol(spec, l.tree, table);
  const AnalysisOptions options{config.window, config.tolerance};

  Json doc = envelope(config, l.tree_source, k);
  doc["tree"] = tree_summary(*l.tree);
  doc["tail"] = std::string(to_string(psi.tail));
  int code = kExitDefinite;

  switch (config.command) {
    case Command::classify: {
      const AnalysisReport report = analyze(psi, table, options);
      doc["report"] = to_json(report);
      if (report.any_inconclusive()) code = kExitInconclusive;
      break;
    }
    case Command::spectrum: {
      try {
        doc["report"] = to_json(spectrum(psi, table, options));
      } catch (const AnalysisError& refusal) {
        doc["report"] = Json{{"refused", refusal.what()}};
        code = kExitInconclusive;
      }
      break;
    }
    case Command::essnorm: {
      Json report = to_json(essential_norm_bounds(psi, table, options));
      report["witness"] = to_json(essnorm_lower_witness(psi, table, 0.5, options));
      doc["report"] = std::move(report);
      break;
    }
    default:
      throw ConfigError("not a symbol command");
  }
  emit_json(config, out, doc);
  return code;
}

int run_verify_weights(const RunConfig& config, std::ostream& out) {
  WeightSweep sweep;
  sweep.max_k = resolved_k(config, 6);
  sweep.max_n = config.max_n;
  sweep.phi_max_n = std::min<std::size_t>(config.max_n, 100'000);
  sweep.derivative_max_k = std::min(4u, sweep.max_k);
  const auto checks = verify_weight_lemmas(sweep);

  Json doc = envelope(config, "", sweep.max_k);
  doc["threads"] = thread_budget();
  doc["checks"] = to_json(checks);
  bool pass = true;
  for (const auto& c : checks) pass = pass && c.pass;
  doc["pass"] = pass;
  emit_json(config, out, doc);
  return pass ? kExitDefinite : kExitError;
}

int run_verify_space(const RunConfig& config, std::ostream& out) {
  SpaceSweep sweep;
  sweep.seed = config.seed;
  sweep.k = resolved_k(config, 1);
  const auto checks = verify_space(sweep);

  Json doc = envelope(config, "", sweep.k);
  doc["checks"] = to_json(checks);
  bool pass = true;
  for (const auto& c : checks) pass = pass && c.pass;
  doc["pass"] = pass;
  emit_json(config, out, doc);
  return pass ? kExitDefinite : kExitError;
}

}  // namespace

std::optional<Command> parse_command(std::string_view name) {
  for (const auto& [command, label] : kCommands) {
    if (label == name) return command;
  }
  return std::nullopt;
}

std::string_view to_string(Command command) {
  for (const auto& [c, label] : kCommands) {
    if (c == command) return label;
  }
  return "?";
}

void validate(const RunConfig& config) {
  if (config.k && *config.k < 1) throw ConfigError("--k must be at least 1");
  if (config.k && *config.k > kDefaultMaxOrder - 1) {
    throw ConfigError("--k must be at most " + std::to_string(kDefaultMaxOrder - 1));
  }
  if (config.window < 2) throw ConfigError("--window must be at least 2");
  if (!(config.tolerance > 0.0)) throw ConfigError("--tol must be positive");
  if (config.command == Command::gen_tree && config.tree_source.empty()) {
    throw ConfigError("gen-tree needs a generator spec");
  }
  if (config.command == Command::norm && !config.func) throw ConfigError("norm needs --func");
  if (uses_symbol(config.command)) {
    if (config.symbol_file.has_value() == config.symbol_text.has_value()) {
      throw ConfigError("exactly one of --symbol-file and --symbol is required");
    }
  }
  if (config.command == Command::verify_weights && config.max_n < 3) {
    throw ConfigError("--max-n must be at least 3");
  }
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    validate(config);
    switch (config.command) {
      case Command::gen_tree: return run_gen_tree(config, out);
      case Command::norm: return run_norm(config, out);
      case Command::classify:
      case Command::spectrum:
      case Command::essnorm: return run_symbol_command(config, out);
      case Command::verify_weights: return run_verify_weights(config, out);
      case Command::verify_space: return run_verify_space(config, out);
    }
    throw ConfigError("unknown command");
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
}

}  // namespace treelip::cli
