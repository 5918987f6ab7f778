#include "treelip/cli.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  using namespace treelip::cli;

  CLI::App app{"treelip: iterated logarithmic Lipschitz norms and multiplication operators on trees"};
  RunConfig config;
  std::string command;
  std::string positional;
  unsigned k = 0;

  app.add_option("command", command,
                 "gen-tree | norm | classify | spectrum | essnorm | verify-weights | verify-space")
      ->required();
  app.add_option("source", positional, "generator spec for gen-tree");
  app.add_option("--tree", config.tree_source, "generator spec or tree file");
  app.add_option("--symbol-file", config.symbol_file, "symbol DSL file");
  app.add_option("--symbol", config.symbol_text, "inline symbol DSL");
  app.add_option("--func", config.func, "function file or 'dsl: <text>'");
  auto* k_option = app.add_option("--k", k, "space index k");
  app.add_option("--window", config.window, "tail window in depth levels")->capture_default_str();
  app.add_option("--tol", config.tolerance, "relative convergence tolerance")->capture_default_str();
  app.add_option("--output", config.output, "write the report to this path");
  app.add_option("--seed", config.seed, "seed for randomized commands")->capture_default_str();
  app.add_option("--max-n", config.max_n, "verify-weights range")->capture_default_str();
  app.add_flag("--pretty", config.pretty, "human-readable rendering instead of JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitError;
  }

  const auto parsed = parse_command(command);
  if (!parsed) {
    std::cerr << "error: unknown command '" << command << "'\n";
    return kExitError;
  }
  config.command = *parsed;
  if (k_option->count() > 0) config.k = k;
  if (!positional.empty()) {
    if (!config.tree_source.empty()) {
      std::cerr << "error: give the tree either positionally or with --tree\n";
      return kExitError;
    }
    config.tree_source = positional;
  }
  return run(config, std::cout, std::cerr);
}
