#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace treelip::cli {

enum class Command { gen_tree, norm, classify, spectrum, essnorm, verify_weights, verify_space };

std::optional<Command> parse_command(std::string_view name);
std::string_view to_string(Command command);

class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  Command command = Command::classify;
  std::string tree_source;                 // generator spec or file; empty picks a default
  std::optional<std::string> symbol_file;
  std::optional<std::string> symbol_text;  // inline DSL
  std::optional<std::string> func;         // file path or "dsl: <text>"
  std::optional<unsigned> k;               // default 1 (verify-weights: 6)
  std::size_t window = 8;
  double tolerance = 1e-3;
  std::optional<std::string> output;
  std::uint64_t seed = 1;
  bool pretty = false;
  std::size_t max_n = 1'000'000;           // verify-weights range
};

inline constexpr int kExitDefinite = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitInconclusive = 2;

/// Throws ConfigError on an invalid combination.
void validate(const RunConfig& config);

/// Executes one command. Reports go to `out` (or the output file), diagnostics to `err`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace treelip::cli
