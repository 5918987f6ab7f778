#pragma once

#include "treelip/funcspace.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace treelip {

/// Declared behavior of a symbol beyond the truncation. Declared, never inferred
/// from samples; limit quantities only become claims when the class backs them.
enum class TailClass {
  unknown,
  eventually_zero,
  eventually_constant,
  monotone_decreasing_modulus,
};

std::string_view to_string(TailClass tail);
std::optional<TailClass> parse_tail_class(std::string_view text);

class ParseError : public std::runtime_error {
public:
  ParseError(std::string_view source, std::size_t position, std::string expected,
             std::string found);

  std::size_t position() const { return position_; }
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::string& expected() const { return expected_; }
  const std::string& found() const { return found_; }

private:
  std::size_t position_;
  std::size_t line_;
  std::size_t column_;
  std::string expected_;
  std::string found_;
};

class EvalError : public std::runtime_error {
public:
  explicit EvalError(const std::string& what) : std::runtime_error(what) {}
  EvalError(const std::string& what, VertexId vertex, std::size_t depth);

  std::optional<VertexId> vertex() const { return vertex_; }
  std::optional<std::size_t> depth() const { return depth_; }

private:
  std::optional<VertexId> vertex_;
  std::optional<std::size_t> depth_;
};

/// Expression in the depth variable n. Nodes are stored children-first, so the
/// tree is evaluated and printed by a single forward sweep.
class Expression {
public:
  enum class Op { constant, depth, negate, add, subtract, multiply, divide, ln, exp, pow, ell };

  struct Node {
    Op op = Op::constant;
    Complex value{};
    unsigned order = 0;  // ell order
    int lhs = -1;
    int rhs = -1;
  };

  /// An empty expression evaluates to 0.
  Expression() = default;
  static Expression constant(Complex c);

  int add_node(Node node);
  void set_root(int root) { root_ = root; }

  Complex evaluate(double n) const;
  bool depends_on_depth() const;
  std::string to_string() const;

  const std::vector<Node>& nodes() const { return nodes_; }

private:
  std::vector<Node> nodes_;
  int root_ = -1;
};

struct SymbolSpec {
  Expression radial_expr;
  Complex value_at_root{0.0, 0.0};
  std::map<VertexId, Complex> patches;
  TailClass tail = TailClass::unknown;
};

/// Parses the symbol language. Lines are `root = <complex>`, `patch <id> = <complex>`,
/// `tail = <class>` and `expr = <expr>`, separated by newlines, ';' or a top-level ','.
SymbolSpec parse_symbol(std::string_view source);

/// Inverse of parse_symbol up to evaluation.
std::string print_symbol(const SymbolSpec& spec);

/// Root value at o, radial_expr(|v|) elsewhere, then patches override.
TreeFunction evaluate(const SymbolSpec& spec, std::shared_ptr<const Tree> tree,
                      const WeightTable& table);

/// The declared tail class, or the class certified by the expression itself when
/// it does not involve n (a constant radial part).
TailClass effective_tail(const SymbolSpec& spec);

}  // namespace treelip
