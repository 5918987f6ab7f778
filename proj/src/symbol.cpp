#include "treelip/symbol.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <limits>

namespace treelip {

namespace {

constexpr std::array<std::pair<TailClass, std::string_view>, 4> kTailNames{{
    {TailClass::unknown, "unknown"},
    {TailClass::eventually_zero, "eventually-zero"},
    {TailClass::eventually_constant, "eventually-constant"},
    {TailClass::monotone_decreasing_modulus, "monotone-decreasing-modulus"},
}};

constexpr unsigned kMaxEllOrder = 16;
constexpr int kMaxNesting = 200;

}  // namespace

std::string_view to_string(TailClass tail) {
  for (const auto& [t, name] : kTailNames) {
    if (t == tail) return name;
  }
  return "unknown";
}

std::optional<TailClass> parse_tail_class(std::string_view text) {
  for (const auto& [t, name] : kTailNames) {
    if (name == text) return t;
  }
  return std::nullopt;
}

namespace {

struct Location {
  std::size_t line = 1;
  std::size_t column = 1;
};

Location locate(std::string_view source, std::size_t position) {
  Location loc;
  for (std::size_t i = 0; i < position && i < source.size(); ++i) {
    if (source[i] == '\n') {
      ++loc.line;
      loc.column = 1;
    } else {
      ++loc.column;
    }
  }
  return loc;
}

std::string describe(Location loc, const std::string& expected, const std::string& found) {
  return std::to_string(loc.line) + ":" + std::to_string(loc.column) + ": expected " + expected +
         ", found '" + found + "'";
}

}  // namespace

ParseError::ParseError(std::string_view source, std::size_t position, std::string expected,
                       std::string found)
    : std::runtime_error(describe(locate(source, position), expected, found)),
      position_(position),
      line_(locate(source, position).line),
      column_(locate(source, position).column),
      expected_(std::move(expected)),
      found_(std::move(found)) {}

EvalError::EvalError(const std::string& what, VertexId vertex, std::size_t depth)
    : std::runtime_error("evaluation error at vertex " + std::to_string(vertex) + " (depth " +
                         std::to_string(depth) + "): " + what),
      vertex_(vertex), depth_(depth) {}

// ---------------------------------------------------------------------------
// Expression

Expression Expression::constant(Complex c) {
  Expression e;
  e.root_ = e.add_node(Node{Op::constant, c});
  return e;
}

int Expression::add_node(Node node) {
  nodes_.push_back(node);
  return static_cast<int>(nodes_.size()) - 1;
}

namespace {

bool is_real(Complex z) { return z.imag() == 0.0; }

Complex checked(Complex z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw EvalError("non-finite value");
  return z;
}

Complex divide(Complex a, Complex b) {
  if (b == Complex(0.0)) throw EvalError("division by zero");
  if (is_real(a) && is_real(b)) return a.real() / b.real();
  return a / b;
}

Complex power(Complex base, Complex exponent) {
  if (is_real(base) && is_real(exponent)) {
    const double b = base.real();
    const double e = exponent.real();
    if (b < 0.0 && std::floor(e) != e) {
      throw EvalError("pow of a negative base with a fractional exponent");
    }
    if (b == 0.0 && e < 0.0) throw EvalError("pow of zero with a negative exponent");
    return std::pow(b, e);
  }
  if (base == Complex(0.0)) {
    if (exponent.real() > 0.0) return 0.0;
    throw EvalError("pow of zero with an exponent of non-positive real part");
  }
  return std::pow(base, exponent);
}

}  // namespace

Complex Expression::evaluate(double n) const {
  if (root_ < 0) return 0.0;
  std::vector<Complex> value(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const Node& node = nodes_[i];
    const Complex a = node.lhs >= 0 ? value[static_cast<std::size_t>(node.lhs)] : Complex{};
    const Complex b = node.rhs >= 0 ? value[static_cast<std::size_t>(node.rhs)] : Complex{};
    Complex r;
    switch (node.op) {
      case Op::constant: r = node.value; break;
      case Op::depth: r = n; break;
      case Op::negate: r = -a; break;
      case Op::add: r = is_real(a) && is_real(b) ? Complex(a.real() + b.real()) : a + b; break;
      case Op::subtract: r = is_real(a) && is_real(b) ? Complex(a.real() - b.real()) : a - b; break;
      case Op::multiply: r = is_real(a) && is_real(b) ? Complex(a.real() * b.real()) : a * b; break;
      case Op::divide: r = divide(a, b); break;
      case Op::ln:
        if (!is_real(a)) throw EvalError("ln of a non-real value");
        if (!(a.real() > 0.0)) throw EvalError("ln of a non-positive value");
        r = std::log(a.real());
        break;
      case Op::exp: r = is_real(a) ? Complex(std::exp(a.real())) : std::exp(a); break;
      case Op::pow: r = power(a, b); break;
      case Op::ell:
        if (!is_real(a) || !(a.real() >= 1.0)) throw EvalError("ell needs a real argument >= 1");
        r = ell(node.order, a.real());
        break;
    }
    value[i] = checked(r);
  }
  return value[static_cast<std::size_t>(root_)];
}

bool Expression::depends_on_depth() const {
  for (const Node& node : nodes_) {
    if (node.op == Op::depth) return true;
  }
  return false;
}

namespace {

std::string format_real(double x) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), res.ptr);
}

// Precedence levels: 1 sum, 2 product, 3 unary, 4 atom.
struct Printed {
  std::string text;
  int level;
};

std::string wrap(const Printed& p, int min_level) {
  return p.level >= min_level ? p.text : "(" + p.text + ")";
}

Printed print_constant(Complex c) {
  const double re = c.real();
  const double im = c.imag();
  if (im == 0.0) {
    if (std::signbit(re)) return {"(" + format_real(re) + ")", 4};
    return {format_real(re), 4};
  }
  if (re == 0.0 && !std::signbit(re)) {
    if (std::signbit(im)) return {"(" + format_real(im) + "i)", 4};
    return {format_real(im) + "i", 4};
  }
  std::string text = "(" + format_real(re);
  text += std::signbit(im) ? "-" : "+";
  text += format_real(std::abs(im)) + "i)";
  return {text, 4};
}

}  // namespace

std::string Expression::to_string() const {
  if (root_ < 0) return "0";
  std::vector<Printed> out(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const Node& node = nodes_[i];
    const Printed* a = node.lhs >= 0 ? &out[static_cast<std::size_t>(node.lhs)] : nullptr;
    const Printed* b = node.rhs >= 0 ? &out[static_cast<std::size_t>(node.rhs)] : nullptr;
    switch (node.op) {
      case Op::constant: out[i] = print_constant(node.value); break;
      case Op::depth: out[i] = {"n", 4}; break;
      case Op::negate: out[i] = {"-" + wrap(*a, 3), 3}; break;
      case Op::add: out[i] = {wrap(*a, 1) + " + " + wrap(*b, 2), 1}; break;
      case Op::subtract: out[i] = {wrap(*a, 1) + " - " + wrap(*b, 2), 1}; break;
      case Op::multiply: out[i] = {wrap(*a, 2) + "*" + wrap(*b, 3), 2}; break;
      case Op::divide: out[i] = {wrap(*a, 2) + "/" + wrap(*b, 3), 2}; break;
      case Op::ln: out[i] = {"ln(" + a->text + ")", 4}; break;
      case Op::exp: out[i] = {"exp(" + a->text + ")", 4}; break;
      case Op::pow: out[i] = {"pow(" + a->text + ", " + b->text + ")", 4}; break;
      case Op::ell:
        out[i] = {"ell(" + std::to_string(node.order) + ", " + a->text + ")", 4};
        break;
    }
  }
  return out[static_cast<std::size_t>(root_)].text;
}

// ---------------------------------------------------------------------------
// Lexer and parser

namespace {

enum class Tok { number, imaginary, ident, punct, separator, invalid, end };

struct Token {
  Tok kind;
  std::string_view text;
  std::size_t offset;
  double value = 0.0;
  bool integral = false;
};

bool is_ident_start(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_ident_char(char c) { return is_ident_start(c) || is_digit(c); }

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < src.size()) {
    const char c = src[i];
    if (c == ' ' || c == '\t' || c == '\r') {
      ++i;
      continue;
    }
    if (c == '\n' || c == ';') {
      out.push_back({Tok::separator, src.substr(i, 1), i});
      ++i;
      continue;
    }
    if (is_digit(c) || (c == '.' && i + 1 < src.size() && is_digit(src[i + 1]))) {
      const std::size_t start = i;
      bool integral = true;
      while (i < src.size() && is_digit(src[i])) ++i;
      if (i < src.size() && src[i] == '.') {
        integral = false;
        ++i;
        while (i < src.size() && is_digit(src[i])) ++i;
      }
      if (i < src.size() && (src[i] == 'e' || src[i] == 'E')) {
        std::size_t j = i + 1;
        if (j < src.size() && (src[j] == '+' || src[j] == '-')) ++j;
        if (j < src.size() && is_digit(src[j])) {
          integral = false;
          i = j;
          while (i < src.size() && is_digit(src[i])) ++i;
        }
      }
      Token tok{Tok::number, src.substr(start, i - start), start};
      double value = 0.0;
      const auto res = std::from_chars(src.data() + start, src.data() + i, value);
      if (res.ec != std::errc() || !std::isfinite(value)) {
        tok.kind = Tok::invalid;
      } else {
        tok.value = value;
        tok.integral = integral;
      }
      if (tok.kind == Tok::number && i < src.size() && src[i] == 'i' &&
          (i + 1 >= src.size() || !is_ident_char(src[i + 1]))) {
        ++i;
        tok.kind = Tok::imaginary;
        tok.text = src.substr(start, i - start);
      }
      out.push_back(tok);
      continue;
    }
    if (is_ident_start(c)) {
      const std::size_t start = i;
      while (i < src.size() && is_ident_char(src[i])) ++i;
      out.push_back({Tok::ident, src.substr(start, i - start), start});
      continue;
    }
    if (c == '+' || c == '-' || c == '*' || c == '/' || c == '(' || c == ')' || c == ',' ||
        c == '=') {
      out.push_back({Tok::punct, src.substr(i, 1), i});
      ++i;
      continue;
    }
    // Keep whole UTF-8 sequences together in the reported lexeme.
    std::size_t len = 1;
    const auto byte = static_cast<unsigned char>(c);
    if (byte >= 0xC0) {
      while (i + len < src.size() && (static_cast<unsigned char>(src[i + len]) & 0xC0) == 0x80 &&
             len < 4) {
        ++len;
      }
    }
    out.push_back({Tok::invalid, src.substr(i, len), i});
    i += len;
  }
  // Premature end of input is reported at the last token read.
  const std::size_t end_offset = out.empty() ? 0 : out.back().offset;
  out.push_back({Tok::end, std::string_view{}, end_offset});
  return out;
}

class Parser {
public:
  explicit Parser(std::string_view src) : src_(src), toks_(lex(src)) {}

  SymbolSpec parse_spec() {
    SymbolSpec spec;
    bool any_line = false;
    skip_separators();
    while (peek().kind != Tok::end) {
      parse_line(spec);
      any_line = true;
      if (peek().kind == Tok::end) break;
      if (!(peek().kind == Tok::separator || is_punct(",")))
        fail("end of line");
      skip_separators();
    }
    if (!any_line) fail("line key (root, patch, tail or expr)");
    return spec;
  }

private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& advance() { return toks_[pos_ == toks_.size() - 1 ? pos_ : pos_++]; }

  bool is_punct(std::string_view p) const {
    return peek().kind == Tok::punct && peek().text == p;
  }
  bool is_ident(std::string_view name) const {
    return peek().kind == Tok::ident && peek().text == name;
  }

  [[noreturn]] void fail(const std::string& expected) const {
    const Token& t = peek();
    const std::string found = t.kind == Tok::end ? "end of input"
                              : t.kind == Tok::separator && t.text == "\n"
                                  ? "\\n"
                                  : std::string(t.text);
    throw ParseError(src_, t.offset, expected, found);
  }

  void expect_punct(std::string_view p) {
    if (!is_punct(p)) fail("'" + std::string(p) + "'");
    advance();
  }

  void skip_separators() {
    while (peek().kind == Tok::separator || is_punct(",")) advance();
  }

  void parse_line(SymbolSpec& spec) {
    if (is_ident("root")) {
      advance();
      expect_punct("=");
      spec.value_at_root = parse_complex();
    } else if (is_ident("patch")) {
      advance();
      if (peek().kind != Tok::number || !peek().integral ||
          peek().value > static_cast<double>(std::numeric_limits<VertexId>::max())) {
        fail("vertex id");
      }
      const auto id = static_cast<VertexId>(advance().value);
      expect_punct("=");
      spec.patches[id] = parse_complex();
    } else if (is_ident("tail")) {
      advance();
      expect_punct("=");
      spec.tail = parse_tail();
    } else if (is_ident("expr")) {
      advance();
      expect_punct("=");
      expr_ = Expression();
      expr_.set_root(parse_expr());
      spec.radial_expr = expr_;
    } else {
      fail("line key (root, patch, tail or expr)");
    }
  }

  Complex parse_complex() {
    const bool negative = is_punct("-");
    if (negative) advance();
    if (peek().kind == Tok::imaginary) {
      const double im = advance().value;
      return {0.0, negative ? -im : im};
    }
    if (peek().kind != Tok::number) fail("complex number");
    double re = advance().value;
    if (negative) re = -re;
    if (is_punct("+") || is_punct("-")) {
      const bool minus = is_punct("-");
      advance();
      if (peek().kind != Tok::imaginary) fail("imaginary part");
      const double im = advance().value;
      return {re, minus ? -im : im};
    }
    return {re, 0.0};
  }

  TailClass parse_tail() {
    if (peek().kind != Tok::ident) fail("tail class");
    const std::size_t start = peek().offset;
    std::size_t end = start + peek().text.size();
    advance();
    // Hyphenated names arrive as ident ('-' ident)*.
    while (is_punct("-") && toks_[pos_ + 1].kind == Tok::ident) {
      advance();
      end = peek().offset + peek().text.size();
      advance();
    }
    const std::string_view name = src_.substr(start, end - start);
    if (auto tail = parse_tail_class(name)) return *tail;
    throw ParseError(src_, start, "tail class", std::string(name));
  }

  int node(Expression::Op op, int lhs = -1, int rhs = -1, Complex value = {}, unsigned order = 0) {
    return expr_.add_node(Expression::Node{op, value, order, lhs, rhs});
  }

  int parse_expr() {
    int lhs = parse_term();
    while (is_punct("+") || is_punct("-")) {
      const auto op = is_punct("+") ? Expression::Op::add : Expression::Op::subtract;
      advance();
      const int rhs = parse_term();
      lhs = node(op, lhs, rhs);
    }
    return lhs;
  }

  int parse_term() {
    int lhs = parse_factor();
    while (is_punct("*") || is_punct("/")) {
      const auto op = is_punct("*") ? Expression::Op::multiply : Expression::Op::divide;
      advance();
      const int rhs = parse_factor();
      lhs = node(op, lhs, rhs);
    }
    return lhs;
  }

  struct NestingGuard {
    Parser& p;
    explicit NestingGuard(Parser& parser) : p(parser) {
      if (++p.nesting_ > kMaxNesting) p.fail("expression nested at most 200 levels");
    }
    ~NestingGuard() { --p.nesting_; }
  };

  int parse_call_1(Expression::Op op) {
    advance();
    expect_punct("(");
    const int arg = parse_expr();
    expect_punct(")");
    return node(op, arg);
  }

  int parse_factor() {
    NestingGuard guard(*this);
    const Token& t = peek();
    if (t.kind == Tok::number) {
      advance();
      return node(Expression::Op::constant, -1, -1, Complex(t.value, 0.0));
    }
    if (t.kind == Tok::imaginary) {
      advance();
      return node(Expression::Op::constant, -1, -1, Complex(0.0, t.value));
    }
    if (is_punct("-")) {
      advance();
      const int operand = parse_factor();
      return node(Expression::Op::negate, operand);
    }
    if (is_punct("(")) {
      advance();
      const int inner = parse_expr();
      expect_punct(")");
      return inner;
    }
    if (is_ident("n")) {
      advance();
      return node(Expression::Op::depth);
    }
    if (is_ident("ln")) return parse_call_1(Expression::Op::ln);
    if (is_ident("exp")) return parse_call_1(Expression::Op::exp);
    if (is_ident("pow")) {
      advance();
      expect_punct("(");
      const int base = parse_expr();
      expect_punct(",");
      const int exponent = parse_expr();
      expect_punct(")");
      return node(Expression::Op::pow, base, exponent);
    }
    if (is_ident("ell")) {
      advance();
      expect_punct("(");
      if (peek().kind != Tok::number || !peek().integral ||
          peek().value > static_cast<double>(kMaxEllOrder)) {
        fail("ell order (integer 0..16)");
      }
      const auto order = static_cast<unsigned>(advance().value);
      expect_punct(",");
      const int arg = parse_expr();
      expect_punct(")");
      return node(Expression::Op::ell, arg, -1, {}, order);
    }
    fail("factor");
  }

  std::string_view src_;
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  Expression expr_;
  int nesting_ = 0;
};

}  // namespace

SymbolSpec parse_symbol(std::string_view source) { return Parser(source).parse_spec(); }

std::string print_symbol(const SymbolSpec& spec) {
  auto complex_literal = [](Complex c) {
    std::string text = format_real(c.real());
    if (c.imag() != 0.0 || std::signbit(c.imag())) {
      text += std::signbit(c.imag()) ? "-" : "+";
      text += format_real(std::abs(c.imag())) + "i";
    }
    return text;
  };
  std::string out;
  out += "root = " + complex_literal(spec.value_at_root) + "\n";
  out += "tail = " + std::string(to_string(spec.tail)) + "\n";
  out += "expr = " + spec.radial_expr.to_string() + "\n";
  for (const auto& [id, value] : spec.patches) {
    out += "patch " + std::to_string(id) + " = " + complex_literal(value) + "\n";
  }
  return out;
}

TreeFunction evaluate(const SymbolSpec& spec, std::shared_ptr<const Tree> tree,
                      const WeightTable& table) {
  const Tree& t = *tree;
  require_table_covers(t, table);
  std::vector<Complex> by_depth(t.depth_bound() + 1, spec.value_at_root);
  for (std::size_t d = 1; d <= t.depth_bound(); ++d) {
    try {
      by_depth[d] = spec.radial_expr.evaluate(static_cast<double>(d));
    } catch (const EvalError& e) {
      throw EvalError(e.what(), t.level(d).front(), d);
    }
  }
  Eigen::VectorXcd values(static_cast<Eigen::Index>(t.size()));
  for (std::size_t v = 0; v < t.size(); ++v) {
    values(static_cast<Eigen::Index>(v)) = by_depth[t.depths()[v]];
  }
  for (const auto& [id, value] : spec.patches) {
    if (!t.contains(id)) {
      throw EvalError("patch refers to vertex " + std::to_string(id) + " outside a tree of " +
                      std::to_string(t.size()) + " vertices");
    }
    if (!std::isfinite(value.real()) || !std::isfinite(value.imag())) {
      throw EvalError("non-finite patch value", id, t.depth(id));
    }
    values(static_cast<Eigen::Index>(id)) = value;
  }
  return TreeFunction(std::move(tree), std::move(values), "dsl");
}

TailClass effective_tail(const SymbolSpec& spec) {
  if (spec.tail != TailClass::unknown || spec.radial_expr.depends_on_depth()) return spec.tail;
  try {
    const Complex c = spec.radial_expr.evaluate(1.0);
    return c == Complex(0.0) ? TailClass::eventually_zero : TailClass::eventually_constant;
  } catch (const EvalError&) {
    return TailClass::unknown;
  }
}

}  // namespace treelip
