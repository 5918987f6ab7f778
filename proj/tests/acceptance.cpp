// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include "treelip/catalog.hpp"
#include "treelip/multop.hpp"
#include "treelip/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>

using namespace treelip;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::shared_ptr<const Tree> regular(std::size_t q, std::size_t n) {
  return std::make_shared<const Tree>(generate_regular(q, n));
}

// The weight-chain sweep is shared by criteria 1-4; each check is timed as part of one run.
struct WeightRun {
  std::map<std::string, CheckResult> checks;
  double seconds = 0.0;
};

const WeightRun& weight_run() {
  static const WeightRun run = [] {
    WeightRun r;
    const auto start = Clock::now();
    for (auto& c : verify_weight_lemmas(WeightSweep{})) r.checks[c.name] = c;
    r.seconds = seconds_since(start);
    return r;
  }();
  return run;
}

Outcome weight_checks(std::initializer_list<const char*> names, double budget) {
  const WeightRun& run = weight_run();
  Outcome o;
  std::ostringstream s;
  for (const char* name : names) {
    const auto it = run.checks.find(name);
    if (it == run.checks.end()) {
      o.pass = false;
      s << name << " missing; ";
      continue;
    }
    o.pass = o.pass && it->second.pass;
    s << name << (it->second.pass ? " ok" : " FAILED") << " (worst " << it->second.worst << "); ";
  }
  // The whole sweep covers more than this criterion, so its time is an upper bound.
  if (run.seconds >= budget) o.pass = false;
  s << "sweep " << run.seconds << " s, budget " << budget << " s";
  o.detail = s.str();
  return o;
}

Outcome criterion_growth() {
  const auto start = Clock::now();
  double worst = std::numeric_limits<double>::infinity();
  std::mt19937_64 rng(20240601);
  for (int i = 0; i < 200; ++i) {
    const std::size_t depth = 1 + rng() % 12;
    const std::size_t children = 1 + rng() % 3;
    auto tree = std::make_shared<const Tree>(generate_random(rng(), children, depth));
    const unsigned k = 1 + static_cast<unsigned>(rng() % 3);
    const WeightTable table(k, depth);
    const TreeFunction f = random_function(tree, rng());
    const double scale = std::max(norm_value(f, table), 1e-300);
    worst = std::min(worst, growth_bound_check(f, table).worst / scale);
  }
  const double t = seconds_since(start);
  std::ostringstream s;
  s << "worst relative slack " << worst << ", " << t << " s";
  return {worst >= -1e-10 && t < 10.0, s.str()};
}

Outcome criterion_catalog() {
  const auto start = Clock::now();
  bool pass = true;
  double worst_shell = 0.0;
  for (unsigned k = 1; k <= 4; ++k) {
    for (auto [q, depth] : {std::pair<std::size_t, std::size_t>{1, 200}, {2, 10}, {3, 7}}) {
      auto tree = regular(q, depth);
      const WeightTable table(k, depth);
      for (std::size_t n = 1; n < depth; ++n) {
        const double value = norm_value(catalog::shell(tree, table, n), table);
        const double exact = table.mu(n + 1) / table.mu(n);
        worst_shell = std::max(worst_shell, std::abs(value - exact) / exact);
        if (value > std::pow(2.0, k)) pass = false;
      }
    }
  }
  pass = pass && worst_shell <= 1e-12;

  double worst_hn = 0.0;
  std::ostringstream worst_hn_case;
  const std::size_t m = 1000;
  auto ray = regular(1, m + 8);
  for (unsigned k : {1u, 2u}) {
    const WeightTable table(k, m + 8);
    for (double p : {0.25, 0.5, 0.75}) {
      const NormReport r = norm_k(catalog::essential_probe(ray, table, m, p), table);
      const double gap = std::abs(r.value - (1.0 + p)) / (1.0 + p);
      if (gap > worst_hn) {
        worst_hn = gap;
        worst_hn_case.str("");
        worst_hn_case << "k=" << k << " p=" << p << " norm " << r.value << " attained at depth "
                      << r.argmax;
      }
    }
  }
  pass = pass && worst_hn <= 0.01;
  const double t = seconds_since(start);
  std::ostringstream s;
  s << "shell rel err " << worst_shell << ", h_n rel gap " << worst_hn;
  if (worst_hn > 0.0) s << " (" << worst_hn_case.str() << ")";
  s << ", " << t << " s";
  return {pass && t < 30.0, s.str()};
}

Outcome criterion_sandwich() {
  const std::vector<std::string> symbols{
      "expr = 1; root = 1",
      "expr = -2.5i; root = -2.5i",
      "expr = 0.3 + 0.4i",
      "expr = 1/n; root = 1",
      "expr = 1/pow(n, 0.5); root = 1",
      "expr = 2/pow(n, 2)",
      "expr = 1/2 + 1/n; root = 1",
      "expr = 1/ell(1, n)",
      "expr = 1/ell(2, n); root = 1",
      "expr = 1/ell(3, n)",
      "expr = 3 - 1/ell(2, n)",
      "expr = exp(1i/n); root = 1",
      "expr = exp(2i/ell(1, n)); root = 1",
      "expr = exp(1i/pow(n, 0.5))",
      "expr = exp(-1i/n)*ell(1, n)/ell(1, n)",
      "expr = 0; patch 1 = 2; patch 3 = -1",
      "expr = 0; patch 2 = 1i; root = 4",
      "expr = 1; patch 5 = 0; root = 1",
      "expr = 1/n + 1i/ell(2, n)",
      "expr = (1 + 1i)/(1 + n)",
  };
  bool pass = true;
  double worst = std::numeric_limits<double>::infinity();
  std::string worst_case;
  std::size_t cases = 0;
  const std::vector<std::pair<std::size_t, std::size_t>> trees{{1, 1000}, {2, 12}};
  for (auto [q, depth] : trees) {
    auto tree = regular(q, depth);
    for (unsigned k : {1u, 2u}) {
      const WeightTable table(k, depth);
      for (const auto& src : symbols) {
        const Symbol psi = make_symbol(parse_symbol(src), tree, table);
        const auto bounds = opnorm_bounds(psi, table);
        const auto emp = empirical_opnorm_lower(psi, table);
        const double scale = std::max(bounds.upper, 1e-300);
        const double slack = std::min(emp.value - bounds.lower, bounds.upper - emp.value) / scale;
        ++cases;
        if (slack < worst) {
          worst = slack;
          worst_case = src + " (q=" + std::to_string(q) + ", k=" + std::to_string(k) + ")";
        }
        if (slack < -1e-9) pass = false;
      }
    }
  }
  std::ostringstream s;
  s << cases << " cases, worst relative slack " << worst << " at " << worst_case;
  return {pass, s.str()};
}

Outcome criterion_compact() {
  bool pass = true;
  std::ostringstream s;
  auto tree = regular(2, 16);
  for (unsigned k : {1u, 2u}) {
    const WeightTable table(k, 16);
    const Symbol patches = make_symbol(parse_symbol("expr = 0; patch 1 = 3; patch 4 = -2i"), tree, table);
    const std::size_t support_depth = 2;
    pass = pass && classify_compact(patches, table).classification.verdict == Verdict::yes;
    const auto ess = essential_norm_bounds(patches, table);
    pass = pass && ess.lower == 0.0 && ess.upper == 0.0;
    for (const auto& h : ess.history) {
      if (h.end_depth > support_depth + 8 + 1 && (h.a != 0.0 || h.b != 0.0)) pass = false;
    }
    const auto seq = compact_sequence_check(patches, table);
    for (std::size_t i = 0; i < seq.values.size(); ++i) {
      if (seq.shell_index[i] > support_depth && seq.values[i] != 0.0) pass = false;
    }
  }
  auto ray = regular(1, 1000);
  const WeightTable table(1, 1000);
  const Symbol one = make_symbol(parse_symbol("expr = 1; root = 1"), ray, table);
  pass = pass && classify_compact(one, table).classification.verdict == Verdict::no;
  const auto seq = compact_sequence_check(one, table);
  const double last = seq.values[seq.values.size() - 2];
  pass = pass && std::abs(last - 1.0) < 1e-2 && seq.values[10] > last;
  s << "constant-one shell value at n=999 is " << last;
  return {pass, s.str()};
}

Outcome criterion_spectrum() {
  bool pass = true;
  std::ostringstream s;
  auto tree = regular(2, 8);
  const WeightTable table(1, 8);
  const std::vector<std::pair<std::string, std::vector<Complex>>> finite{
      {"expr = 0; patch 1 = 2; patch 2 = 3", {0.0, 2.0, 3.0}},
      {"expr = 5; root = 5", {5.0}},
      {"expr = 1i; root = 2; patch 7 = -1", {Complex(-1.0), Complex(0.0, 1.0), Complex(2.0)}},
      {"expr = 1; patch 3 = 0; root = 1", {0.0, 1.0}},
  };
  for (const auto& [src, expected] : finite) {
    const Symbol psi = make_symbol(parse_symbol(src), tree, table);
    const auto sp = spectrum(psi, table);
    std::vector<Complex> points;
    for (const auto& p : sp.point_spectrum) points.push_back(p.value);
    const bool zero_in = std::find(sp.sigma.begin(), sp.sigma.end(), Complex(0.0)) != sp.sigma.end();
    const auto below = bounded_below(psi, table).classification.verdict;
    const bool ok = points == expected && sp.sigma == expected && sp.closure_extras.empty() &&
                    below == (zero_in ? Verdict::no : Verdict::yes);
    if (!ok) s << "mismatch for '" << src << "'; ";
    pass = pass && ok;
  }

  const std::size_t depth = 200;
  auto ray = regular(1, depth);
  const WeightTable ray_table(1, depth);
  const Symbol inv = make_symbol(
      parse_symbol("expr = 1/n; root = 1; tail = monotone-decreasing-modulus"), ray, ray_table);
  const auto sp = spectrum(inv, ray_table);
  bool range_ok = sp.point_spectrum.size() == depth;
  for (const auto& p : sp.point_spectrum) range_ok = range_ok && p.value != Complex(0.0);
  range_ok = range_ok && sp.closure_extras == std::vector<Complex>{0.0} &&
             sp.sigma.size() == depth + 1 && sp.sigma.front() == Complex(0.0);
  range_ok = range_ok && bounded_below(inv, ray_table).classification.verdict == Verdict::no;
  const Symbol shifted = make_symbol(
      parse_symbol("expr = 1 + 1/n; root = 2; tail = monotone-decreasing-modulus"), ray, ray_table);
  const auto ssp = spectrum(shifted, ray_table);
  const bool zero_out = std::find(ssp.sigma.begin(), ssp.sigma.end(), Complex(0.0)) == ssp.sigma.end();
  range_ok = range_ok && zero_out &&
             bounded_below(shifted, ray_table).classification.verdict == Verdict::yes;
  if (!range_ok) s << "1/n tail case mismatch; ";
  pass = pass && range_ok;
  s << "sigma(1/n) has " << sp.sigma.size() << " points";
  return {pass, s.str()};
}

Outcome criterion_isometry() {
  bool pass = true;
  std::ostringstream s;
  auto tree = regular(2, 8);
  const WeightTable table(2, 8);
  for (const char* src : {"expr = 1; root = 1", "expr = -1; root = -1", "expr = 1i; root = 1i",
                          "expr = 0.6 - 0.8i; root = 0.6 - 0.8i"}) {
    const Symbol psi = make_symbol(parse_symbol(src), tree, table);
    const auto r = isometry_check(psi, table, 1e-12);
    if (!r.consistent) s << "constant '" << src << "' failed at " << r.witness << "; ";
    pass = pass && r.consistent;
  }
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> angle(-3.0, 3.0);
  std::size_t witnessed = 0;
  for (int i = 0; i < 10; ++i) {
    const double a = angle(rng);
    const double b = angle(rng);
    std::ostringstream src;
    src.precision(17);
    // Root and patch values are literals, so unimodular ones are written out.
    auto literal = [](double theta) {
      std::ostringstream out;
      out.precision(17);
      out << std::cos(theta) << (std::sin(theta) < 0 ? "" : "+") << std::sin(theta) << "i";
      return out.str();
    };
    switch (i % 3) {
      case 0: src << "expr = exp(" << a << "i/n); root = " << literal(b); break;
      case 1: src << "expr = exp(" << a << "i/ell(1, n)); root = 1"; break;
      default:
        src << "expr = exp(" << a << "i); patch 3 = " << literal(b) << "; root = " << literal(a);
        break;
    }
    const Symbol psi = make_symbol(parse_symbol(src.str()), tree, table);
    const auto r = isometry_check(psi, table, 1e-12);
    if (!r.consistent) ++witnessed;
    else s << "no witness for '" << src.str() << "'; ";
  }
  pass = pass && witnessed == 10;
  s << witnessed << "/10 non-constant symbols witnessed";
  return {pass, s.str()};
}

// Random well-formed expression, used to exercise the print/parse round trip.
std::string random_expr(std::mt19937_64& rng, int depth) {
  const auto pick = rng() % (depth <= 0 ? 3 : 10);
  switch (pick) {
    case 0: return "n";
    case 1: return std::to_string(rng() % 100) + "." + std::to_string(rng() % 10);
    case 2: return std::to_string(1 + rng() % 9) + "i";
    case 3: return random_expr(rng, depth - 1) + " + " + random_expr(rng, depth - 1);
    case 4: return random_expr(rng, depth - 1) + " - " + random_expr(rng, depth - 1);
    case 5: return random_expr(rng, depth - 1) + " * " + random_expr(rng, depth - 1);
    case 6: return random_expr(rng, depth - 1) + " / (" + random_expr(rng, depth - 1) + ")";
    case 7: return "pow(" + random_expr(rng, depth - 1) + ", " + std::to_string(rng() % 4) + ")";
    case 8: return "ell(" + std::to_string(rng() % 4) + ", n + " + std::to_string(rng() % 5) + ")";
    default: return "-(" + random_expr(rng, depth - 1) + ")";
  }
}

Outcome criterion_parser() {
  const auto start = Clock::now();
  bool pass = true;
  std::ostringstream s;
  // Grammar examples.
  try {
    const SymbolSpec a = parse_symbol("expr = 1/pow(n,0.5)\nroot = 0");
    pass = pass && a.value_at_root == Complex(0.0) &&
           std::abs(a.radial_expr.evaluate(4.0) - Complex(0.5)) < 1e-15;
    const SymbolSpec b = parse_symbol("expr = 1/ell(1,n)");
    pass = pass && std::abs(b.radial_expr.evaluate(std::exp(1.0)) - Complex(0.5)) < 1e-15;
    auto ray = regular(1, 4);
    const WeightTable table(1, 4);
    const auto inv = evaluate(parse_symbol("expr = 1/n"), ray, table);
    for (VertexId v = 1; v <= 4; ++v) pass = pass && inv(v) == Complex(1.0 / v);
    const auto two = evaluate(parse_symbol("expr = 2"), ray, table);
    for (VertexId v = 1; v <= 4; ++v) pass = pass && two(v) == Complex(2.0);
    const SymbolSpec sq = parse_symbol("expr = 1/pow(n,2)");
    const SymbolSpec back = parse_symbol(print_symbol(sq));
    for (double n : {1.0, 2.0, 3.0, 1000.0}) {
      pass = pass && sq.radial_expr.evaluate(n) == back.radial_expr.evaluate(n);
    }
  } catch (const std::exception& e) {
    pass = false;
    s << "example threw: " << e.what() << "; ";
  }
  try {
    parse_symbol("expr = n +");
    pass = false;
  } catch (const ParseError& e) {
    pass = pass && e.position() == 9 && e.expected() == "factor";
  }

  // Fuzz: random token soup and byte noise; only ParseError may escape parsing.
  const std::array<std::string, 22> pieces{
      "expr = ", "root = ", "patch 3 = ", "tail = ", "eventually-zero", "n", "pow(", "ell(",
      "exp(", "ln(", ")", ",", ";", "\n", "+", "-", "*", "/", "1", "2.5e-3", "1i", "(("};
  std::mt19937_64 rng(11);
  std::size_t parsed = 0;
  std::size_t rejected = 0;
  std::size_t mismatches = 0;
  for (int iter = 0; iter < 1'000'000; ++iter) {
    std::string src;
    if (iter % 2 == 0) {
      const std::size_t len = rng() % 24;
      for (std::size_t i = 0; i < len; ++i) {
        const auto r = rng();
        if (r % 4 == 0) src += static_cast<char>(r >> 8);
        else src += pieces[(r >> 8) % pieces.size()];
      }
    } else {
      // Well-formed input with an occasional single-byte mutation.
      src = "expr = " + random_expr(rng, 4) + "; root = " + std::to_string(rng() % 7);
      if (rng() % 4 == 0) src[rng() % src.size()] = static_cast<char>(rng());
    }
    try {
      const SymbolSpec spec = parse_symbol(src);
      ++parsed;
      if (iter % 8 == 1) {
        const SymbolSpec again = parse_symbol(print_symbol(spec));
        Complex x, y;
        bool xe = false, ye = false;
        try { x = spec.radial_expr.evaluate(3.0); } catch (const EvalError&) { xe = true; }
        try { y = again.radial_expr.evaluate(3.0); } catch (const EvalError&) { ye = true; }
        if (xe != ye || (!xe && !(x == y || (std::isnan(x.real()) && std::isnan(y.real()))))) ++mismatches;
      }
    } catch (const ParseError& e) {
      ++rejected;
      if (e.position() > src.size()) ++mismatches;
    } catch (const std::exception& e) {
      ++mismatches;
    }
  }
  const double t = seconds_since(start);
  pass = pass && mismatches == 0 && t < 60.0;
  s << parsed << " parsed, " << rejected << " rejected, " << mismatches << " anomalies, " << t << " s";
  return {pass, s.str()};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"1 weight-chain recursion", [] { return weight_checks({"recursion"}, 5.0); }},
      {"2 alpha decreasing and limit", [] { return weight_checks({"alpha_decreasing", "alpha_limit"}, 10.0); }},
      {"3 phi and gamma", [] {
         return weight_checks({"phi_positive", "phi_decreasing", "phi_limit", "gamma_identity"}, 10.0);
       }},
      {"4 derivative identity", [] { return weight_checks({"derivative_residual", "derivative_order"}, 1e9); }},
      {"5 growth bound", criterion_growth},
      {"6 catalog norms", criterion_catalog},
      {"7 norm sandwich", criterion_sandwich},
      {"8 compactness coherence", criterion_compact},
      {"9 spectrum", criterion_spectrum},
      {"10 isometry", criterion_isometry},
      {"11 parser", criterion_parser},
  };
  int failures = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("%s criterion %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
