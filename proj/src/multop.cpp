#include "treelip/multop.hpp"

#include "treelip/catalog.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <utility>

namespace treelip {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::yes: return "yes";
    case Verdict::no: return "no";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

Symbol make_symbol(const SymbolSpec& spec, std::shared_ptr<const Tree> tree,
                   const WeightTable& table) {
  Symbol out{evaluate(spec, tree, table), effective_tail(spec), std::nullopt};
  if (out.tail == TailClass::eventually_constant && tree->depth_bound() > 0) {
    out.tail_value = spec.radial_expr.evaluate(static_cast<double>(tree->depth_bound()));
  }
  return out;
}

TailDiagnostic diagnose(std::string quantity, const DepthProfile& profile,
                        const AnalysisOptions& options) {
  TailDiagnostic out;
  out.quantity = std::move(quantity);
  const auto& x = profile.values;
  const Eigen::Index len = x.size();
  if (len == 0) return out;

  const auto w = static_cast<Eigen::Index>(options.window);
  const double tol = options.tolerance;

  Eigen::VectorXd running(len);
  running(0) = x(0);
  for (Eigen::Index i = 1; i < len; ++i) running(i) = std::max(running(i - 1), x(i));

  const Eigen::Index first = std::max<Eigen::Index>(0, len - 1 - w);
  const auto tail = x.segment(first, len - first);
  out.sup = running(len - 1);
  out.window_sup = tail.maxCoeff();
  out.window_min = tail.minCoeff();

  const double base = running(first);
  out.relative_change = out.sup == 0.0 ? 0.0 : (out.sup - base) / out.sup;

  const bool enough = len > w;
  if (!enough) return out;

  out.converged = out.relative_change <= tol;
  out.decayed = out.window_sup <= tol * out.sup;

  // Growth and envelope claims need two full windows of evidence.
  if (len >= 2 * (w + 1)) {
    bool rising = true;
    for (Eigen::Index i = len - 2 * (w + 1) + 1; i < len; ++i) {
      rising = rising && running(i) > running(i - 1);
    }
    out.growing = rising && !out.converged;
    const double previous_min = x.segment(len - 2 * (w + 1), w + 1).minCoeff();
    out.positive_envelope =
        out.window_min > tol * out.sup && out.window_min >= (1.0 - tol) * previous_min;
  }
  return out;
}

namespace {

// Relative movement of the last value across the window; small means settled.
double tail_drift(const DepthProfile& profile, std::size_t window) {
  const auto len = static_cast<Eigen::Index>(profile.size());
  if (len == 0) return 0.0;
  const Eigen::Index first = std::max<Eigen::Index>(0, len - 1 - static_cast<Eigen::Index>(window));
  const double last = profile.values(len - 1);
  const double then = profile.values(first);
  if (last == then) return 0.0;
  if (last == 0.0) return std::numeric_limits<double>::infinity();
  return std::abs(then - last) / std::abs(last);
}

bool certified_finite(TailClass tail) {
  return tail == TailClass::eventually_zero || tail == TailClass::eventually_constant;
}

Classification verdict(Verdict v, std::string reason, std::string quantity, double value) {
  return Classification{v, std::move(reason), std::move(quantity), value};
}

void require_bounded_not_no(const Symbol& psi, const WeightTable& table,
                            const AnalysisOptions& options, const char* what) {
  if (classify_bounded(psi, table, options).classification.verdict == Verdict::no) {
    throw AnalysisError(std::string(what) + " requires a bounded operator; bounded verdict is no");
  }
}

double ratio(const TreeFunction& image, const TreeFunction& probe, const WeightTable& table) {
  const double denominator = norm_value(probe, table);
  return denominator == 0.0 ? 0.0 : norm_value(image, table) / denominator;
}

}  // namespace

SymbolProfiles symbol_profiles(const Symbol& psi, const WeightTable& table) {
  const Tree& tree = psi.values.tree();
  require_table_covers(tree, table);
  const std::size_t depth = tree.depth_bound();

  SymbolProfiles out;
  out.modulus_sup.first_depth = 0;
  out.modulus_sup.values = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(depth + 1));
  out.modulus_inf.first_depth = 0;
  out.modulus_inf.values = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(depth + 1),
                                                     std::numeric_limits<double>::infinity());
  out.weighted_next_sup.first_depth = 1;
  out.weighted_next_sup.values = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(depth), -1.0);
  out.weighted_next_argmax.assign(depth, kRoot);

  const Eigen::VectorXd dpsi = derivative_vector(psi.values);
  for (std::size_t v = 0; v < tree.size(); ++v) {
    const auto id = static_cast<VertexId>(v);
    const std::size_t d = tree.depth(id);
    const auto di = static_cast<Eigen::Index>(d);
    const double modulus = std::abs(psi.values(id));
    out.modulus_sup.values(di) = std::max(out.modulus_sup.values(di), modulus);
    out.modulus_inf.values(di) = std::min(out.modulus_inf.values(di), modulus);
    if (d == 0) continue;
    const double weighted = table.mu_next(d) * dpsi(static_cast<Eigen::Index>(v));
    if (weighted > out.weighted_next_sup.values(di - 1)) {
      out.weighted_next_sup.values(di - 1) = weighted;
      out.weighted_next_argmax[d - 1] = id;
    }
  }
  return out;
}

BoundedResult classify_bounded(const Symbol& psi, const WeightTable& table,
                               const AnalysisOptions& options) {
  const SymbolProfiles profiles = symbol_profiles(psi, table);
  BoundedResult out;
  out.modulus = diagnose("sup|psi|", profiles.modulus_sup, options);
  out.weighted = diagnose("sup mu_{k+1} Dpsi", profiles.weighted_next_sup, options);
  out.sup_modulus = out.modulus.sup;
  out.sup_weighted_next = out.weighted.sup;

  const bool modulus_certified =
      certified_finite(psi.tail) || psi.tail == TailClass::monotone_decreasing_modulus;
  const bool weighted_certified = certified_finite(psi.tail);
  const bool modulus_ok = modulus_certified || out.modulus.converged;
  const bool weighted_ok = weighted_certified || out.weighted.converged;

  if (modulus_ok && weighted_ok) {
    const bool by_tail = modulus_certified && weighted_certified;
    out.classification =
        verdict(Verdict::yes,
                by_tail ? "tail class " + std::string(to_string(psi.tail)) + " bounds both sups"
                        : "running sups of |psi| and mu_{k+1} Dpsi converged",
                "sup|psi| + sup mu_{k+1} Dpsi", out.sup_modulus + out.sup_weighted_next);
  } else if (!modulus_certified && out.modulus.growing) {
    out.classification = verdict(Verdict::no, "sup|psi| grows at every depth of the last two windows",
                                 "sup|psi|", out.sup_modulus);
  } else if (!weighted_certified && out.weighted.growing) {
    out.classification =
        verdict(Verdict::no, "sup mu_{k+1} Dpsi grows at every depth of the last two windows",
                "sup mu_{k+1} Dpsi", out.sup_weighted_next);
  } else {
    const auto& open = modulus_ok ? out.weighted : out.modulus;
    out.classification = verdict(Verdict::inconclusive,
                                 open.quantity + " neither converged nor grew monotonically",
                                 open.quantity, open.relative_change);
  }
  return out;
}

OperatorNormBounds opnorm_bounds(const Symbol& psi, const WeightTable& table,
                                 const AnalysisOptions& options) {
  const BoundedResult bounded = classify_bounded(psi, table, options);
  if (bounded.classification.verdict == Verdict::no) {
    throw AnalysisError("operator norm bounds require a bounded operator; bounded verdict is no");
  }
  OperatorNormBounds out;
  out.sup_modulus = bounded.sup_modulus;
  out.sup_weighted_next = bounded.sup_weighted_next;
  out.norm_k = norm_value(psi.values, table);
  out.lower = std::max(out.sup_modulus, out.norm_k);
  out.upper = out.sup_modulus + out.sup_weighted_next;
  return out;
}

EmpiricalNorm empirical_opnorm_lower(const Symbol& psi, const WeightTable& table,
                                     unsigned families) {
  const auto& tree_ptr = psi.values.tree_ptr();
  const Tree& tree = *tree_ptr;
  require_table_covers(tree, table);
  const std::size_t depth = tree.depth_bound();

  EmpiricalNorm out;
  auto consider = [&](const TreeFunction& probe) {
    ++out.probes;
    const double r = ratio(psi.values * probe, probe, table);
    if (r > out.value || out.best_probe.empty()) {
      out.value = r;
      out.best_probe = probe.provenance();
    }
  };

  if (families & probe_constant) consider(TreeFunction::constant(tree_ptr, 1.0));
  for (std::size_t d = 0; d <= depth; ++d) {
    const auto& level = tree.level(d);
    if (level.empty()) continue;
    const VertexId first = level.front();
    if (families & probe_point_masses) {
      VertexId best = first;
      for (VertexId v : level) {
        if (std::abs(psi.values(v)) > std::abs(psi.values(best))) best = v;
      }
      consider(d == 0 ? catalog::chi(tree_ptr, best) : catalog::point_mass(tree_ptr, table, best));
    }
    if ((families & probe_sectors) && d >= 1) {
      consider(catalog::normalized_sector(tree_ptr, table, first));
    }
    if ((families & probe_plateaus) && d >= 2) {
      consider(catalog::plateau_profile(tree_ptr, table, first));
    }
    if ((families & probe_shells) && d >= 1) consider(catalog::shell(tree_ptr, table, d));
  }
  if (families & probe_powers) {
    for (double p : {0.25, 0.5, 0.75}) consider(catalog::power_profile(tree_ptr, table, p));
  }
  if (families & probe_ellk) consider(catalog::ellk_profile(tree_ptr, table));
  return out;
}

CompactResult classify_compact(const Symbol& psi, const WeightTable& table,
                               const AnalysisOptions& options) {
  const BoundedResult bounded = classify_bounded(psi, table, options);
  CompactResult out;
  out.modulus = bounded.modulus;
  out.weighted = bounded.weighted;

  if (bounded.classification.verdict == Verdict::no) {
    out.classification = verdict(Verdict::no, "operator is not bounded",
                                 bounded.classification.quantity, bounded.classification.value);
    return out;
  }
  if (psi.tail == TailClass::eventually_zero) {
    out.classification = verdict(Verdict::yes, "tail class eventually-zero", "sup|psi| tail", 0.0);
  } else if (psi.tail_value && std::abs(*psi.tail_value) > 0.0) {
    out.classification = verdict(Verdict::no, "tail class eventually-constant with a nonzero value",
                                 "|psi| tail value", std::abs(*psi.tail_value));
  } else if (out.modulus.decayed && out.weighted.decayed) {
    out.classification = verdict(Verdict::yes, "both tails decayed below tolerance",
                                  "window sup|psi| + window sup mu_{k+1} Dpsi",
                                  out.modulus.window_sup + out.weighted.window_sup);
  } else if (out.modulus.positive_envelope) {
    out.classification = verdict(Verdict::no, "|psi| tail has a positive non-decreasing envelope",
                                 "window min sup|psi|", out.modulus.window_min);
  } else if (out.weighted.positive_envelope) {
    out.classification =
        verdict(Verdict::no, "mu_{k+1} Dpsi tail has a positive non-decreasing envelope",
                "window min sup mu_{k+1} Dpsi", out.weighted.window_min);
  } else {
    out.classification = verdict(Verdict::inconclusive, "tails neither decayed nor stayed positive",
                                 "window sup|psi|", out.modulus.window_sup);
  }
  // Compactness implies boundedness; never report one without the other.
  if (out.classification.verdict == Verdict::yes &&
      bounded.classification.verdict != Verdict::yes) {
    out.classification = verdict(Verdict::inconclusive, "tails decayed but boundedness undecided",
                                 out.classification.quantity, out.classification.value);
  }
  return out;
}

ShellSequence compact_sequence_check(const Symbol& psi, const WeightTable& table,
                                     const AnalysisOptions& options) {
  const auto& tree_ptr = psi.values.tree_ptr();
  require_table_covers(*tree_ptr, table);
  const std::size_t depth = tree_ptr->depth_bound();
  ShellSequence out;
  const std::size_t tail_start = depth > options.window ? depth - options.window : 1;
  for (std::size_t n = 1; n <= depth; ++n) {
    const double value = norm_value(psi.values * catalog::shell(tree_ptr, table, n), table);
    out.shell_index.push_back(n);
    out.values.push_back(value);
    if (n >= tail_start) out.tail_max = std::max(out.tail_max, value);
  }
  return out;
}

BoundedBelowResult bounded_below(const Symbol& psi, const WeightTable& table,
                                 const AnalysisOptions& options) {
  require_bounded_not_no(psi, table, options, "bounded-below analysis");
  const SymbolProfiles profiles = symbol_profiles(psi, table);

  BoundedBelowResult out;
  out.modulus_inf = diagnose("inf|psi|", profiles.modulus_inf, options);
  out.inf_modulus = std::numeric_limits<double>::infinity();
  const Eigen::VectorXcd& values = psi.values.values();
  for (Eigen::Index v = 0; v < values.size(); ++v) {
    const double m = std::abs(values(v));
    if (m < out.inf_modulus) {
      out.inf_modulus = m;
      out.inf_vertex = static_cast<VertexId>(v);
    }
  }

  const double drift = tail_drift(profiles.modulus_inf, options.window);
  const bool settled = drift <= options.tolerance;

  if (out.inf_modulus == 0.0) {
    out.classification = verdict(Verdict::no, "psi vanishes at vertex " +
                                                  std::to_string(out.inf_vertex),
                                 "inf|psi|", 0.0);
  } else if (psi.tail == TailClass::eventually_zero) {
    out.classification = verdict(Verdict::no, "tail class eventually-zero", "inf|psi|", 0.0);
  } else if (out.modulus_inf.decayed) {
    out.classification = verdict(Verdict::no, "inf|psi| tail decayed below tolerance",
                                 "window sup inf|psi|", out.modulus_inf.window_sup);
  } else if (psi.tail == TailClass::monotone_decreasing_modulus && !settled) {
    out.classification = verdict(Verdict::no, "monotone |psi| tail still decaying across the window",
                                 "relative drift inf|psi|", drift);
  } else if (psi.tail == TailClass::eventually_constant ||
             (psi.tail == TailClass::monotone_decreasing_modulus && settled)) {
    out.classification = verdict(Verdict::yes,
                                 "tail class " + std::string(to_string(psi.tail)) +
                                     " with a positive limit inferior",
                                 "inf|psi|", out.inf_modulus);
  } else {
    out.classification = verdict(Verdict::inconclusive,
                                 "positive finite inf but the tail class is unknown", "inf|psi|",
                                 out.inf_modulus);
  }
  return out;
}

namespace {

struct ComplexLess {
  bool operator()(const Complex& a, const Complex& b) const {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  }
};

}  // namespace

SpectrumReport spectrum(const Symbol& psi, const WeightTable& table,
                        const AnalysisOptions& options) {
  require_bounded_not_no(psi, table, options, "spectrum");
  const Tree& tree = psi.values.tree();
  const std::size_t depth = tree.depth_bound();
  const std::size_t settled_depth = depth > options.window ? depth - options.window : 0;

  std::map<Complex, VertexId, ComplexLess> range;
  bool fresh_in_tail = false;
  for (std::size_t v = 0; v < tree.size(); ++v) {
    const auto id = static_cast<VertexId>(v);
    const auto [it, inserted] = range.try_emplace(psi.values(id), id);
    if (inserted && tree.depth(id) > settled_depth) fresh_in_tail = true;
  }

  SpectrumReport out;
  for (const auto& [value, witness] : range) out.point_spectrum.push_back({value, witness});

  std::vector<Complex> extras;
  const SymbolProfiles profiles = symbol_profiles(psi, table);
  const VertexId deepest = tree.level(depth).front();
  switch (psi.tail) {
    case TailClass::eventually_zero:
      extras.push_back(0.0);
      out.note = "eventually-zero tail contributes 0";
      break;
    case TailClass::eventually_constant:
      extras.push_back(psi.values(deepest));
      out.note = "eventually-constant tail contributes its deepest value";
      break;
    case TailClass::monotone_decreasing_modulus:
      if (tail_drift(profiles.modulus_inf, options.window) > options.tolerance ||
          diagnose("inf|psi|", profiles.modulus_inf, options).decayed) {
        extras.push_back(0.0);
        out.note = "monotone tail still decaying; limit 0 added";
      } else {
        extras.push_back(psi.values(deepest));
        out.closure_exact = false;
        out.note = "monotone tail settled; deepest value stands in for the limit";
      }
      break;
    case TailClass::unknown:
      if (fresh_in_tail) {
        throw AnalysisError(
            "spectrum refused: tail class unknown and new values appear in the last " +
            std::to_string(options.window) + " depth levels");
      }
      out.note = "range stabilized before the last window; no limit points added";
      break;
  }

  for (const Complex& c : extras) {
    if (!range.contains(c)) out.closure_extras.push_back(c);
  }
  std::map<Complex, bool, ComplexLess> sigma;
  for (const auto& point : out.point_spectrum) sigma.emplace(point.value, true);
  for (const Complex& c : out.closure_extras) sigma.emplace(c, true);
  for (const auto& entry : sigma) out.sigma.push_back(entry.first);
  out.sigma_ap = out.sigma;
  return out;
}

EssentialNormBounds essential_norm_bounds(const Symbol& psi, const WeightTable& table,
                                          const AnalysisOptions& options) {
  require_bounded_not_no(psi, table, options, "essential norm bounds");
  const SymbolProfiles profiles = symbol_profiles(psi, table);
  const std::size_t depth = psi.values.tree().depth_bound();

  EssentialNormBounds out;
  DepthProfile a_seq{1, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(depth))};
  DepthProfile b_seq{1, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(depth))};
  for (std::size_t end = 1; end <= depth; ++end) {
    const std::size_t begin = end > options.window ? end - options.window : 1;
    const auto count = static_cast<Eigen::Index>(end - begin + 1);
    WindowSample sample;
    sample.end_depth = end;
    sample.a = profiles.modulus_sup.values.segment(static_cast<Eigen::Index>(begin), count).maxCoeff();
    sample.b = profiles.weighted_next_sup.values
                   .segment(static_cast<Eigen::Index>(begin - 1), count)
                   .maxCoeff();
    a_seq.values(static_cast<Eigen::Index>(end - 1)) = sample.a;
    b_seq.values(static_cast<Eigen::Index>(end - 1)) = sample.b;
    out.history.push_back(sample);
  }
  out.a = out.history.back().a;
  out.b = out.history.back().b;
  out.lower = std::max(out.a, out.b);
  out.upper = out.a + out.b;
  out.a_tail = diagnose("A_N", a_seq, options);
  out.b_tail = diagnose("B_N", b_seq, options);
  return out;
}

EssentialWitness essnorm_lower_witness(const Symbol& psi, const WeightTable& table, double p,
                                       const AnalysisOptions& options) {
  if (!(p > 0.0 && p < 1.0)) throw AnalysisError("essential witness needs p in (0, 1)");
  require_bounded_not_no(psi, table, options, "essential norm witness");
  const auto& tree_ptr = psi.values.tree_ptr();
  const std::size_t depth = tree_ptr->depth_bound();

  EssentialWitness out;
  out.p = p;

  const std::size_t first = depth > options.window ? depth - options.window : 1;
  const std::size_t last = depth > 1 ? depth - 1 : depth;
  for (std::size_t n = first; n <= last; ++n) {
    const TreeFunction s = catalog::shell(tree_ptr, table, n);
    out.a_route = std::max(out.a_route, ratio(psi.values * s, s, table));
  }

  if (depth < 2) return out;
  const SymbolProfiles profiles = symbol_profiles(psi, table);
  const std::size_t b_first = std::max<std::size_t>(2, first);
  double best = -1.0;
  for (std::size_t d = b_first; d <= depth; ++d) {
    const double value = profiles.weighted_next_sup.values(static_cast<Eigen::Index>(d - 1));
    if (value > best) {
      best = value;
      out.depth = d;
      out.vertex = profiles.weighted_next_argmax[d - 1];
    }
  }
  const TreeFunction h = catalog::essential_probe(tree_ptr, table, out.depth, p);
  out.hn_norm = norm_value(h, table);
  const double dpsi = derivative(psi.values, out.vertex);
  out.b_route = table.mu(out.depth) * table.ell(table.k(), out.depth) * dpsi / out.hn_norm;
  return out;
}

IsometryResult isometry_check(const Symbol& psi, const WeightTable& table,
                              double relative_tolerance) {
  const auto& tree_ptr = psi.values.tree_ptr();
  const Tree& tree = *tree_ptr;
  require_table_covers(tree, table);

  IsometryResult out;
  auto differs = [&](const TreeFunction& probe) {
    ++out.probes;
    const double probe_norm = norm_value(probe, table);
    const double image_norm = norm_value(psi.values * probe, table);
    if (std::abs(image_norm - probe_norm) > relative_tolerance * probe_norm) {
      out.consistent = false;
      out.witness = probe.provenance();
      out.image_norm = image_norm;
      out.probe_norm = probe_norm;
      return true;
    }
    return false;
  };

  if (differs((Complex(0.5) * catalog::chi(tree_ptr, kRoot)).with_provenance("chi(0)/2"))) {
    return out;
  }
  if (differs(TreeFunction::constant(tree_ptr, 1.0).with_provenance("constant(1)"))) return out;
  for (std::size_t v = 1; v < tree.size(); ++v) {
    if (differs(catalog::isometry_probe(tree_ptr, table, static_cast<VertexId>(v)))) return out;
  }
  for (std::size_t d = 1; d <= tree.depth_bound(); ++d) {
    const VertexId w = tree.level(d).front();
    if (differs(catalog::normalized_sector(tree_ptr, table, w))) return out;
    if (d >= 2 && differs(catalog::plateau_profile(tree_ptr, table, w))) return out;
  }
  if (differs(catalog::power_profile(tree_ptr, table, 0.5))) return out;
  if (differs(catalog::ellk_profile(tree_ptr, table))) return out;
  return out;
}

bool AnalysisReport::any_inconclusive() const {
  if (bounded.classification.verdict == Verdict::inconclusive) return true;
  if (compact.classification.verdict == Verdict::inconclusive) return true;
  return below && below->classification.verdict == Verdict::inconclusive;
}

AnalysisReport analyze(const Symbol& psi, const WeightTable& table,
                       const AnalysisOptions& options) {
  AnalysisReport out;
  out.k = table.k();
  out.options = options;
  out.bounded = classify_bounded(psi, table, options);
  out.compact = classify_compact(psi, table, options);
  if (out.bounded.classification.verdict != Verdict::no) {
    out.below = bounded_below(psi, table, options);
    out.opnorm = opnorm_bounds(psi, table, options);
    out.essnorm = essential_norm_bounds(psi, table, options);
  }
  return out;
}

}  // namespace treelip
