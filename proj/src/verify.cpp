#include "treelip/verify.hpp"

#include "treelip/catalog.hpp"
#include "treelip/logweights.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <thread>

namespace treelip {

unsigned thread_budget(unsigned requested) {
  unsigned budget = requested;
  if (budget == 0) budget = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("TREELIP_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && cap > 0) budget = std::min(budget, static_cast<unsigned>(cap));
  }
  return budget;
}

namespace {

std::string span_text(const char* what, std::size_t lo, std::size_t hi, unsigned kmax) {
  std::ostringstream s;
  s << what << " n in [" << lo << ", " << hi << "], k <= " << kmax;
  return s.str();
}

// Runs body(k) for k = 1..max_k over at most `threads` workers.
void for_each_order(unsigned max_k, unsigned threads, const std::function<void(unsigned)>& body) {
  const unsigned workers = std::min(threads, max_k);
  if (workers <= 1) {
    for (unsigned k = 1; k <= max_k; ++k) body(k);
    return;
  }
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (unsigned k = 1 + w; k <= max_k; k += workers) body(k);
    });
  }
  for (auto& t : pool) t.join();
}

struct PerOrder {
  double recursion = 0.0;   // max relative deviation from the long double chain
  double alpha_rise = -std::numeric_limits<double>::infinity();  // max excess(n) - excess(n-1)
  double alpha_tail = 0.0;  // alpha(k, max_n) - 1
  double phi_min = std::numeric_limits<double>::infinity();
  double phi_rise = -std::numeric_limits<double>::infinity();
  double gamma_identity = 0.0;
  double mu_rise = std::numeric_limits<double>::infinity();  // min mu(n) - mu(n-1)
  double mu_product = 0.0;
};

PerOrder sweep_order(unsigned k, const WeightSweep& sweep) {
  PerOrder r;
  const WeightTable table(k, sweep.max_n, std::max(kDefaultMaxOrder, sweep.max_k + 1));
  for (std::size_t n = 1; n <= sweep.max_n; ++n) {
    long double chain = 1.0L;
    for (unsigned j = 1; j <= k; ++j) {
      chain = j == 1 ? 1.0L + std::log(static_cast<long double>(n)) : 1.0L + std::log(chain);
      const double tabulated = table.ell(j, n);
      const double deviation =
          static_cast<double>(std::abs(static_cast<long double>(tabulated) - chain) / chain);
      r.recursion = std::max(r.recursion, deviation);
    }
    const double product = table.mu(n) * table.ell(k, n);
    r.mu_product = std::max(r.mu_product, std::abs(product - table.mu_next(n)) / table.mu_next(n));
    if (n >= 2) r.mu_rise = std::min(r.mu_rise, table.mu(n) - table.mu(n - 1));
  }

  double previous = alpha_excess(k, 2);
  for (std::size_t n = 3; n <= sweep.max_n; ++n) {
    const double current = alpha_excess(k, n);
    r.alpha_rise = std::max(r.alpha_rise, current - previous);
    previous = current;
  }
  r.alpha_tail = alpha_excess(k, sweep.max_n);

  double phi_prev = phi(k, 2);
  r.phi_min = phi_prev;
  for (std::size_t n = 2; n <= sweep.phi_max_n; ++n) {
    const double current = n == 2 ? phi_prev : phi(k, n);
    if (n > 2) {
      r.phi_rise = std::max(r.phi_rise, current - phi_prev);
      phi_prev = current;
    }
    r.phi_min = std::min(r.phi_min, current);
    const double lhs = phi(k + 1, n) + 1.0;
    const double rhs = (current + 1.0) * gamma(k, n);
    r.gamma_identity = std::max(r.gamma_identity, std::abs(lhs - rhs) / lhs);
  }
  return r;
}

}  // namespace

std::vector<CheckResult> verify_weight_lemmas(const WeightSweep& sweep) {
  if (sweep.max_k < 1) throw WeightDomainError("sweep needs max_k >= 1");
  if (sweep.max_n < 3 || sweep.phi_max_n < 3) throw WeightDomainError("sweep needs n ranges >= 3");

  std::vector<PerOrder> per(sweep.max_k);
  for_each_order(sweep.max_k, thread_budget(sweep.threads),
                 [&](unsigned k) { per[k - 1] = sweep_order(k, sweep); });

  auto worst = [&](auto member, bool use_max) {
    double w = use_max ? -std::numeric_limits<double>::infinity()
                       : std::numeric_limits<double>::infinity();
    for (const auto& r : per) w = use_max ? std::max(w, r.*member) : std::min(w, r.*member);
    return w;
  };

  std::vector<CheckResult> out;
  const double recursion = worst(&PerOrder::recursion, true);
  out.push_back({"recursion", span_text("ell chain,", 1, sweep.max_n, sweep.max_k),
                 recursion <= 1e-13, recursion, "max relative deviation from a long double chain"});

  const double rise = worst(&PerOrder::alpha_rise, true);
  out.push_back({"alpha_decreasing", span_text("alpha,", 3, sweep.max_n, sweep.max_k), rise < 0.0,
                 rise, "max alpha_k(n) - alpha_k(n-1); must be negative"});
  const double tail = worst(&PerOrder::alpha_tail, true);
  const double tail_floor = worst(&PerOrder::alpha_tail, false);
  out.push_back({"alpha_limit", "alpha_k(" + std::to_string(sweep.max_n) + ") - 1",
                 tail_floor > 0.0 && (sweep.max_n < 1'000'000 || tail < 1e-6), tail,
                 "max over k of alpha_k(max_n) - 1"});

  const double phi_min = worst(&PerOrder::phi_min, false);
  out.push_back({"phi_positive", span_text("phi,", 2, sweep.phi_max_n, sweep.max_k), phi_min > 0.0,
                 phi_min, "min phi_{k,n}"});
  const double phi_rise = worst(&PerOrder::phi_rise, true);
  out.push_back({"phi_decreasing", span_text("phi,", 2, sweep.phi_max_n, sweep.max_k),
                 phi_rise < 0.0, phi_rise, "max phi_{k,n} - phi_{k,n-1}; must be negative"});
  const double phi_tail = phi(1, sweep.phi_max_n);
  out.push_back({"phi_limit", "phi_{1," + std::to_string(sweep.phi_max_n) + "}",
                 phi_tail > 0.0 && (sweep.phi_max_n < 100'000 || phi_tail < 1e-4), phi_tail,
                 "phi_{1,n} at the end of the range"});
  const double identity = worst(&PerOrder::gamma_identity, true);
  out.push_back({"gamma_identity", span_text("gamma,", 2, sweep.phi_max_n, sweep.max_k),
                 identity <= 1e-10, identity, "max relative residual of the gamma identity"});

  const double mu_rise = worst(&PerOrder::mu_rise, false);
  const double mu_product = worst(&PerOrder::mu_product, true);
  out.push_back({"mu_increasing", span_text("mu,", 1, sweep.max_n, sweep.max_k), mu_rise > 0.0,
                 mu_rise, "min mu_k(n) - mu_k(n-1)"});
  out.push_back({"mu_next_product", span_text("mu,", 1, sweep.max_n, sweep.max_k),
                 mu_product == 0.0, mu_product, "mu_{k+1} = mu_k ell_k, relative"});

  double residual = 0.0;
  double worst_order_ratio = 4.0;
  for (unsigned k = 1; k <= sweep.derivative_max_k; ++k) {
    for (double x : {1e1, 1e2, 1e3, 1e4}) {
      const double h = 1e-3 * x;
      const double r1 = ell_derivative_residual(k, x, h);
      const double r2 = ell_derivative_residual(k, x, h / 2);
      residual = std::max(residual, r1);
      const double ratio = r2 > 0.0 ? r1 / r2 : 4.0;
      if (std::abs(ratio - 4.0) > std::abs(worst_order_ratio - 4.0)) worst_order_ratio = ratio;
    }
  }
  out.push_back({"derivative_residual",
                 "x in {1e1, 1e2, 1e3, 1e4}, h = 1e-3 x, k <= " +
                     std::to_string(sweep.derivative_max_k),
                 residual < 1e-6, residual, "max |central difference - ell_k'(x)|"});
  out.push_back({"derivative_order", "residual(h) / residual(h/2)",
                 worst_order_ratio > 3.5 && worst_order_ratio < 4.5, worst_order_ratio,
                 "second order means a ratio near 4"});
  return out;
}

TreeFunction random_function(std::shared_ptr<const Tree> tree, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  Eigen::VectorXcd values(static_cast<Eigen::Index>(tree->size()));
  for (Eigen::Index i = 0; i < values.size(); ++i) values(i) = Complex(unit(rng), unit(rng));
  return TreeFunction(std::move(tree), std::move(values), "random(" + std::to_string(seed) + ")");
}

double product_bound_slack(const TreeFunction& psi, const TreeFunction& f,
                           const WeightTable& table) {
  const Tree& tree = psi.tree();
  require_table_covers(tree, table);
  const TreeFunction product = psi * f;
  const Eigen::VectorXd prefix = depth_truncated_norms(f, table);
  const Eigen::VectorXd dpsi = derivative_vector(psi);
  const Eigen::VectorXd df = derivative_vector(f);
  const Eigen::VectorXd dprod = derivative_vector(product);
  const double sup_psi = psi.values().cwiseAbs().maxCoeff();

  double slack = std::numeric_limits<double>::infinity();
  for (std::size_t v = 1; v < tree.size(); ++v) {
    const auto i = static_cast<Eigen::Index>(v);
    const std::size_t d = tree.depth(static_cast<VertexId>(v));
    const double lhs = table.mu(d) * dprod(i);
    const double rhs = table.mu_next(d) * dpsi(i) * prefix(static_cast<Eigen::Index>(d)) +
                       sup_psi * table.mu(d) * df(i);
    const double scale = std::max(lhs, rhs);
    slack = std::min(slack, scale == 0.0 ? 0.0 : (rhs - lhs) / scale);
  }
  return slack == std::numeric_limits<double>::infinity() ? 0.0 : slack;
}

namespace {

struct Tally {
  std::string name;
  std::string range;
  double worst;
  bool minimize;  // worst tracks the minimum when true
  bool pass = true;
  std::size_t cases = 0;

  void record(double value, bool ok) {
    ++cases;
    worst = minimize ? std::min(worst, value) : std::max(worst, value);
    pass = pass && ok;
  }
  CheckResult result() const {
    return {name, range, pass, worst, std::to_string(cases) + " cases"};
  }
};

Tally tally_min(std::string name, std::string range) {
  return {std::move(name), std::move(range), std::numeric_limits<double>::infinity(), true};
}
Tally tally_max(std::string name, std::string range) {
  return {std::move(name), std::move(range), 0.0, false};
}

std::vector<TreeFunction> catalog_sample(const std::shared_ptr<const Tree>& tree,
                                         const WeightTable& table, std::mt19937_64& rng) {
  std::vector<TreeFunction> out;
  const std::size_t depth = tree->depth_bound();
  auto pick = [&](std::size_t d) {
    const auto& level = tree->level(d);
    std::uniform_int_distribution<std::size_t> idx(0, level.size() - 1);
    return level[idx(rng)];
  };
  out.push_back(TreeFunction::constant(tree, 1.0));
  out.push_back(catalog::ellk_profile(tree, table));
  out.push_back(catalog::power_profile(tree, table, 0.5));
  out.push_back(catalog::shell(tree, table, 1 + rng() % depth));
  out.push_back(catalog::normalized_sector(tree, table, pick(1 + rng() % depth)));
  out.push_back(catalog::point_mass(tree, table, pick(1 + rng() % depth)));
  if (depth >= 2) out.push_back(catalog::plateau_profile(tree, table, pick(2 + rng() % (depth - 1))));
  if (depth >= 3) out.push_back(catalog::compact_probe(tree, table, 3 + rng() % (depth - 2)));
  if (depth >= 2) out.push_back(catalog::essential_probe(tree, table, 2 + rng() % (depth - 1), 0.5));
  return out;
}

}  // namespace

std::vector<CheckResult> verify_space(const SpaceSweep& sweep) {
  if (sweep.max_depth < 1 || sweep.max_children < 1 || sweep.k < 1) {
    throw SpaceError("space sweep needs depth, branching and k at least 1");
  }
  const std::string range = std::to_string(sweep.trees) + " random trees, depth <= " +
                            std::to_string(sweep.max_depth) + ", k = " + std::to_string(sweep.k);
  Tally triangle = tally_max("norm_triangle", range);
  Tally homogeneity = tally_max("norm_homogeneity", range);
  Tally definite = tally_min("norm_definite", range);
  Tally growth = tally_min("growth_bound", range);
  Tally idempotent = tally_max("truncation_idempotent", range);
  Tally contraction = tally_max("truncation_contraction", range);
  Tally complement = tally_max("truncation_complement", range);
  Tally decomposition = tally_max("chi_decomposition", range);
  Tally path = tally_min("path_sum", range);
  Tally product_upper = tally_min("product_rule_upper", range);
  Tally product_lower = tally_min("product_rule_lower", range);
  Tally multiplier = tally_min("multiplier_pointwise_bound", range);

  std::mt19937_64 rng(sweep.seed);
  for (std::size_t t = 0; t < sweep.trees; ++t) {
    const std::size_t depth = 1 + rng() % sweep.max_depth;
    auto tree = std::make_shared<const Tree>(
        generate_random(rng(), 1 + rng() % sweep.max_children, depth));
    const WeightTable table(sweep.k, depth);

    std::vector<TreeFunction> functions;
    for (std::size_t i = 0; i < sweep.functions_per_tree; ++i) {
      functions.push_back(random_function(tree, rng()));
    }
    for (auto& f : catalog_sample(tree, table, rng)) functions.push_back(std::move(f));

    definite.record(norm_value(TreeFunction::zero(tree), table) == 0.0 ? 1.0 : 0.0,
                    norm_value(TreeFunction::zero(tree), table) == 0.0);

    for (std::size_t i = 0; i < functions.size(); ++i) {
      const TreeFunction& f = functions[i];
      const TreeFunction& g = functions[(i + 1) % functions.size()];
      const double nf = norm_value(f, table);
      const double ng = norm_value(g, table);

      const double excess = norm_value(f + g, table) - (nf + ng);
      triangle.record(excess / std::max(nf + ng, 1e-300), excess <= 1e-12 * (nf + ng));

      const Complex c(std::uniform_real_distribution<double>(-3.0, 3.0)(rng), 0.5);
      const double scaled = norm_value(c * f, table);
      const double drift = std::abs(scaled - std::abs(c) * nf) / std::max(std::abs(c) * nf, 1e-300);
      homogeneity.record(drift, drift <= 1e-12);

      const bool nonzero = f.values().cwiseAbs().maxCoeff() > 0.0;
      definite.record(nf, !nonzero || nf > 0.0);

      const double slack = growth_bound_check(f, table).worst;
      growth.record(slack / std::max(nf, 1e-300), slack >= -1e-10 * nf);

      const std::size_t n = rng() % (depth + 1);
      const TreeFunction kn = truncate_K(f, n);
      const double twice = (truncate_K(kn, n).values() - kn.values()).cwiseAbs().maxCoeff();
      idempotent.record(twice, twice == 0.0);
      const double nk = norm_value(kn, table);
      contraction.record((nk - nf) / std::max(nf, 1e-300), nk <= nf * (1.0 + 1e-12));
      const double nr = norm_value(f - kn, table);
      complement.record((nr - nf) / std::max(nf, 1e-300), nr <= nf * (1.0 + 1e-12));

      const double up = [&] {
        const TreeFunction fg = f * g;
        const Eigen::VectorXd dfg = derivative_vector(fg);
        const Eigen::VectorXd df = derivative_vector(f);
        const Eigen::VectorXd dg = derivative_vector(g);
        double worst_up = std::numeric_limits<double>::infinity();
        double worst_low = std::numeric_limits<double>::infinity();
        for (std::size_t v = 1; v < tree->size(); ++v) {
          const auto vi = static_cast<Eigen::Index>(v);
          const auto id = static_cast<VertexId>(v);
          const double mu = table.mu(tree->depth(id));
          const Complex parent_psi = g(*tree->parent(id));
          const double bound = mu * (dg(vi) * std::abs(f(id)) + std::abs(parent_psi) * df(vi));
          worst_up = std::min(worst_up, bound - mu * dfg(vi));
          const double lower = mu * (dfg(vi) + std::abs(parent_psi) * df(vi));
          worst_low = std::min(worst_low, lower - mu * dg(vi) * std::abs(f(id)));
        }
        product_lower.record(worst_low, worst_low >= -1e-12);
        return worst_up;
      }();
      product_upper.record(up, up >= -1e-12);

      const double mslack = product_bound_slack(g, f, table);
      multiplier.record(mslack, mslack >= -1e-12);
    }

    for (std::size_t trial = 0; trial < 4; ++trial) {
      const auto v = static_cast<VertexId>(rng() % tree->size());
      if (tree->is_leaf(v)) continue;
      const double residual = chi_decomposition_check(tree, v);
      decomposition.record(residual, residual == 0.0);

      if (tree->depth(v) >= 1) {
        VertexId w = v;
        while (!tree->is_leaf(w)) {
          const auto kids = tree->children(w);
          w = kids[rng() % kids.size()];
        }
        const double slack = path_sum_check(*tree, table, v, w);
        path.record(slack, slack >= -1e-12);
      }
    }
  }

  return {triangle.result(),       homogeneity.result(),   definite.result(),
          growth.result(),         idempotent.result(),    contraction.result(),
          complement.result(),     decomposition.result(), path.result(),
          product_upper.result(),  product_lower.result(), multiplier.result()};
}

}  // namespace treelip
