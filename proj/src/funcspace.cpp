#include "treelip/funcspace.hpp"

#include "treelip/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace treelip {

TreeFunction::TreeFunction(std::shared_ptr<const Tree> tree, Eigen::VectorXcd values,
                           std::string provenance)
    : tree_(std::move(tree)), values_(std::move(values)), provenance_(std::move(provenance)) {
  if (!tree_) throw SpaceError("function needs a tree");
  if (static_cast<std::size_t>(values_.size()) != tree_->size()) {
    throw SpaceError("function has " + std::to_string(values_.size()) +
                     " values for a tree of " + std::to_string(tree_->size()) + " vertices");
  }
  for (Eigen::Index i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_(i).real()) || !std::isfinite(values_(i).imag())) {
      throw SpaceError("non-finite value at vertex " + std::to_string(i));
    }
  }
}

TreeFunction TreeFunction::constant(std::shared_ptr<const Tree> tree, Complex c) {
  const auto n = static_cast<Eigen::Index>(tree->size());
  return TreeFunction(std::move(tree), Eigen::VectorXcd::Constant(n, c), "constant");
}

TreeFunction TreeFunction::radial(std::shared_ptr<const Tree> tree, Complex at_root,
                                  const std::function<Complex(std::size_t)>& profile,
                                  std::string provenance) {
  const Tree& t = *tree;
  std::vector<Complex> by_depth(t.depth_bound() + 1, at_root);
  for (std::size_t d = 1; d <= t.depth_bound(); ++d) by_depth[d] = profile(d);
  Eigen::VectorXcd values(static_cast<Eigen::Index>(t.size()));
  for (std::size_t v = 0; v < t.size(); ++v) {
    values(static_cast<Eigen::Index>(v)) = by_depth[t.depths()[v]];
  }
  return TreeFunction(std::move(tree), std::move(values), std::move(provenance));
}

TreeFunction TreeFunction::with_provenance(std::string provenance) const {
  TreeFunction copy = *this;
  copy.provenance_ = std::move(provenance);
  return copy;
}

namespace {

void require_same_tree(const TreeFunction& f, const TreeFunction& g) {
  if (f.tree_ptr() != g.tree_ptr() && !(f.tree() == g.tree())) {
    throw SpaceError("functions live on different trees");
  }
}

}  // namespace

TreeFunction operator+(const TreeFunction& f, const TreeFunction& g) {
  require_same_tree(f, g);
  return TreeFunction(f.tree_ptr(), f.values() + g.values());
}

TreeFunction operator-(const TreeFunction& f, const TreeFunction& g) {
  require_same_tree(f, g);
  return TreeFunction(f.tree_ptr(), f.values() - g.values());
}

TreeFunction operator*(Complex c, const TreeFunction& f) {
  return TreeFunction(f.tree_ptr(), c * f.values());
}

TreeFunction operator*(const TreeFunction& psi, const TreeFunction& f) {
  require_same_tree(psi, f);
  return TreeFunction(f.tree_ptr(), psi.values().cwiseProduct(f.values()));
}

double DepthProfile::at(std::size_t depth) const {
  if (depth < first_depth || depth > last_depth() || empty()) {
    throw std::out_of_range("depth " + std::to_string(depth) + " outside profile");
  }
  return values(static_cast<Eigen::Index>(depth - first_depth));
}

void require_table_covers(const Tree& tree, const WeightTable& table) {
  if (tree.depth_bound() > table.max_n()) {
    throw SpaceError("weight table covers depth " + std::to_string(table.max_n()) +
                     " but the tree reaches depth " + std::to_string(tree.depth_bound()));
  }
}

double derivative(const TreeFunction& f, VertexId v) {
  const auto parent = f.tree().parent(v);
  if (!parent) throw SpaceError("the derivative is not defined at the root");
  return std::abs(f(v) - f(*parent));
}

Eigen::VectorXd derivative_vector(const TreeFunction& f) {
  const Tree& t = f.tree();
  const auto parents = t.parent_table();
  Eigen::VectorXd d(static_cast<Eigen::Index>(t.size()));
  d(0) = 0.0;
  for (std::size_t v = 1; v < t.size(); ++v) {
    d(static_cast<Eigen::Index>(v)) = std::abs(f(static_cast<VertexId>(v)) - f(parents[v]));
  }
  return d;
}

namespace {

struct WeightedSup {
  DepthProfile per_depth;
  VertexId argmax = kRoot;
  double max = 0.0;
};

WeightedSup weighted_derivative_sup(const TreeFunction& f, const WeightTable& table) {
  const Tree& t = f.tree();
  require_table_covers(t, table);
  WeightedSup out;
  out.per_depth.first_depth = 1;
  out.per_depth.values = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(t.depth_bound()));
  const auto parents = t.parent_table();
  const auto depths = t.depths();
  double best = -1.0;
  for (std::size_t v = 1; v < t.size(); ++v) {
    const std::size_t d = depths[v];
    const double w = table.mu(d) * std::abs(f(static_cast<VertexId>(v)) - f(parents[v]));
    double& slot = out.per_depth.values(static_cast<Eigen::Index>(d - 1));
    slot = std::max(slot, w);
    if (w > best) {
      best = w;
      out.argmax = static_cast<VertexId>(v);
    }
  }
  out.max = std::max(best, 0.0);
  return out;
}

bool decays_in_window(const DepthProfile& profile, const LittleSpaceOptions& options) {
  if (profile.empty()) return true;
  const double peak = profile.values.maxCoeff();
  const double bar = options.threshold * peak;
  const Eigen::Index n = profile.values.size();
  const Eigen::Index w = std::min<Eigen::Index>(static_cast<Eigen::Index>(options.window), n);
  for (Eigen::Index i = n - w; i < n; ++i) {
    if (profile.values(i) > bar) return false;
    if (i > n - w && profile.values(i) > profile.values(i - 1)) return false;
  }
  return true;
}

}  // namespace

NormReport norm_k(const TreeFunction& f, const WeightTable& table,
                  const LittleSpaceOptions& little) {
  WeightedSup sup = weighted_derivative_sup(f, table);
  NormReport report;
  report.k = table.k();
  report.value = std::abs(f(kRoot)) + sup.max;
  report.argmax = sup.argmax;
  report.little_flag = decays_in_window(sup.per_depth, little);
  report.per_depth_sup = std::move(sup.per_depth);
  return report;
}

double norm_value(const TreeFunction& f, const WeightTable& table) {
  return std::abs(f(kRoot)) + weighted_derivative_sup(f, table).max;
}

Eigen::VectorXd depth_truncated_norms(const TreeFunction& f, const WeightTable& table) {
  const WeightedSup sup = weighted_derivative_sup(f, table);
  const std::size_t depth = f.tree().depth_bound();
  Eigen::VectorXd out(static_cast<Eigen::Index>(depth + 1));
  double running = 0.0;
  out(0) = std::abs(f(kRoot));
  for (std::size_t d = 1; d <= depth; ++d) {
    running = std::max(running, sup.per_depth.at(d));
    out(static_cast<Eigen::Index>(d)) = std::abs(f(kRoot)) + running;
  }
  return out;
}

GrowthSlack growth_bound_check(const TreeFunction& f, const WeightTable& table) {
  const Eigen::VectorXd truncated = depth_truncated_norms(f, table);
  const Tree& t = f.tree();
  const unsigned k = table.k();
  GrowthSlack out{std::numeric_limits<double>::infinity(), kRoot};
  for (std::size_t v = 1; v < t.size(); ++v) {
    const std::size_t d = t.depths()[v];
    const double slack = table.ell(k, d) * truncated(static_cast<Eigen::Index>(d)) -
                         std::abs(f(static_cast<VertexId>(v)));
    if (slack < out.worst) out = {slack, static_cast<VertexId>(v)};
  }
  if (t.size() == 1) out.worst = 0.0;
  return out;
}

LittleSpaceProfile little_space_profile(const TreeFunction& f, const WeightTable& table,
                                        const LittleSpaceOptions& options) {
  WeightedSup sup = weighted_derivative_sup(f, table);
  LittleSpaceProfile out;
  out.decay_flag = decays_in_window(sup.per_depth, options);
  out.per_depth_sup = std::move(sup.per_depth);
  return out;
}

DepthProfile decay_ratio_check(const TreeFunction& f, const WeightTable& table) {
  const Tree& t = f.tree();
  require_table_covers(t, table);
  DepthProfile out;
  out.first_depth = 1;
  out.values = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(t.depth_bound()));
  for (std::size_t v = 1; v < t.size(); ++v) {
    const std::size_t d = t.depths()[v];
    double& slot = out.values(static_cast<Eigen::Index>(d - 1));
    slot = std::max(slot, std::abs(f(static_cast<VertexId>(v))) / table.ell(table.k(), d));
  }
  return out;
}

TreeFunction truncate_K(const TreeFunction& f, std::size_t n) {
  const Tree& t = f.tree();
  if (n > t.depth_bound()) {
    throw SpaceError("truncation depth " + std::to_string(n) + " exceeds tree depth " +
                     std::to_string(t.depth_bound()));
  }
  Eigen::VectorXcd values = f.values();
  // Parents precede children, so deeper vertices copy an already-frozen value.
  for (std::size_t v = 1; v < t.size(); ++v) {
    if (t.depths()[v] > n) {
      values(static_cast<Eigen::Index>(v)) = values(static_cast<Eigen::Index>(t.parent_table()[v]));
    }
  }
  return TreeFunction(f.tree_ptr(), std::move(values), "K_" + std::to_string(n));
}

double chi_decomposition_check(std::shared_ptr<const Tree> tree, VertexId v) {
  if (tree->is_leaf(v)) {
    throw SpaceError("vertex " + std::to_string(v) + " has no children in the truncation");
  }
  TreeFunction rhs = catalog::sector_indicator(tree, v);
  for (VertexId w : tree->children(v)) rhs = rhs - catalog::sector_indicator(tree, w);
  const TreeFunction lhs = catalog::chi(tree, v);
  return (lhs.values() - rhs.values()).cwiseAbs().maxCoeff();
}

double path_sum_check(const Tree& tree, const WeightTable& table, VertexId w, VertexId v) {
  const std::size_t dw = tree.depth(w);
  if (dw < 1) throw SpaceError("path sums start below the root");
  if (!is_descendant(tree, v, w)) {
    throw SpaceError("vertex " + std::to_string(v) + " is not a descendant of " +
                     std::to_string(w));
  }
  require_table_covers(tree, table);
  // ell_k(|v|) - ell_k(|w|) telescopes into per-step increments; summing
  // (increment - 1/mu_k) per step keeps each positive term at full precision.
  double slack = 0.0;
  for (std::size_t d = dw + 1; d <= tree.depth(v); ++d) {
    slack += ell_increment(table.k(), d) - 1.0 / table.mu(d);
  }
  return slack;
}

Complex weak_pairing(const TreeFunction& f, const Eigen::VectorXcd& weights,
                     const WeightTable& table) {
  const Tree& t = f.tree();
  require_table_covers(t, table);
  if (static_cast<std::size_t>(weights.size()) != t.size()) {
    throw SpaceError("pairing weights must cover every vertex");
  }
  const Eigen::VectorXd df = derivative_vector(f);
  Complex sum = 0.0;
  for (std::size_t v = 1; v < t.size(); ++v) {
    const auto i = static_cast<Eigen::Index>(v);
    sum += weights(i) * table.mu(t.depths()[v]) * df(i);
  }
  return sum;
}

}  // namespace treelip
