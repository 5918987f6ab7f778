#pragma once

#include "treelip/logweights.hpp"
#include "treelip/tree.hpp"

#include <Eigen/Core>

#include <complex>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>

namespace treelip {

using Complex = std::complex<double>;

class SpaceError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Complex-valued function on the vertices of a tree, materialized at every
/// vertex. Values are finite and immutable once constructed.
class TreeFunction {
public:
  TreeFunction(std::shared_ptr<const Tree> tree, Eigen::VectorXcd values,
               std::string provenance = "explicit");

  static TreeFunction constant(std::shared_ptr<const Tree> tree, Complex c);
  static TreeFunction zero(std::shared_ptr<const Tree> tree) { return constant(std::move(tree), 0.0); }
  /// Root gets `at_root`, every vertex of depth d >= 1 gets profile(d).
  static TreeFunction radial(std::shared_ptr<const Tree> tree, Complex at_root,
                             const std::function<Complex(std::size_t)>& profile,
                             std::string provenance = "radial-profile");

  const Tree& tree() const { return *tree_; }
  const std::shared_ptr<const Tree>& tree_ptr() const { return tree_; }
  const Eigen::VectorXcd& values() const { return values_; }
  Complex operator()(VertexId v) const { return values_(static_cast<Eigen::Index>(v)); }
  const std::string& provenance() const { return provenance_; }

  TreeFunction with_provenance(std::string provenance) const;

private:
  std::shared_ptr<const Tree> tree_;
  Eigen::VectorXcd values_;
  std::string provenance_;
};

TreeFunction operator+(const TreeFunction& f, const TreeFunction& g);
TreeFunction operator-(const TreeFunction& f, const TreeFunction& g);
TreeFunction operator*(Complex c, const TreeFunction& f);
/// Pointwise product, i.e. the multiplication operator with symbol `psi`.
TreeFunction operator*(const TreeFunction& psi, const TreeFunction& f);

/// Depth-indexed real sequence; values(i) belongs to depth first_depth + i.
struct DepthProfile {
  std::size_t first_depth = 1;
  Eigen::VectorXd values;

  std::size_t size() const { return static_cast<std::size_t>(values.size()); }
  bool empty() const { return values.size() == 0; }
  std::size_t last_depth() const { return first_depth + size() - 1; }
  double at(std::size_t depth) const;
};

struct LittleSpaceOptions {
  std::size_t window = 5;
  double threshold = 1e-3;  // relative to the profile's peak
};

struct NormReport {
  unsigned k = 1;
  double value = 0.0;
  VertexId argmax = kRoot;
  DepthProfile per_depth_sup;  // d -> sup_{|v|=d} mu_k(d) Df(v), d >= 1
  bool little_flag = false;
};

struct LittleSpaceProfile {
  DepthProfile per_depth_sup;
  /// Consistent with membership in the little space at this truncation depth;
  /// never a proof of membership.
  bool decay_flag = false;
};

struct GrowthSlack {
  double worst = 0.0;
  VertexId at = kRoot;
};

/// Df(v) = |f(v) - f(v⁻)| for v != o.
double derivative(const TreeFunction& f, VertexId v);
/// Df at every vertex; the root entry is 0.
Eigen::VectorXd derivative_vector(const TreeFunction& f);

/// Truncated norm |f(o)| + sup_{1<=|v|<=N} mu_k(|v|) Df(v); k is taken from the table.
NormReport norm_k(const TreeFunction& f, const WeightTable& table,
                  const LittleSpaceOptions& little = {});
double norm_value(const TreeFunction& f, const WeightTable& table);

/// d -> ||f||_{k, <=d}, the norm restricted to vertices of depth at most d (d = 0..N).
Eigen::VectorXd depth_truncated_norms(const TreeFunction& f, const WeightTable& table);

/// min over v in T* of ell_k(|v|) ||f||_{k,<=|v|} - |f(v)|.
GrowthSlack growth_bound_check(const TreeFunction& f, const WeightTable& table);

LittleSpaceProfile little_space_profile(const TreeFunction& f, const WeightTable& table,
                                        const LittleSpaceOptions& options = {});

/// d -> max_{|v|=d} |f(v)| / ell_k(d), d >= 1.
DepthProfile decay_ratio_check(const TreeFunction& f, const WeightTable& table);

/// K_n f: keeps values up to depth n and freezes deeper vertices at their depth-n ancestor.
TreeFunction truncate_K(const TreeFunction& f, std::size_t n);

/// max |chi_v - (p_v - sum_{w child of v} p_w)| over the tree; exactly 0.
double chi_decomposition_check(std::shared_ptr<const Tree> tree, VertexId v);

/// ell_k(|v|) - ell_k(|w|) - sum over the path from w (exclusive) to v (inclusive)
/// of 1 / mu_k(|u|). Requires |w| >= 1 and v in the sector of w.
double path_sum_check(const Tree& tree, const WeightTable& table, VertexId w, VertexId v);

/// sum_{v != o} weights(v) mu_k(|v|) Df(v).
Complex weak_pairing(const TreeFunction& f, const Eigen::VectorXcd& weights,
                     const WeightTable& table);

void require_table_covers(const Tree& tree, const WeightTable& table);

}  // namespace treelip
