#pragma once

#include "treelip/funcspace.hpp"

#include <optional>
#include <string_view>

/// Test functions used to probe norms and multiplication operators. Every
/// entry is evaluated exactly on the truncation; k comes from the weight table.
namespace treelip::catalog {

/// Indicator of the single vertex v.
TreeFunction chi(std::shared_ptr<const Tree> tree, VertexId v);

/// p_v: indicator of the sector S_v.
TreeFunction sector_indicator(std::shared_ptr<const Tree> tree, VertexId v);

/// 0 at the root, ell_k(|v|) elsewhere.
TreeFunction ellk_profile(std::shared_ptr<const Tree> tree, const WeightTable& table);

/// f_p: 0 at the root, ell_k(|v|)^p elsewhere; p in [0.05, 0.95].
TreeFunction power_profile(std::shared_ptr<const Tree> tree, const WeightTable& table, double p);

/// f_w = p_w / mu_k(|w|), |w| >= 1. Norm exactly 1.
TreeFunction normalized_sector(std::shared_ptr<const Tree> tree, const WeightTable& table,
                               VertexId w);

/// g_w: 0 at o, ell_k(|v|)/mu_k(|w|) for 1 <= |v| < |w|, ell_k(|w|)/mu_k(|w|) beyond.
/// Requires |w| >= 2.
TreeFunction plateau_profile(std::shared_ptr<const Tree> tree, const WeightTable& table,
                             VertexId w);

/// chi_v / mu_k(|v|) for v != o.
TreeFunction point_mass(std::shared_ptr<const Tree> tree, const WeightTable& table, VertexId v);

/// chi_v / mu_k(|v| + 1), the probe that pins |psi(v)| for isometries (v != o).
TreeFunction isometry_probe(std::shared_ptr<const Tree> tree, const WeightTable& table,
                            VertexId v);

/// Indicator of the sphere {|v| = n} divided by mu_k(n), 1 <= n <= depth.
TreeFunction shell(std::shared_ptr<const Tree> tree, const WeightTable& table, std::size_t n);

/// Compactness probe with plateau depth m = |v_n| (3 <= m <= depth):
/// 0 for |v| <= 1, ell_k(|v|)^2 / ell_k(m) for 2 <= |v| < m - 1, ell_k(m) beyond.
TreeFunction compact_probe(std::shared_ptr<const Tree> tree, const WeightTable& table,
                           std::size_t m);

/// Essential-norm probe h_n with plateau depth m = |v_n| (2 <= m <= depth), p in (0, 1):
/// 0 at o, ell_k(|v|+1)^(p+1) / ell_k(m)^p for 1 <= |v| < m, ell_k(m) beyond.
TreeFunction essential_probe(std::shared_ptr<const Tree> tree, const WeightTable& table,
                             std::size_t m, double p);

enum class Name {
  chi,
  sector,
  ellk,
  power,
  normalized_sector,
  plateau,
  point_mass,
  isometry_probe,
  shell,
  compact_probe,
  essential_probe,
};

struct Params {
  VertexId vertex = kRoot;
  std::size_t depth = 1;
  double p = 0.5;
};

std::optional<Name> parse_name(std::string_view text);
std::string_view to_string(Name name);

/// Dispatches to the constructors above.
TreeFunction make(Name name, const Params& params, std::shared_ptr<const Tree> tree,
                  const WeightTable& table);

}  // namespace treelip::catalog
