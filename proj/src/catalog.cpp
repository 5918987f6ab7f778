#include "treelip/catalog.hpp"

#include <array>
#include <cmath>
#include <utility>

namespace treelip::catalog {

namespace {

void require_vertex(const Tree& tree, VertexId v) { (void)tree.depth(v); }

void require_depth(const Tree& tree, std::size_t lo, std::size_t m, const char* what) {
  if (m < lo || m > tree.depth_bound()) {
    throw SpaceError(std::string(what) + " needs depth in [" + std::to_string(lo) + ", " +
                     std::to_string(tree.depth_bound()) + "], got " + std::to_string(m));
  }
}

// mu_k evaluated off-table so probes one level below the truncation stay defined.
double weight_at(unsigned k, std::size_t n) {
  const double x = static_cast<double>(n);
  double w = x;
  for (unsigned j = 1; j < k; ++j) w *= ell(j, x);
  return w;
}

}  // namespace

TreeFunction chi(std::shared_ptr<const Tree> tree, VertexId v) {
  require_vertex(*tree, v);
  Eigen::VectorXcd values = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(tree->size()));
  values(static_cast<Eigen::Index>(v)) = 1.0;
  return TreeFunction(std::move(tree), std::move(values), "chi(" + std::to_string(v) + ")");
}

TreeFunction sector_indicator(std::shared_ptr<const Tree> tree, VertexId v) {
  require_vertex(*tree, v);
  Eigen::VectorXcd values = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(tree->size()));
  values(static_cast<Eigen::Index>(v)) = 1.0;
  for (std::size_t u = v + 1; u < tree->size(); ++u) {
    const auto parent = static_cast<Eigen::Index>(tree->parent_table()[u]);
    if (parent >= static_cast<Eigen::Index>(v) && values(parent) == Complex(1.0)) {
      values(static_cast<Eigen::Index>(u)) = 1.0;
    }
  }
  return TreeFunction(std::move(tree), std::move(values), "p(" + std::to_string(v) + ")");
}

TreeFunction ellk_profile(std::shared_ptr<const Tree> tree, const WeightTable& table) {
  require_table_covers(*tree, table);
  const unsigned k = table.k();
  return TreeFunction::radial(
      std::move(tree), 0.0, [&](std::size_t d) { return Complex(table.ell(k, d)); }, "ellk");
}

TreeFunction power_profile(std::shared_ptr<const Tree> tree, const WeightTable& table, double p) {
  if (!(p >= 0.05 && p <= 0.95)) throw SpaceError("f_p needs p in [0.05, 0.95]");
  require_table_covers(*tree, table);
  const unsigned k = table.k();
  return TreeFunction::radial(
      std::move(tree), 0.0,
      [&](std::size_t d) { return Complex(std::pow(table.ell(k, d), p)); },
      "f_p(" + std::to_string(p) + ")");
}

TreeFunction normalized_sector(std::shared_ptr<const Tree> tree, const WeightTable& table,
                               VertexId w) {
  require_table_covers(*tree, table);
  const std::size_t dw = tree->depth(w);
  if (dw < 1) throw SpaceError("f_w needs |w| >= 1");
  const double scale = 1.0 / table.mu(dw);
  TreeFunction p = sector_indicator(tree, w);
  return (Complex(scale) * p).with_provenance("f_w(" + std::to_string(w) + ")");
}

TreeFunction plateau_profile(std::shared_ptr<const Tree> tree, const WeightTable& table,
                             VertexId w) {
  require_table_covers(*tree, table);
  const std::size_t dw = tree->depth(w);
  if (dw < 2) throw SpaceError("g_w needs |w| >= 2");
  const unsigned k = table.k();
  const double mu_w = table.mu(dw);
  const double top = table.ell(k, dw) / mu_w;
  return TreeFunction::radial(
      std::move(tree), 0.0,
      [&](std::size_t d) { return Complex(d < dw ? table.ell(k, d) / mu_w : top); },
      "g_w(" + std::to_string(w) + ")");
}

TreeFunction point_mass(std::shared_ptr<const Tree> tree, const WeightTable& table, VertexId v) {
  require_table_covers(*tree, table);
  const std::size_t d = tree->depth(v);
  if (d < 1) throw SpaceError("point mass needs a non-root vertex");
  const double scale = 1.0 / table.mu(d);
  return (Complex(scale) * chi(tree, v)).with_provenance("chi(" + std::to_string(v) + ")/mu");
}

TreeFunction isometry_probe(std::shared_ptr<const Tree> tree, const WeightTable& table,
                            VertexId v) {
  const std::size_t d = tree->depth(v);
  if (d < 1) throw SpaceError("isometry probe needs a non-root vertex");
  const double scale = 1.0 / weight_at(table.k(), d + 1);
  return (Complex(scale) * chi(tree, v)).with_provenance("f_v(" + std::to_string(v) + ")");
}

TreeFunction shell(std::shared_ptr<const Tree> tree, const WeightTable& table, std::size_t n) {
  require_table_covers(*tree, table);
  require_depth(*tree, 1, n, "shell");
  const double scale = 1.0 / table.mu(n);
  return TreeFunction::radial(
      std::move(tree), 0.0, [&](std::size_t d) { return Complex(d == n ? scale : 0.0); },
      "shell(" + std::to_string(n) + ")");
}

TreeFunction compact_probe(std::shared_ptr<const Tree> tree, const WeightTable& table,
                           std::size_t m) {
  require_table_covers(*tree, table);
  require_depth(*tree, 3, m, "g_n");
  const unsigned k = table.k();
  const double top = table.ell(k, m);
  return TreeFunction::radial(
      std::move(tree), 0.0,
      [&](std::size_t d) {
        if (d <= 1) return Complex(0.0);
        if (d + 1 < m) return Complex(table.ell(k, d) * table.ell(k, d) / top);
        return Complex(top);
      },
      "g_n(" + std::to_string(m) + ")");
}

TreeFunction essential_probe(std::shared_ptr<const Tree> tree, const WeightTable& table,
                             std::size_t m, double p) {
  if (!(p > 0.0 && p < 1.0)) throw SpaceError("h_n needs p in (0, 1)");
  require_table_covers(*tree, table);
  require_depth(*tree, 2, m, "h_n");
  const unsigned k = table.k();
  const double top = table.ell(k, m);
  const double scale = std::pow(top, p);
  return TreeFunction::radial(
      std::move(tree), 0.0,
      [&](std::size_t d) {
        if (d >= m) return Complex(top);
        // d + 1 <= m lies inside the table.
        return Complex(std::pow(table.ell(k, d + 1), p + 1.0) / scale);
      },
      "h_n(" + std::to_string(m) + ")");
}

namespace {

constexpr std::array<std::pair<Name, std::string_view>, 11> kNames{{
    {Name::chi, "chi"},
    {Name::sector, "p"},
    {Name::ellk, "ellk"},
    {Name::power, "f_p"},
    {Name::normalized_sector, "f_w"},
    {Name::plateau, "g_w"},
    {Name::point_mass, "point_mass"},
    {Name::isometry_probe, "f_v"},
    {Name::shell, "shell"},
    {Name::compact_probe, "g_n"},
    {Name::essential_probe, "h_n"},
}};

}  // namespace

std::optional<Name> parse_name(std::string_view text) {
  for (const auto& [name, label] : kNames) {
    if (label == text) return name;
  }
  return std::nullopt;
}

std::string_view to_string(Name name) {
  for (const auto& [n, label] : kNames) {
    if (n == name) return label;
  }
  return "?";
}

TreeFunction make(Name name, const Params& params, std::shared_ptr<const Tree> tree,
                  const WeightTable& table) {
  switch (name) {
    case Name::chi: return chi(std::move(tree), params.vertex);
    case Name::sector: return sector_indicator(std::move(tree), params.vertex);
    case Name::ellk: return ellk_profile(std::move(tree), table);
    case Name::power: return power_profile(std::move(tree), table, params.p);
    case Name::normalized_sector: return normalized_sector(std::move(tree), table, params.vertex);
    case Name::plateau: return plateau_profile(std::move(tree), table, params.vertex);
    case Name::point_mass: return point_mass(std::move(tree), table, params.vertex);
    case Name::isometry_probe: return isometry_probe(std::move(tree), table, params.vertex);
    case Name::shell: return shell(std::move(tree), table, params.depth);
    case Name::compact_probe: return compact_probe(std::move(tree), table, params.depth);
    case Name::essential_probe:
      return essential_probe(std::move(tree), table, params.depth, params.p);
  }
  throw SpaceError("unknown catalog entry");
}

}  // namespace treelip::catalog
