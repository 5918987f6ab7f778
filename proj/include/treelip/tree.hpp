#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace treelip {

using VertexId = std::uint32_t;

inline constexpr VertexId kRoot = 0;
inline constexpr std::size_t kDefaultVertexCapacity = 10'000'000;

class TreeError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Raised when a generator or loader would exceed the configured vertex limit.
class CapacityError : public TreeError {
public:
  using TreeError::TreeError;
};

struct Vertex {
  VertexId id;
  std::optional<VertexId> parent;
  std::size_t depth;
};

/// Set of vertices closed under the child relation, rooted at `root_vertex`.
/// Members are listed in increasing id order.
struct Sector {
  VertexId root_vertex;
  std::vector<VertexId> members;

  bool contains(VertexId v) const;
};

/// Depth-N truncation of an infinite rooted tree.
///
/// Vertex ids are dense and topologically ordered (parent id < child id), so a
/// single sweep in id order visits every parent before its children. The tree
/// is immutable after construction.
class Tree {
public:
  /// Builds a tree from a parent table; `parents[0]` is ignored (root), every
  /// other entry must reference a smaller id.
  static Tree from_parents(std::span<const VertexId> parents,
                           std::size_t capacity = kDefaultVertexCapacity);

  std::size_t size() const { return parent_.size(); }
  std::size_t depth_bound() const { return depth_bound_; }
  /// True when every vertex above the truncation depth has at least one child.
  bool complete() const { return complete_; }

  bool contains(VertexId v) const { return v < size(); }
  Vertex vertex(VertexId v) const;
  std::optional<VertexId> parent(VertexId v) const;
  std::size_t depth(VertexId v) const;
  std::span<const VertexId> children(VertexId v) const;
  std::size_t child_count(VertexId v) const { return children(v).size(); }
  bool is_leaf(VertexId v) const { return children(v).empty(); }

  /// Vertices of depth `d`, increasing id order.
  std::span<const VertexId> level(std::size_t d) const;

  /// The ancestor of `v` at depth `d` (requires d <= depth(v)).
  VertexId ancestor_at_depth(VertexId v, std::size_t d) const;

  /// Raw parent table; entry 0 holds kRoot as a placeholder.
  std::span<const VertexId> parent_table() const { return parent_; }
  std::span<const std::size_t> depths() const { return depth_; }

  bool operator==(const Tree& other) const { return parent_ == other.parent_; }

private:
  Tree() = default;
  void check(VertexId v) const;

  std::vector<VertexId> parent_;
  std::vector<std::size_t> depth_;
  std::vector<std::size_t> child_offset_;
  std::vector<VertexId> child_list_;
  std::vector<std::size_t> level_offset_;
  std::vector<VertexId> level_list_;
  std::size_t depth_bound_ = 0;
  bool complete_ = false;
};

Tree generate_regular(std::size_t branching, std::size_t depth,
                      std::size_t capacity = kDefaultVertexCapacity);

/// Each vertex above depth N receives a uniformly drawn number of children in
/// [1, max_children]. Deterministic for a fixed seed.
Tree generate_random(std::uint64_t seed, std::size_t max_children,
                     std::size_t depth,
                     std::size_t capacity = kDefaultVertexCapacity);

Sector sector(const Tree& tree, VertexId v);

/// [v, v⁻, ..., o]
std::vector<VertexId> path_to_root(const Tree& tree, VertexId v);

/// True when `v` lies in the sector of `w`.
bool is_descendant(const Tree& tree, VertexId v, VertexId w);

}  // namespace treelip
