#include "treelip/tree.hpp"

#include <algorithm>
#include <random>

namespace treelip {

bool Sector::contains(VertexId v) const {
  return std::binary_search(members.begin(), members.end(), v);
}

Tree Tree::from_parents(std::span<const VertexId> parents, std::size_t capacity) {
  if (parents.empty()) throw TreeError("tree must contain a root");
  if (parents.size() > capacity) {
    throw CapacityError("tree has " + std::to_string(parents.size()) +
                        " vertices, capacity is " + std::to_string(capacity));
  }
  const std::size_t count = parents.size();

  Tree t;
  t.parent_.assign(parents.begin(), parents.end());
  t.parent_[0] = kRoot;
  t.depth_.assign(count, 0);
  for (std::size_t v = 1; v < count; ++v) {
    const VertexId p = t.parent_[v];
    if (p >= v) {
      throw TreeError("vertex " + std::to_string(v) + " has parent " +
                      std::to_string(p) + "; parent ids must be smaller");
    }
    t.depth_[v] = t.depth_[p] + 1;
    t.depth_bound_ = std::max(t.depth_bound_, t.depth_[v]);
  }

  // Children in CSR form; filling in id order keeps each child list sorted.
  t.child_offset_.assign(count + 1, 0);
  for (std::size_t v = 1; v < count; ++v) ++t.child_offset_[t.parent_[v] + 1];
  for (std::size_t v = 0; v < count; ++v) t.child_offset_[v + 1] += t.child_offset_[v];
  t.child_list_.resize(count - 1);
  {
    std::vector<std::size_t> cursor(t.child_offset_.begin(), t.child_offset_.end() - 1);
    for (std::size_t v = 1; v < count; ++v) {
      t.child_list_[cursor[t.parent_[v]]++] = static_cast<VertexId>(v);
    }
  }

  const std::size_t levels = t.depth_bound_ + 1;
  t.level_offset_.assign(levels + 1, 0);
  for (std::size_t v = 0; v < count; ++v) ++t.level_offset_[t.depth_[v] + 1];
  for (std::size_t d = 0; d < levels; ++d) t.level_offset_[d + 1] += t.level_offset_[d];
  t.level_list_.resize(count);
  {
    std::vector<std::size_t> cursor(t.level_offset_.begin(), t.level_offset_.end() - 1);
    for (std::size_t v = 0; v < count; ++v) {
      t.level_list_[cursor[t.depth_[v]]++] = static_cast<VertexId>(v);
    }
  }

  t.complete_ = true;
  for (std::size_t v = 0; v < count; ++v) {
    if (t.depth_[v] < t.depth_bound_ && t.child_offset_[v + 1] == t.child_offset_[v]) {
      t.complete_ = false;
      break;
    }
  }
  return t;
}

void Tree::check(VertexId v) const {
  if (!contains(v)) {
    throw TreeError("unknown vertex id " + std::to_string(v) + " (tree has " +
                    std::to_string(size()) + " vertices)");
  }
}

Vertex Tree::vertex(VertexId v) const {
  check(v);
  return Vertex{v, parent(v), depth_[v]};
}

std::optional<VertexId> Tree::parent(VertexId v) const {
  check(v);
  if (v == kRoot) return std::nullopt;
  return parent_[v];
}

std::size_t Tree::depth(VertexId v) const {
  check(v);
  return depth_[v];
}

std::span<const VertexId> Tree::children(VertexId v) const {
  check(v);
  return std::span<const VertexId>(child_list_).subspan(
      child_offset_[v], child_offset_[v + 1] - child_offset_[v]);
}

std::span<const VertexId> Tree::level(std::size_t d) const {
  if (d > depth_bound_) return {};
  return std::span<const VertexId>(level_list_).subspan(
      level_offset_[d], level_offset_[d + 1] - level_offset_[d]);
}

VertexId Tree::ancestor_at_depth(VertexId v, std::size_t d) const {
  check(v);
  if (d > depth_[v]) {
    throw TreeError("vertex " + std::to_string(v) + " has no ancestor at depth " +
                    std::to_string(d));
  }
  while (depth_[v] > d) v = parent_[v];
  return v;
}

Tree generate_regular(std::size_t branching, std::size_t depth, std::size_t capacity) {
  if (branching < 1) throw TreeError("branching must be at least 1");
  if (depth < 1) throw TreeError("depth must be at least 1");

  // Vertex count without overflow: stop as soon as the running sum passes capacity.
  std::size_t total = 1;
  std::size_t layer = 1;
  for (std::size_t d = 1; d <= depth; ++d) {
    if (layer > capacity / branching) {
      throw CapacityError("regular tree q=" + std::to_string(branching) + ", depth=" +
                          std::to_string(depth) + " exceeds capacity " +
                          std::to_string(capacity));
    }
    layer *= branching;
    total += layer;
    if (total > capacity) {
      throw CapacityError("regular tree q=" + std::to_string(branching) + ", depth=" +
                          std::to_string(depth) + " exceeds capacity " +
                          std::to_string(capacity));
    }
  }

  std::vector<VertexId> parents;
  parents.reserve(total);
  parents.push_back(kRoot);
  // Breadth-first: the children of vertex p occupy a contiguous id range.
  std::size_t layer_begin = 0;
  std::size_t layer_end = 1;
  for (std::size_t d = 1; d <= depth; ++d) {
    for (std::size_t p = layer_begin; p < layer_end; ++p) {
      for (std::size_t c = 0; c < branching; ++c) parents.push_back(static_cast<VertexId>(p));
    }
    layer_begin = layer_end;
    layer_end = parents.size();
  }
  return Tree::from_parents(parents, capacity);
}

Tree generate_random(std::uint64_t seed, std::size_t max_children, std::size_t depth,
                     std::size_t capacity) {
  if (max_children < 1) throw TreeError("max_children must be at least 1");
  if (depth < 1) throw TreeError("depth must be at least 1");

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> fanout(1, max_children);

  std::vector<VertexId> parents{kRoot};
  std::size_t layer_begin = 0;
  std::size_t layer_end = 1;
  for (std::size_t d = 1; d <= depth; ++d) {
    for (std::size_t p = layer_begin; p < layer_end; ++p) {
      const std::size_t n = fanout(rng);
      if (parents.size() + n > capacity) {
        throw CapacityError("random tree exceeds capacity " + std::to_string(capacity));
      }
      for (std::size_t c = 0; c < n; ++c) parents.push_back(static_cast<VertexId>(p));
    }
    layer_begin = layer_end;
    layer_end = parents.size();
  }
  return Tree::from_parents(parents, capacity);
}

Sector sector(const Tree& tree, VertexId v) {
  Sector s{v, {}};
  std::vector<VertexId> frontier{v};
  (void)tree.depth(v);
  while (!frontier.empty()) {
    const VertexId u = frontier.back();
    frontier.pop_back();
    s.members.push_back(u);
    for (VertexId c : tree.children(u)) frontier.push_back(c);
  }
  std::sort(s.members.begin(), s.members.end());
  return s;
}

std::vector<VertexId> path_to_root(const Tree& tree, VertexId v) {
  std::vector<VertexId> path;
  path.reserve(tree.depth(v) + 1);
  path.push_back(v);
  while (auto p = tree.parent(path.back())) path.push_back(*p);
  return path;
}

bool is_descendant(const Tree& tree, VertexId v, VertexId w) {
  const std::size_t dw = tree.depth(w);
  if (tree.depth(v) < dw) return false;
  return tree.ancestor_at_depth(v, dw) == w;
}

}  // namespace treelip
