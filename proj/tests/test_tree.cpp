#include <doctest.h>

#include "treelip/tree.hpp"

#include <numeric>
#include <vector>

using namespace treelip;

namespace {

std::size_t geometric(std::size_t q, std::size_t n) {
  std::size_t total = 0, term = 1;
  for (std::size_t d = 0; d <= n; ++d, term *= q) total += term;
  return total;
}

void check_invariants(const Tree& t) {
  std::size_t children = 0;
  for (VertexId v = 0; v < t.size(); ++v) {
    children += t.child_count(v);
    if (v == kRoot) {
      CHECK_FALSE(t.parent(v).has_value());
      CHECK(t.depth(v) == 0);
    } else {
      REQUIRE(t.parent(v).has_value());
      CHECK(*t.parent(v) < v);
      CHECK(t.depth(v) == t.depth(*t.parent(v)) + 1);
    }
  }
  CHECK(children == t.size() - 1);
}

}  // namespace

TEST_CASE("regular generator sizes") {
  const Tree ray = generate_regular(1, 5);
  CHECK(ray.size() == 6);
  for (VertexId v = 0; v < 6; ++v) CHECK(ray.depth(v) == v);

  CHECK(generate_regular(2, 3).size() == 15);
  CHECK(generate_regular(3, 4).size() == geometric(3, 4));
  CHECK(generate_regular(3, 4).size() == 121);

  const Tree t = generate_regular(2, 6);
  CHECK(t.complete());
  CHECK(t.depth_bound() == 6);
  check_invariants(t);
  for (VertexId v = 0; v < t.size(); ++v) {
    CHECK(t.child_count(v) == (t.depth(v) < 6 ? 2u : 0u));
  }
}

TEST_CASE("regular generator errors") {
  CHECK_THROWS_AS(generate_regular(0, 3), TreeError);
  CHECK_THROWS_AS(generate_regular(2, 0), TreeError);
  CHECK_THROWS_AS(generate_regular(2, 10, 100), CapacityError);
  // Overflowing geometric sums must be reported, not wrapped.
  CHECK_THROWS_AS(generate_regular(1u << 20, 10), CapacityError);
}

TEST_CASE("random generator") {
  const Tree forced = generate_random(7, 1, 4);
  CHECK(forced == generate_regular(1, 4));

  const Tree a = generate_random(7, 3, 6);
  const Tree b = generate_random(7, 3, 6);
  CHECK(a == b);
  CHECK(a.complete());
  check_invariants(a);
  for (VertexId v = 0; v < a.size(); ++v) {
    if (a.depth(v) < 6) {
      CHECK(a.child_count(v) >= 1);
      CHECK(a.child_count(v) <= 3);
    } else {
      CHECK(a.is_leaf(v));
    }
  }

  const Tree c = generate_random(8, 3, 6);
  bool differs = a.size() != c.size();
  for (VertexId v = 0; !differs && v < a.size(); ++v) {
    differs = a.child_count(v) != c.child_count(v);
  }
  CHECK(differs);

  CHECK_THROWS_AS(generate_random(1, 0, 3), TreeError);
}

TEST_CASE("sectors and paths") {
  const Tree ray = generate_regular(1, 5);
  CHECK(sector(ray, kRoot).members.size() == 6);
  CHECK(sector(ray, 5).members == std::vector<VertexId>{5});

  const Tree t = generate_regular(2, 3);
  const VertexId v = t.level(1).front();
  const Sector s = sector(t, v);
  CHECK(s.members.size() == 7);
  CHECK(s.contains(v));
  CHECK_FALSE(s.contains(kRoot));
  CHECK(std::is_sorted(s.members.begin(), s.members.end()));
  for (VertexId m : s.members) CHECK(is_descendant(t, m, v));

  CHECK(path_to_root(t, kRoot) == std::vector<VertexId>{kRoot});
  CHECK(path_to_root(t, v) == std::vector<VertexId>{v, kRoot});
  const auto path = path_to_root(ray, 4);
  CHECK(path.size() == 5);
  for (std::size_t i = 1; i < path.size(); ++i) CHECK(ray.depth(path[i]) + 1 == ray.depth(path[i - 1]));

  CHECK_THROWS_AS((void)sector(t, 999), TreeError);
  CHECK_THROWS_AS((void)path_to_root(t, 999), TreeError);
}

TEST_CASE("sector antisymmetry and disjoint children") {
  const Tree t = generate_random(3, 3, 5);
  for (VertexId v = 0; v < t.size(); v += 3) {
    for (VertexId w = 0; w < t.size(); w += 5) {
      if (is_descendant(t, v, w) && is_descendant(t, w, v)) CHECK(v == w);
    }
  }
  std::vector<int> owner(t.size(), 0);
  for (VertexId v = 0; v < t.size(); ++v) {
    for (VertexId c : t.children(v)) ++owner[c];
  }
  CHECK(owner[0] == 0);
  for (std::size_t v = 1; v < t.size(); ++v) CHECK(owner[v] == 1);
}

TEST_CASE("levels and ancestors") {
  const Tree t = generate_regular(3, 3);
  std::size_t total = 0;
  for (std::size_t d = 0; d <= 3; ++d) {
    CHECK(t.level(d).size() == geometric(3, d) - (d ? geometric(3, d - 1) : 0));
    total += t.level(d).size();
  }
  CHECK(total == t.size());
  const VertexId leaf = t.level(3).back();
  CHECK(t.ancestor_at_depth(leaf, 3) == leaf);
  CHECK(t.ancestor_at_depth(leaf, 0) == kRoot);
  CHECK(t.ancestor_at_depth(leaf, 2) == *t.parent(leaf));
}

TEST_CASE("from_parents validation") {
  const std::vector<VertexId> good{0, 0, 0, 1};
  const Tree t = Tree::from_parents(good);
  CHECK(t.size() == 4);
  CHECK(t.depth_bound() == 2);
  CHECK_FALSE(t.complete());  // vertex 2 is childless above depth 2

  const std::vector<VertexId> forward{0, 2, 0};
  CHECK_THROWS_AS(Tree::from_parents(forward), TreeError);
  const std::vector<VertexId> self{0, 1};
  CHECK_THROWS_AS(Tree::from_parents(self), TreeError);
  CHECK_THROWS_AS(Tree::from_parents(std::vector<VertexId>{}), TreeError);
  CHECK_THROWS_AS(Tree::from_parents(good, 3), CapacityError);
}
