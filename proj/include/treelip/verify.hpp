#pragma once

#include "treelip/funcspace.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace treelip {

struct CheckResult {
  std::string name;
  std::string range;
  bool pass = false;
  double worst = 0.0;  // largest violation (or smallest slack) seen, check-specific
  std::string detail;
};

struct WeightSweep {
  unsigned max_k = 6;
  std::size_t max_n = 1'000'000;      // recursion, alpha, mu
  std::size_t phi_max_n = 100'000;    // phi, gamma
  unsigned derivative_max_k = 4;
  unsigned threads = 0;               // 0: hardware concurrency
};

/// Recursion, alpha, phi, gamma, mu and derivative checks of the weight chain.
std::vector<CheckResult> verify_weight_lemmas(const WeightSweep& sweep);

/// Worker count: TREELIP_THREADS if set and positive, else hardware concurrency.
unsigned thread_budget(unsigned requested = 0);

struct SpaceSweep {
  std::uint64_t seed = 1;
  std::size_t trees = 8;
  std::size_t functions_per_tree = 25;
  std::size_t max_depth = 10;
  std::size_t max_children = 3;
  unsigned k = 1;
};

/// Norm axioms, growth bound, K_n properties, chi decomposition and the
/// product-rule inequalities on seeded random trees and functions.
std::vector<CheckResult> verify_space(const SpaceSweep& sweep);

/// Smallest relative slack of
///   mu_k D(psi f)(v) <= mu_{k+1} Dpsi(v) ||f||_{k,<=|v|} + sup|psi| mu_k Df(v)
/// over v != o. Negative means violated.
double product_bound_slack(const TreeFunction& psi, const TreeFunction& f,
                           const WeightTable& table);

/// Random complex function with entries in the unit square, deterministic in `seed`.
TreeFunction random_function(std::shared_ptr<const Tree> tree, std::uint64_t seed);

}  // namespace treelip
