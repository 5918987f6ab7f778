#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <stdexcept>

namespace treelip {

inline constexpr unsigned kDefaultMaxOrder = 8;

class WeightDomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Iterated logarithm chain: ell(0, x) = 1, ell(1, x) = 1 + ln x,
/// ell(j, x) = 1 + ln ell(j - 1, x). Requires x >= 1.
double ell(unsigned j, double x);

/// ell(j, n) - ell(j, n - 1) for integer n >= 2, evaluated through log1p so the
/// result keeps full relative precision when the two terms nearly cancel.
double ell_increment(unsigned j, std::size_t n);

/// d/dx ell(k, x) = 1 / (x * prod_{j<k} ell(j, x)).
double ell_derivative(unsigned k, double x);

/// alpha_k(n) = ell(k, n) / ell(k, n - 1), n >= 2.
double alpha(unsigned k, std::size_t n);
/// alpha_k(n) - 1 without the cancellation of forming alpha first.
double alpha_excess(unsigned k, std::size_t n);

/// phi_{k,n} = n prod_{j<k} ell(j, n) [ell(k, n) - ell(k, n - 1)] - 1, n >= 2.
double phi(unsigned k, std::size_t n);

/// gamma_{k,n} = alpha ln(alpha) / (alpha - 1) with alpha = alpha_k(n), n >= 2.
double gamma(unsigned k, std::size_t n);

/// |central difference of ell(k, .) at x with step h - ell_derivative(k, x)|.
double ell_derivative_residual(unsigned k, double x, double h);

/// Precomputed ell_j(n) for 0 <= j <= k and 1 <= n <= max_n, together with the
/// weights mu_k(n) = n prod_{j<k} ell_j(n) and mu_{k+1}(n) = mu_k(n) ell_k(n).
/// Depth 0 (the root) is never weighted, so the table starts at n = 1.
class WeightTable {
public:
  enum class Order { k, k_plus_one };

  WeightTable(unsigned k, std::size_t max_n, unsigned max_order = kDefaultMaxOrder);

  unsigned k() const { return k_; }
  std::size_t max_n() const { return max_n_; }

  double ell(unsigned j, std::size_t n) const;
  double mu(std::size_t n) const { return mu_(index(n)); }
  double mu_next(std::size_t n) const { return mu_next_(index(n)); }
  double mu(std::size_t n, Order order) const {
    return order == Order::k ? mu(n) : mu_next(n);
  }

  /// (k + 1) x max_n matrix; column n - 1 holds ell_0(n) ... ell_k(n).
  const Eigen::MatrixXd& ell_matrix() const { return ell_; }
  const Eigen::VectorXd& mu_vector() const { return mu_; }
  const Eigen::VectorXd& mu_next_vector() const { return mu_next_; }

private:
  Eigen::Index index(std::size_t n) const;

  unsigned k_;
  std::size_t max_n_;
  Eigen::MatrixXd ell_;
  Eigen::VectorXd mu_;
  Eigen::VectorXd mu_next_;
};

}  // namespace treelip
