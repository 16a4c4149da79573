#pragma once

#include "yamabe/polycos.hpp"
#include "yamabe/rational.hpp"

#include <optional>
#include <vector>

namespace yamabe {

inline constexpr int kDefaultOrder = 40;
inline constexpr int kMaxSupportedOrder = 200;

/**
 * Truncated conformal factor u = 1 + sum_{k=0}^{K} u_k(cos theta) / r^(n+k)
 * solving Delta_b u = n(n-2)/4 (u^((n+2)/(n-2)) - u) order by order.
 *
 * coefficients[0] = beta + gamma*x, coefficients[1] = 0, and deg u_k <= k-1.
 */
struct SeriesSolution {
  int n = 3;
  Rational beta = 0;
  Rational gamma = 0;
  std::vector<PolyCos> coefficients;

  int order() const { return static_cast<int>(coefficients.size()) - 1; }
  const PolyCos& u0() const { return coefficients.front(); }
};

/// Both sides of the order-k coefficient identity
///   (k+1)(k+n) u_k + k(k+n-2) u_{k-2} + A_n[u_{k-2}] = n(n-2)/4 (v_k - u_k).
struct OrderReport {
  int k = 0;
  PolyCos lhs;
  PolyCos rhs;
  bool exact_match = false;
};

/// Generalized binomial coefficient ((n+2)/(n-2) choose p), exact.
Rational gen_binomial(int n, int p);

/**
 * Lazily filled table of [S^p]_l, the coefficient of t^l in S(t)^p with
 * S(t) = sum_k u_k t^k. Entry (p, l) only reads u_0..u_l, so it can be
 * queried while the coefficient list is still growing.
 */
class PowerCache {
 public:
  explicit PowerCache(const std::vector<PolyCos>& coefficients) : coeffs_(&coefficients) {}

  const PolyCos& get(int p, int l);

 private:
  const std::vector<PolyCos>* coeffs_;
  std::vector<std::vector<std::optional<PolyCos>>> table_;  // [p-2][l]
};

/// P_k = sum_{p>=2, (p-1)n<=k} binom(p) [S^p]_{k-(p-1)n}.
/// Reads u_0..u_{k-n}; throws std::out_of_range when they are missing.
PolyCos compute_Pk(const SeriesSolution& sol, int k);
PolyCos compute_Pk(const SeriesSolution& sol, int k, PowerCache& cache);

/// u_k isolated from the order-k identity:
///   k(k+n+1) u_k = n(n-2)/4 P_k - k(k+n-2) u_{k-2} - A_n[u_{k-2}].
/// Requires u_0..u_{k-1} and k >= 1.
PolyCos solve_coefficient(const SeriesSolution& sol, int k);

/// Runs the recursion from u_0 = beta + gamma cos(theta) up to order K.
/// Throws std::invalid_argument for n < 3 or K < 0 and std::length_error
/// beyond kMaxSupportedOrder.
SeriesSolution solve_up_to(int n, const Rational& beta, const Rational& gamma, int K);

/// v_0..v_{k_max} of u^((n+2)/(n-2)) = 1 + sum_l v_l / r^(n+l), computed by
/// the power-series exponent recurrence (1+f) G' = a f' G. Shares no code
/// with compute_Pk.
std::vector<PolyCos> binomial_series(const SeriesSolution& sol, int k_max);

OrderReport verify_order(const SeriesSolution& sol, int k);
/// verify_order for every k in 0..K, sharing one binomial-series expansion.
std::vector<OrderReport> verify_all(const SeriesSolution& sol);

/// 1 + sum_k u_k(cos theta) r^-(n+k), double precision. Requires r > 0.
double eval_u(const SeriesSolution& sol, double r, double theta);

}  // namespace yamabe
