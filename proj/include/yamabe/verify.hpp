#pragma once

#include "yamabe/polycos.hpp"
#include "yamabe/rational.hpp"
#include "yamabe/series.hpp"

#include <string>
#include <utility>
#include <vector>

namespace yamabe {

/// Outcome of one inequality sweep. pass holds iff every checked instance
/// satisfies its inequality; comparisons are exact wherever the quantities
/// are rational.
struct BoundReport {
  std::string lemma;
  std::string range;
  double worst_ratio = 0.0;  // max lhs/rhs over the sweep
  bool pass = true;
  std::vector<std::pair<std::string, double>> diagnostics;
  std::vector<double> sequence;  // per-index values for reports that carry one
  std::string note;

  double diagnostic(const std::string& key) const;
};

/// Rational under-approximation of pi^2 used on the favourable side of every
/// pi^2 comparison.
Rational pi_squared_lower();

/// ((k+1)/(k-(p-1)n+p))^2 <= n^2 for k <= k_max, 3 <= n <= n_max and every
/// p >= 2 with (p-1)n <= k; integer arithmetic.
BoundReport lemma_a1_check(int k_max, int n_max);

/**
 * c_hat = max |binom((n+2)/(n-2), p)| / e^p over 0 <= p <= p_max and
 * 3 <= n <= n_max. Passes when c_hat is finite and the per-p maxima are
 * non-increasing from some reported p0 < p_max on.
 */
BoundReport lemma_a2_check(int p_max, int n_max);

/// sum_{r=0}^{q} 1/((r+1)^2 (q-r+1)^2), exact, through the partial-fraction
/// form 2 H2(q+1)/(q+2)^2 + 4 H1(q+1)/(q+2)^3.
Rational s2_closed_form(int q);

/// s2 (q+2)^2 <= 9.8696 for every 0 <= q <= q_max, exact.
BoundReport lemma_a3_check(int q_max);

inline constexpr long long kMaxCompositions = 1000000;

/// S_p(l) = sum over compositions l_1 + ... + l_p = l of prod 1/(l_i+1)^2, by
/// enumeration. Throws std::length_error beyond kMaxCompositions terms.
Rational sp_enumerate(int p, int l);

/// S_p(l) (l+p)^2 <= 9.8696^(p-1), exact.
BoundReport sp_convolution_check(int p, int l);

/// sp_convolution_check over 2 <= p <= p_max, 0 <= l <= l_max.
BoundReport sp_sweep(int p_max, int l_max);

/**
 * alpha_hat = max_{1<=k<=K} (|u_k|_1 (k+1)^2)^(1/k), with its running maximum
 * in `sequence` (entry k-1 for k = 1..K). The bound |u_k|_1 <= a^k/(k+1)^2 is
 * re-verified exactly for a rational a >= alpha_hat. Diagnostics include the
 * even/odd ratio-test maxima and the relative change of alpha_hat over the last
 * ten orders.
 */
BoundReport coefficient_bound_check(const SeriesSolution& sol);

/**
 * (int u0 x dsigma)^2 <= (int u0 dsigma)^2 on S^{n-1} for axisymmetric u0,
 * with x-weight (1-x^2)^((n-3)/2). Throws std::invalid_argument if u0 is zero
 * or has a root in [-1, 1].
 */
BoundReport jensen_check(const PolyCos& u0, int n);

}  // namespace yamabe
