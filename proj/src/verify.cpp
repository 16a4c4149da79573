#include "yamabe/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace yamabe {

namespace {

Rational rational_pow(const Rational& base, unsigned long e) {
  mpz_class num, den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), e);
  mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), e);
  Rational out(num, den);
  out.canonicalize();
  return out;
}

std::string range_text(std::initializer_list<std::pair<const char*, long long>> parts) {
  std::string out;
  for (const auto& [k, v] : parts) {
    if (!out.empty()) out += ", ";
    out += k;
    out += "<=";
    out += std::to_string(v);
  }
  return out;
}

}  // namespace

double BoundReport::diagnostic(const std::string& key) const {
  for (const auto& [k, v] : diagnostics)
    if (k == key) return v;
  throw std::out_of_range("no diagnostic named " + key);
}

Rational pi_squared_lower() { return make_rational(98696, 10000); }

BoundReport lemma_a1_check(int k_max, int n_max) {
  if (k_max < 0 || n_max < 3) throw std::invalid_argument("lemma A1 sweep needs k_max >= 0 and n_max >= 3");
  BoundReport rep;
  rep.lemma = "A1";
  rep.range = range_text({{"k", k_max}, {"n", n_max}});
  long long checked = 0;
  for (long long n = 3; n <= n_max; ++n) {
    for (long long k = 0; k <= k_max; ++k) {
      for (long long p = 2; (p - 1) * n <= k; ++p) {
        const long long den = k - (p - 1) * n + p;
        const long long lhs = (k + 1) * (k + 1);
        const long long rhs = n * n * den * den;
        ++checked;
        if (lhs > rhs) rep.pass = false;
        rep.worst_ratio = std::max(rep.worst_ratio, static_cast<double>(lhs) / static_cast<double>(rhs));
      }
    }
  }
  rep.diagnostics.emplace_back("instances", static_cast<double>(checked));
  if (checked == 0) rep.note = "empty parameter range (vacuous pass)";
  return rep;
}

BoundReport lemma_a2_check(int p_max, int n_max) {
  if (p_max < 0 || n_max < 3) throw std::invalid_argument("lemma A2 sweep needs p_max >= 0 and n_max >= 3");
  BoundReport rep;
  rep.lemma = "A2";
  rep.range = range_text({{"p", p_max}, {"n", n_max}});
  // log of the per-p maximum over n
  std::vector<double> log_max(static_cast<std::size_t>(p_max) + 1, -std::numeric_limits<double>::infinity());
  for (int n = 3; n <= n_max; ++n) {
    const Rational a = make_rational(n + 2, n - 2);
    Rational c = 1;
    for (int p = 0; p <= p_max; ++p) {
      if (p > 0) {
        c *= (a - (p - 1));
        c /= p;
      }
      const double lv = log_abs(c) - p;
      auto& slot = log_max[static_cast<std::size_t>(p)];
      slot = std::max(slot, lv);
    }
  }
  double log_c = -std::numeric_limits<double>::infinity();
  for (double v : log_max) log_c = std::max(log_c, v);
  const double c_hat = std::exp(log_c);

  // smallest p0 with log_max non-increasing on [p0, p_max]
  int p0 = p_max;
  while (p0 > 0 && log_max[static_cast<std::size_t>(p0 - 1)] >= log_max[static_cast<std::size_t>(p0)]) --p0;

  rep.sequence.reserve(log_max.size());
  for (double v : log_max) rep.sequence.push_back(std::exp(v));
  rep.pass = std::isfinite(c_hat) && (p0 < p_max || p_max == 0);
  rep.worst_ratio = 1.0;  // max |binom| e^-p / c_hat, attained by construction
  rep.diagnostics.emplace_back("c_hat", c_hat);
  rep.diagnostics.emplace_back("p0", p0);
  rep.note = "c_hat is the maximum over the swept range only";
  return rep;
}

Rational s2_closed_form(int q) {
  if (q < 0) throw std::invalid_argument("q must be >= 0");
  Rational h1 = 0, h2 = 0;
  for (int a = 1; a <= q + 1; ++a) {
    h1 += Rational(1, a);
    h2 += Rational(1, static_cast<long>(a) * a);
  }
  const Rational big_n = q + 2;
  return 2 * h2 / (big_n * big_n) + 4 * h1 / (big_n * big_n * big_n);
}

BoundReport lemma_a3_check(int q_max) {
  if (q_max < 0) throw std::invalid_argument("lemma A3 sweep needs q_max >= 0");
  BoundReport rep;
  rep.lemma = "A3";
  rep.range = range_text({{"q", q_max}});
  const Rational bound = pi_squared_lower();
  const double bound_d = to_double(bound);
  // incremental harmonic sums H1(q+1), H2(q+1)
  Rational h1 = 0, h2 = 0;
  for (int q = 0; q <= q_max; ++q) {
    const long a = q + 1;
    h1 += Rational(1, a);
    h2 += Rational(1, a * a);
    const Rational big_n = q + 2;
    // s2 (q+2)^2 = 2 H2 + 4 H1 / (q+2)
    const Rational scaled = 2 * h2 + 4 * h1 / big_n;
    if (scaled > bound) rep.pass = false;
    rep.worst_ratio = std::max(rep.worst_ratio, to_double(scaled) / bound_d);
  }
  rep.diagnostics.emplace_back("pi2_lower", bound_d);
  return rep;
}

Rational sp_enumerate(int p, int l) {
  if (p < 1 || l < 0) throw std::invalid_argument("S_p(l) needs p >= 1 and l >= 0");
  // number of compositions C(l+p-1, p-1)
  mpz_class count;
  mpz_bin_uiui(count.get_mpz_t(), static_cast<unsigned long>(l + p - 1), static_cast<unsigned long>(p - 1));
  if (count > static_cast<long>(kMaxCompositions))
    throw std::length_error("S_p(l) enumeration exceeds " + std::to_string(kMaxCompositions) + " compositions");

  std::vector<Rational> inv_sq(static_cast<std::size_t>(l) + 1);
  for (int i = 0; i <= l; ++i) inv_sq[static_cast<std::size_t>(i)] = Rational(1, static_cast<long>(i + 1) * (i + 1));

  Rational total = 0;
  // depth-first enumeration of l_1 + ... + l_p = l
  auto rec = [&](auto&& self, int idx, int remaining, const Rational& prod) -> void {
    if (idx == p - 1) {
      total += prod * inv_sq[static_cast<std::size_t>(remaining)];
      return;
    }
    for (int v = 0; v <= remaining; ++v) self(self, idx + 1, remaining - v, prod * inv_sq[static_cast<std::size_t>(v)]);
  };
  rec(rec, 0, l, Rational(1));
  return total;
}

BoundReport sp_convolution_check(int p, int l) {
  if (p < 2) throw std::invalid_argument("S_p bound needs p >= 2");
  BoundReport rep;
  rep.lemma = "Sp";
  rep.range = "p=" + std::to_string(p) + ", l=" + std::to_string(l);
  const Rational s = sp_enumerate(p, l);
  const Rational lhs = s * Rational((l + p) * (l + p));
  const Rational rhs = rational_pow(pi_squared_lower(), static_cast<unsigned long>(p - 1));
  rep.pass = lhs <= rhs;
  rep.worst_ratio = to_double(lhs / rhs);
  rep.diagnostics.emplace_back("S", to_double(s));
  return rep;
}

BoundReport sp_sweep(int p_max, int l_max) {
  if (p_max < 2 || l_max < 0) throw std::invalid_argument("S_p sweep needs p_max >= 2 and l_max >= 0");
  BoundReport rep;
  rep.lemma = "Sp";
  rep.range = range_text({{"p", p_max}, {"l", l_max}});
  for (int p = 2; p <= p_max; ++p) {
    for (int l = 0; l <= l_max; ++l) {
      const BoundReport one = sp_convolution_check(p, l);
      rep.pass = rep.pass && one.pass;
      rep.worst_ratio = std::max(rep.worst_ratio, one.worst_ratio);
    }
  }
  return rep;
}

BoundReport coefficient_bound_check(const SeriesSolution& sol) {
  const int big_k = sol.order();
  if (big_k < 2) throw std::invalid_argument("coefficient bound check needs K >= 2");
  BoundReport rep;
  rep.lemma = "L2";
  rep.range = "K=" + std::to_string(big_k);

  std::vector<Rational> norms(static_cast<std::size_t>(big_k) + 1);
  for (int k = 0; k <= big_k; ++k) norms[static_cast<std::size_t>(k)] = one_norm(sol.coefficients[static_cast<std::size_t>(k)]);

  double alpha = 0.0;
  rep.sequence.reserve(static_cast<std::size_t>(big_k));
  for (int k = 1; k <= big_k; ++k) {
    const Rational& nk = norms[static_cast<std::size_t>(k)];
    if (sgn(nk) != 0) {
      const double v = std::exp((log_abs(nk) + 2.0 * std::log(k + 1.0)) / k);
      alpha = std::max(alpha, v);
    }
    rep.sequence.push_back(alpha);
  }

  // exact re-check with a rational upper approximation of alpha_hat
  const Rational a_up = from_double(std::nextafter(alpha * (1.0 + 1e-12), std::numeric_limits<double>::infinity()));
  double worst = 0.0;
  for (int k = 1; k <= big_k; ++k) {
    const Rational& nk = norms[static_cast<std::size_t>(k)];
    if (sgn(nk) == 0) continue;
    const Rational lhs = nk * Rational(static_cast<long>(k + 1) * (k + 1));
    const Rational rhs = rational_pow(a_up, static_cast<unsigned long>(k));
    if (lhs > rhs) rep.pass = false;
    worst = std::max(worst, std::exp(log_abs(lhs) - log_abs(rhs)));
  }
  rep.worst_ratio = worst;

  // ratio test on even and odd subsequences
  double ratio_even = 0.0, ratio_odd = 0.0;
  for (int k = 0; k + 2 <= big_k; ++k) {
    const Rational& a = norms[static_cast<std::size_t>(k)];
    const Rational& b = norms[static_cast<std::size_t>(k + 2)];
    if (sgn(a) == 0) continue;  // u_1 = 0 starts the odd subsequence
    double& slot = k % 2 == 0 ? ratio_even : ratio_odd;
    slot = std::max(slot, std::exp(log_abs(b) - log_abs(a)));
  }
  const bool ratio_finite = std::isfinite(ratio_even) && std::isfinite(ratio_odd);

  rep.diagnostics.emplace_back("alpha_hat", alpha);
  rep.diagnostics.emplace_back("alpha_upper", to_double(a_up));
  rep.diagnostics.emplace_back("ratio_even_max", ratio_even);
  rep.diagnostics.emplace_back("ratio_odd_max", ratio_odd);
  rep.diagnostics.emplace_back("ratio_finite", ratio_finite ? 1.0 : 0.0);
  if (big_k > 10) {
    const double prev = rep.sequence[static_cast<std::size_t>(big_k - 11)];
    const double change = alpha > 0 ? std::fabs(alpha - prev) / alpha : 0.0;
    rep.diagnostics.emplace_back("alpha_change_last10", change);
  }
  rep.pass = rep.pass && ratio_finite;
  return rep;
}

BoundReport jensen_check(const PolyCos& u0, int n) {
  if (n < 3) throw std::invalid_argument("dimension n must be >= 3, got " + std::to_string(n));
  if (u0.is_zero()) throw std::invalid_argument("jensen check: u0 is identically zero");
  if (count_roots(u0, Rational(-1), Rational(1)) > 0)
    throw std::invalid_argument("jensen check: u0 changes sign or vanishes on [-1, 1]");

  // int_{-1}^{1} x^m (1-x^2)^((n-3)/2) dx = B((m+1)/2, (n-1)/2) for even m
  auto moment = [n](int m) {
    if (m % 2 != 0) return 0.0;
    return std::beta((m + 1) / 2.0, (n - 1) / 2.0);
  };
  const double fiber = 2.0 * std::pow(M_PI, (n - 1) / 2.0) / std::tgamma((n - 1) / 2.0);
  double i0 = 0.0, i1 = 0.0;
  for (int i = 0; i <= u0.degree(); ++i) {
    const double c = to_double(u0.coefficients()[static_cast<std::size_t>(i)]);
    i0 += c * moment(i);
    i1 += c * moment(i + 1);
  }
  i0 *= fiber;
  i1 *= fiber;
  BoundReport rep;
  rep.lemma = "Jensen";
  rep.range = "n=" + std::to_string(n) + ", deg=" + std::to_string(u0.degree());
  rep.worst_ratio = (i1 * i1) / (i0 * i0);
  rep.pass = rep.worst_ratio <= 1.0;
  rep.diagnostics.emplace_back("mass", i0);
  rep.diagnostics.emplace_back("dipole", i1);
  return rep;
}

}  // namespace yamabe
