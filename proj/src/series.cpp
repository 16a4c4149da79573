#include "yamabe/series.hpp"

#include <cmath>
#include <new>
#include <stdexcept>
#include <string>

namespace yamabe {

namespace {

void require_dimension(int n) {
  if (n < 3) throw std::invalid_argument("dimension n must be >= 3, got " + std::to_string(n));
}

Rational yamabe_constant(int n) { return make_rational(n * (n - 2), 4); }

Rational exponent(int n) { return make_rational(n + 2, n - 2); }

}  // namespace

Rational gen_binomial(int n, int p) {
  require_dimension(n);
  if (p < 0) throw std::invalid_argument("binomial index p must be >= 0");
  const Rational a = exponent(n);
  Rational c = 1;
  for (int j = 0; j < p; ++j) {
    c *= (a - j);
    c /= (j + 1);
  }
  return c;
}

const PolyCos& PowerCache::get(int p, int l) {
  const auto& u = *coeffs_;
  if (p < 1 || l < 0) throw std::invalid_argument("PowerCache index out of range");
  if (l >= static_cast<int>(u.size()))
    throw std::out_of_range("power coefficient needs u_" + std::to_string(l) + ", not yet computed");
  if (p == 1) return u[static_cast<std::size_t>(l)];

  const auto row = static_cast<std::size_t>(p - 2);
  if (table_.size() <= row) table_.resize(row + 1);
  auto& entries = table_[row];
  if (entries.size() <= static_cast<std::size_t>(l)) entries.resize(static_cast<std::size_t>(l) + 1);
  auto& slot = entries[static_cast<std::size_t>(l)];
  if (!slot) {
    std::vector<ProductTerm> terms;
    for (int j = 0; j <= l; ++j) {
      const PolyCos& uj = u[static_cast<std::size_t>(j)];
      if (uj.is_zero()) continue;
      const PolyCos& rest = get(p - 1, l - j);
      if (rest.is_zero()) continue;
      terms.push_back({Rational(1), &uj, &rest});
    }
    // get() may have resized table_ while recursing, so re-index.
    table_[row][static_cast<std::size_t>(l)] = sum_of_products(terms);
  }
  return *table_[row][static_cast<std::size_t>(l)];
}

PolyCos compute_Pk(const SeriesSolution& sol, int k, PowerCache& cache) {
  require_dimension(sol.n);
  if (k < 0) throw std::invalid_argument("order k must be >= 0");
  PolyCos pk;
  for (int p = 2; (p - 1) * sol.n <= k; ++p) {
    const Rational c = gen_binomial(sol.n, p);
    if (sgn(c) == 0) continue;
    const int l = k - (p - 1) * sol.n;
    pk.add_scaled(c, cache.get(p, l));
  }
  return pk;
}

PolyCos compute_Pk(const SeriesSolution& sol, int k) {
  if (k >= sol.n && static_cast<int>(sol.coefficients.size()) < k - sol.n + 1)
    throw std::out_of_range("compute_Pk(" + std::to_string(k) + ") needs lower-order coefficients");
  PowerCache cache(sol.coefficients);
  return compute_Pk(sol, k, cache);
}

namespace {

PolyCos isolate(const SeriesSolution& sol, int k, const PolyCos& pk) {
  const int n = sol.n;
  PolyCos rhs = yamabe_constant(n) * pk;
  if (k >= 2) {
    const PolyCos& prev = sol.coefficients[static_cast<std::size_t>(k - 2)];
    rhs.add_scaled(-static_cast<long>(k) * (k + n - 2), prev);
    rhs -= angular_op(prev, n);
  }
  rhs *= Rational(1, static_cast<long>(k) * (k + n + 1));
  return rhs;
}

}  // namespace

PolyCos solve_coefficient(const SeriesSolution& sol, int k) {
  require_dimension(sol.n);
  if (k < 1) throw std::invalid_argument("solve_coefficient requires k >= 1 (u_0 is free)");
  if (static_cast<int>(sol.coefficients.size()) < k)
    throw std::out_of_range("solve_coefficient(" + std::to_string(k) + ") needs u_0..u_" +
                            std::to_string(k - 1));
  return isolate(sol, k, compute_Pk(sol, k));
}

SeriesSolution solve_up_to(int n, const Rational& beta, const Rational& gamma, int K) {
  require_dimension(n);
  if (K < 0) throw std::invalid_argument("truncation order K must be >= 0");
  if (K > kMaxSupportedOrder)
    throw std::length_error("truncation order " + std::to_string(K) + " exceeds supported maximum " +
                            std::to_string(kMaxSupportedOrder));
  SeriesSolution sol{n, beta, gamma, {}};
  sol.coefficients.reserve(static_cast<std::size_t>(K) + 1);
  sol.coefficients.push_back(PolyCos::linear(beta, gamma));
  PowerCache cache(sol.coefficients);
  try {
    for (int k = 1; k <= K; ++k) {
      PolyCos uk = isolate(sol, k, compute_Pk(sol, k, cache));
      sol.coefficients.push_back(std::move(uk));
    }
  } catch (const std::bad_alloc&) {
    throw std::runtime_error("out of memory while computing series coefficients (K=" + std::to_string(K) +
                             ")");
  }
  return sol;
}

std::vector<PolyCos> binomial_series(const SeriesSolution& sol, int k_max) {
  require_dimension(sol.n);
  const int n = sol.n;
  if (k_max > sol.order()) throw std::out_of_range("binomial_series beyond the computed order");
  // f = sum_m f_m t^m with f_m = u_{m-n}; G = (1+f)^a = sum_m g_m t^m.
  // m g_m = sum_{j=1}^{m} ((a+1) j - m) f_j g_{m-j}.
  const int m_max = n + k_max;
  const Rational a = exponent(n);
  auto f = [&](int m) -> const PolyCos* {
    if (m < n) return nullptr;
    return &sol.coefficients[static_cast<std::size_t>(m - n)];
  };
  std::vector<PolyCos> g(static_cast<std::size_t>(m_max) + 1);
  g[0] = PolyCos::constant(1);
  for (int m = 1; m <= m_max; ++m) {
    std::vector<ProductTerm> terms;
    for (int j = n; j <= m; ++j) {
      const PolyCos* fj = f(j);
      const PolyCos& rest = g[static_cast<std::size_t>(m - j)];
      terms.push_back({((a + 1) * j - m) / m, fj, &rest});
    }
    g[static_cast<std::size_t>(m)] = sum_of_products(terms);
  }
  return {g.begin() + n, g.end()};
}

namespace {

OrderReport check_order(const SeriesSolution& sol, int k, const PolyCos& vk) {
  const int n = sol.n;
  const PolyCos& uk = sol.coefficients[static_cast<std::size_t>(k)];
  OrderReport rep;
  rep.k = k;
  rep.lhs = Rational(static_cast<long>(k + 1) * (k + n)) * uk;
  if (k >= 2) {
    const PolyCos& prev = sol.coefficients[static_cast<std::size_t>(k - 2)];
    rep.lhs.add_scaled(static_cast<long>(k) * (k + n - 2), prev);
    rep.lhs += angular_op(prev, n);
  }
  rep.rhs = yamabe_constant(n) * (vk - uk);
  rep.exact_match = (rep.lhs - rep.rhs).is_zero();
  return rep;
}

}  // namespace

OrderReport verify_order(const SeriesSolution& sol, int k) {
  if (k < 0 || k > sol.order()) throw std::out_of_range("verify_order: k outside 0..K");
  const auto v = binomial_series(sol, k);
  return check_order(sol, k, v[static_cast<std::size_t>(k)]);
}

std::vector<OrderReport> verify_all(const SeriesSolution& sol) {
  std::vector<OrderReport> out;
  if (sol.order() < 0) return out;
  const auto v = binomial_series(sol, sol.order());
  out.reserve(v.size());
  for (int k = 0; k <= sol.order(); ++k) out.push_back(check_order(sol, k, v[static_cast<std::size_t>(k)]));
  return out;
}

double eval_u(const SeriesSolution& sol, double r, double theta) {
  if (!(r > 0)) throw std::invalid_argument("eval_u requires r > 0");
  const double x = std::cos(theta);
  const double t = 1.0 / r;
  double tk = std::pow(t, sol.n);
  double acc = 0.0;
  for (const auto& uk : sol.coefficients) {
    acc += uk.eval_x(x) * tk;
    tk *= t;
  }
  return 1.0 + acc;
}

}  // namespace yamabe
