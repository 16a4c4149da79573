#include "yamabe/polycos.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace yamabe {

PolyCos::PolyCos(std::vector<Rational> coefficients) : coeffs_(std::move(coefficients)) {
  normalize();
}

PolyCos::PolyCos(std::initializer_list<Rational> coefficients) : coeffs_(coefficients) {
  normalize();
}

PolyCos PolyCos::constant(const Rational& c) { return PolyCos({c}); }

PolyCos PolyCos::monomial(int degree, const Rational& c) {
  if (degree < 0) throw std::invalid_argument("monomial degree must be >= 0");
  std::vector<Rational> v(static_cast<std::size_t>(degree) + 1);
  v.back() = c;
  return PolyCos(std::move(v));
}

PolyCos PolyCos::linear(const Rational& beta, const Rational& gamma) { return PolyCos({beta, gamma}); }

Rational PolyCos::coefficient(int i) const {
  if (i < 0 || i > degree()) return 0;
  return coeffs_[static_cast<std::size_t>(i)];
}

void PolyCos::normalize() {
  while (!coeffs_.empty() && sgn(coeffs_.back()) == 0) coeffs_.pop_back();
}

PolyCos& PolyCos::operator+=(const PolyCos& other) { return add_scaled(1, other); }

PolyCos& PolyCos::operator-=(const PolyCos& other) { return add_scaled(-1, other); }

PolyCos& PolyCos::operator*=(const Rational& c) {
  if (sgn(c) == 0) {
    coeffs_.clear();
    return *this;
  }
  for (auto& a : coeffs_) a *= c;
  return *this;
}

PolyCos& PolyCos::add_scaled(const Rational& c, const PolyCos& other) {
  if (sgn(c) == 0 || other.is_zero()) return *this;
  if (coeffs_.size() < other.coeffs_.size()) coeffs_.resize(other.coeffs_.size());
  const bool unit = c == 1;
  for (std::size_t i = 0; i < other.coeffs_.size(); ++i) {
    if (unit) {
      coeffs_[i] += other.coeffs_[i];
    } else {
      coeffs_[i] += c * other.coeffs_[i];
    }
  }
  normalize();
  return *this;
}

namespace {

/// Integer numerators over one common denominator.
struct ScaledInts {
  std::vector<mpz_class> num;
  mpz_class den = 1;
};

ScaledInts to_scaled(std::span<const Rational> c) {
  ScaledInts out;
  for (const auto& q : c) mpz_lcm(out.den.get_mpz_t(), out.den.get_mpz_t(), q.get_den_mpz_t());
  out.num.resize(c.size());
  mpz_class f;
  for (std::size_t i = 0; i < c.size(); ++i) {
    mpz_divexact(f.get_mpz_t(), out.den.get_mpz_t(), c[i].get_den_mpz_t());
    out.num[i] = c[i].get_num() * f;
  }
  return out;
}

}  // namespace

PolyCos operator*(const PolyCos& a, const PolyCos& b) {
  if (a.is_zero() || b.is_zero()) return {};
  // Schoolbook product on integer numerators; one reduction per output
  // coefficient instead of one per term.
  const ScaledInts sa = to_scaled(a.coeffs_);
  const ScaledInts sb = to_scaled(b.coeffs_);
  std::vector<mpz_class> acc(a.coeffs_.size() + b.coeffs_.size() - 1);
  for (std::size_t i = 0; i < sa.num.size(); ++i) {
    if (sgn(sa.num[i]) == 0) continue;
    for (std::size_t j = 0; j < sb.num.size(); ++j)
      mpz_addmul(acc[i + j].get_mpz_t(), sa.num[i].get_mpz_t(), sb.num[j].get_mpz_t());
  }
  const mpz_class den = sa.den * sb.den;
  std::vector<Rational> out(acc.size());
  for (std::size_t k = 0; k < acc.size(); ++k) {
    mpq_set_num(out[k].get_mpq_t(), acc[k].get_mpz_t());
    mpq_set_den(out[k].get_mpq_t(), den.get_mpz_t());
    out[k].canonicalize();
  }
  return PolyCos(std::move(out));
}

PolyCos sum_of_products(std::span<const ProductTerm> terms) {
  struct Prepared {
    ScaledInts a, b;
    mpz_class weight_num;
    mpz_class den;
  };
  std::vector<Prepared> prep;
  prep.reserve(terms.size());
  std::size_t len = 0;
  mpz_class common = 1;
  for (const auto& t : terms) {
    if (sgn(t.weight) == 0 || t.a->is_zero() || t.b->is_zero()) continue;
    Prepared p{to_scaled(t.a->coefficients()), to_scaled(t.b->coefficients()), t.weight.get_num(), 0};
    p.den = p.a.den * p.b.den * t.weight.get_den();
    mpz_lcm(common.get_mpz_t(), common.get_mpz_t(), p.den.get_mpz_t());
    len = std::max(len, p.a.num.size() + p.b.num.size() - 1);
    prep.push_back(std::move(p));
  }
  if (prep.empty()) return {};

  std::vector<mpz_class> acc(len);
  mpz_class f, row;
  for (const auto& p : prep) {
    mpz_divexact(f.get_mpz_t(), common.get_mpz_t(), p.den.get_mpz_t());
    f *= p.weight_num;
    for (std::size_t i = 0; i < p.a.num.size(); ++i) {
      if (sgn(p.a.num[i]) == 0) continue;
      row = p.a.num[i] * f;
      for (std::size_t j = 0; j < p.b.num.size(); ++j)
        mpz_addmul(acc[i + j].get_mpz_t(), row.get_mpz_t(), p.b.num[j].get_mpz_t());
    }
  }
  std::vector<Rational> out(len);
  for (std::size_t k = 0; k < len; ++k) {
    mpq_set_num(out[k].get_mpq_t(), acc[k].get_mpz_t());
    mpq_set_den(out[k].get_mpq_t(), common.get_mpz_t());
    out[k].canonicalize();
  }
  return PolyCos(std::move(out));
}

double PolyCos::eval_x(double x) const {
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + it->get_d();
  return acc;
}

long double PolyCos::eval_x(long double x) const {
  long double acc = 0.0L;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + to_long_double(*it);
  return acc;
}

double PolyCos::eval(double theta) const { return eval_x(std::cos(theta)); }

PolyCos add(const PolyCos& a, const PolyCos& b) { return a + b; }

PolyCos mul(const PolyCos& a, const PolyCos& b) { return a * b; }

PolyCos derivative_x(const PolyCos& v) {
  if (v.degree() < 1) return {};
  std::vector<Rational> out(static_cast<std::size_t>(v.degree()));
  for (int i = 1; i <= v.degree(); ++i) out[static_cast<std::size_t>(i - 1)] = v.coefficient(i) * i;
  return PolyCos(std::move(out));
}

PolyCos cot_derivative(const PolyCos& v) {
  std::vector<Rational> out(v.coefficients().begin(), v.coefficients().end());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= -static_cast<long>(i);
  return PolyCos(std::move(out));
}

PolyCos second_theta_derivative(const PolyCos& v) {
  std::vector<Rational> out(v.coefficients().size());
  for (int i = 0; i <= v.degree(); ++i) {
    const Rational& c = v.coefficients()[static_cast<std::size_t>(i)];
    const auto ui = static_cast<std::size_t>(i);
    out[ui] -= c * i;
    if (i >= 2) {
      const long f = static_cast<long>(i) * (i - 1);
      out[ui - 2] += c * f;
      out[ui] -= c * f;
    }
  }
  return PolyCos(std::move(out));
}

PolyCos angular_op(const PolyCos& v, int n) {
  if (n < 3) throw std::invalid_argument("angular_op requires n >= 3");
  PolyCos out = second_theta_derivative(v);
  out.add_scaled(n - 2, cot_derivative(v));
  return out;
}

Rational one_norm(const PolyCos& v) {
  Rational s = 0;
  for (const auto& c : v.coefficients()) s += abs(c);
  return s;
}

PolyCos remainder(const PolyCos& a, const PolyCos& b) {
  if (b.is_zero()) throw std::invalid_argument("polynomial division by zero");
  std::vector<Rational> r(a.coefficients().begin(), a.coefficients().end());
  const int db = b.degree();
  const Rational lead = b.coefficients().back();
  for (int d = static_cast<int>(r.size()) - 1; d >= db; --d) {
    const auto ud = static_cast<std::size_t>(d);
    if (sgn(r[ud]) == 0) continue;
    Rational f = r[ud] / lead;
    for (int j = 0; j <= db; ++j) r[ud - static_cast<std::size_t>(db - j)] -= f * b.coefficient(j);
  }
  r.resize(static_cast<std::size_t>(std::min<int>(static_cast<int>(r.size()), db)));
  return PolyCos(std::move(r));
}

Rational eval_exact(const PolyCos& p, const Rational& x) {
  Rational acc = 0;
  for (auto it = p.coefficients().rbegin(); it != p.coefficients().rend(); ++it) acc = acc * x + *it;
  return acc;
}

namespace {

// Exact division of p by (x - a) when p(a) == 0.
PolyCos deflate(const PolyCos& p, const Rational& a) {
  const int d = p.degree();
  std::vector<Rational> q(static_cast<std::size_t>(d));
  Rational carry = 0;
  for (int i = d; i >= 1; --i) {
    carry = carry * a + p.coefficient(i);
    q[static_cast<std::size_t>(i - 1)] = carry;
  }
  return PolyCos(std::move(q));
}

int sign_variations(const std::vector<PolyCos>& chain, const Rational& x) {
  int variations = 0;
  int last = 0;
  for (const auto& p : chain) {
    const int s = sgn(eval_exact(p, x));
    if (s == 0) continue;
    if (last != 0 && s != last) ++variations;
    last = s;
  }
  return variations;
}

}  // namespace

int count_roots(const PolyCos& p, const Rational& lo, const Rational& hi) {
  if (p.is_zero()) throw std::invalid_argument("count_roots of the zero polynomial");
  if (lo > hi) return 0;
  PolyCos q = p;
  int endpoint_roots = 0;
  for (const Rational* e : {&lo, &hi}) {
    if (sgn(eval_exact(q, *e)) != 0) continue;
    ++endpoint_roots;
    while (q.degree() > 0 && sgn(eval_exact(q, *e)) == 0) q = deflate(q, *e);
    if (lo == hi) return endpoint_roots;
  }
  if (q.degree() <= 0) return endpoint_roots;

  std::vector<PolyCos> chain{q, derivative_x(q)};
  while (!chain.back().is_zero() && chain.back().degree() > 0) {
    PolyCos r = remainder(chain[chain.size() - 2], chain.back());
    if (r.is_zero()) break;
    chain.push_back(-r);
  }
  return endpoint_roots + sign_variations(chain, lo) - sign_variations(chain, hi);
}

}  // namespace yamabe
