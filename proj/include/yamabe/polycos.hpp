#pragma once

#include "yamabe/rational.hpp"

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace yamabe {

/**
 * Polynomial in x = cos(theta) with exact rational coefficients.
 *
 * Coefficient i multiplies x^i. Trailing zeros are never stored, so the zero
 * polynomial has no coefficients and degree -1.
 */
class PolyCos {
 public:
  PolyCos() = default;
  explicit PolyCos(std::vector<Rational> coefficients);
  PolyCos(std::initializer_list<Rational> coefficients);

  static PolyCos constant(const Rational& c);
  static PolyCos monomial(int degree, const Rational& c = 1);
  /// beta + gamma * x
  static PolyCos linear(const Rational& beta, const Rational& gamma);

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  std::span<const Rational> coefficients() const { return coeffs_; }
  /// Coefficient of x^i; zero beyond the degree.
  Rational coefficient(int i) const;

  PolyCos& operator+=(const PolyCos& other);
  PolyCos& operator-=(const PolyCos& other);
  PolyCos& operator*=(const Rational& c);
  /// this += c * other, without a temporary.
  PolyCos& add_scaled(const Rational& c, const PolyCos& other);

  friend PolyCos operator+(PolyCos a, const PolyCos& b) { return a += b; }
  friend PolyCos operator-(PolyCos a, const PolyCos& b) { return a -= b; }
  friend PolyCos operator-(PolyCos a) { return a *= Rational(-1); }
  friend PolyCos operator*(PolyCos a, const Rational& c) { return a *= c; }
  friend PolyCos operator*(const Rational& c, PolyCos a) { return a *= c; }
  friend PolyCos operator*(const PolyCos& a, const PolyCos& b);
  friend bool operator==(const PolyCos& a, const PolyCos& b) { return a.coeffs_ == b.coeffs_; }

  /// Horner evaluation at x (floating point).
  double eval_x(double x) const;
  long double eval_x(long double x) const;
  /// Horner evaluation at x = cos(theta).
  double eval(double theta) const;

 private:
  void normalize();

  std::vector<Rational> coeffs_;
};

PolyCos add(const PolyCos& a, const PolyCos& b);
PolyCos mul(const PolyCos& a, const PolyCos& b);

/// d/dx in the x = cos(theta) variable.
PolyCos derivative_x(const PolyCos& v);

/// (cos/sin) dv/dtheta, which equals sum_i (-i) v_i x^i.
PolyCos cot_derivative(const PolyCos& v);

/// d^2 v / dtheta^2 = sum_i v_i (-i x^i + i(i-1)(1-x^2) x^(i-2)).
PolyCos second_theta_derivative(const PolyCos& v);

/// v'' + (n-2)(cos/sin) v', the axisymmetric Laplacian of the unit (n-1)-sphere.
/// Throws std::invalid_argument for n < 3.
PolyCos angular_op(const PolyCos& v, int n);

/// sum_i |v_i|
Rational one_norm(const PolyCos& v);

struct ProductTerm {
  Rational weight;
  const PolyCos* a;
  const PolyCos* b;
};

/// sum_t weight_t * a_t * b_t, accumulated over one common denominator.
PolyCos sum_of_products(std::span<const ProductTerm> terms);

/// Polynomial remainder of a by b (b nonzero), exact.
PolyCos remainder(const PolyCos& a, const PolyCos& b);

/// Number of distinct real roots of p in the closed interval [lo, hi], by Sturm
/// sequence. p must be nonzero.
int count_roots(const PolyCos& p, const Rational& lo, const Rational& hi);

/// Exact value of p at a rational point.
Rational eval_exact(const PolyCos& p, const Rational& x);

}  // namespace yamabe
