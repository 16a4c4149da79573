#pragma once

#include "yamabe/polycos.hpp"
#include "yamabe/series.hpp"

#include <cmath>
#include <vector>

namespace yamabe {

template <class Real>
Real from_rational(const Rational& q);

template <>
inline double from_rational<double>(const Rational& q) {
  return to_double(q);
}

template <>
inline long double from_rational<long double>(const Rational& q) {
  return to_long_double(q);
}

/// Value and first/second (r, theta) derivatives of delta = u - 1, plus the
/// pole-safe angular term A_n[delta] = delta_thth + (n-2) cot(theta) delta_th.
template <class Real>
struct SeriesJet {
  Real delta{};
  Real d_r{};
  Real d_rr{};
  Real d_th{};
  Real d_thth{};
  Real d_rth{};
  Real angular{};
};

/**
 * Floating-point view of a SeriesSolution with coefficients converted once.
 * Derivatives are exact term-wise derivatives of the truncated series; the
 * angular operator is evaluated from its x = cos(theta) polynomial form.
 */
template <class Real>
class SeriesEvaluator {
 public:
  explicit SeriesEvaluator(const SeriesSolution& sol) : n_(sol.n) {
    for (const auto& uk : sol.coefficients) {
      value_.push_back(convert(uk));
      dx_.push_back(convert(derivative_x(uk)));
      dxx_.push_back(convert(derivative_x(derivative_x(uk))));
      angular_.push_back(convert(angular_op(uk, sol.n)));
    }
  }

  int n() const { return n_; }
  int order() const { return static_cast<int>(value_.size()) - 1; }

  Real delta(const Real& r, const Real& theta) const {
    using std::cos;
    const Real x = cos(theta);
    const Real t = Real(1) / r;
    Real tm = ipow(t, n_);
    Real acc = 0;
    for (const auto& c : value_) {
      acc += horner(c, x) * tm;
      tm *= t;
    }
    return acc;
  }

  SeriesJet<Real> jet(const Real& r, const Real& theta) const {
    using std::cos;
    using std::sin;
    const Real x = cos(theta);
    const Real sn = sin(theta);
    const Real t = Real(1) / r;
    Real tm = ipow(t, n_);
    SeriesJet<Real> j;
    for (std::size_t k = 0; k < value_.size(); ++k) {
      const Real m = Real(n_ + static_cast<int>(k));
      const Real v = horner(value_[k], x);
      const Real vx = horner(dx_[k], x);
      const Real vxx = horner(dxx_[k], x);
      const Real va = horner(angular_[k], x);
      j.delta += v * tm;
      j.d_r -= m * v * tm * t;
      j.d_rr += m * (m + 1) * v * tm * t * t;
      j.d_th -= sn * vx * tm;
      j.d_rth += m * sn * vx * tm * t;
      j.d_thth += (sn * sn * vxx - x * vx) * tm;
      j.angular += va * tm;
      tm *= t;
    }
    return j;
  }

  /// Delta_b u = (1+r^2) u_rr + ((n-1+n r^2)/r) u_r + r^-2 A_n[u].
  Real laplacian(const Real& r, const Real& theta) const {
    const auto j = jet(r, theta);
    return (1 + r * r) * j.d_rr + ((n_ - 1) + n_ * r * r) / r * j.d_r + j.angular / (r * r);
  }

 private:
  static std::vector<Real> convert(const PolyCos& p) {
    std::vector<Real> out;
    out.reserve(p.coefficients().size());
    for (const auto& c : p.coefficients()) out.push_back(from_rational<Real>(c));
    return out;
  }

  static Real horner(const std::vector<Real>& c, const Real& x) {
    Real acc = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  static Real ipow(Real base, int e) {
    Real out = 1;
    while (e > 0) {
      if (e & 1) out *= base;
      base *= base;
      e >>= 1;
    }
    return out;
  }

  int n_;
  std::vector<std::vector<Real>> value_;
  std::vector<std::vector<Real>> dx_;
  std::vector<std::vector<Real>> dxx_;
  std::vector<std::vector<Real>> angular_;
};

}  // namespace yamabe
