#include "yamabe/charges.hpp"

#include "yamabe/parallel.hpp"

#include <gsl/gsl_integration.h>
#include <gsl/gsl_sf_gamma.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>

namespace yamabe {

namespace {

void require_dimension(int n) {
  if (n < 3) throw std::invalid_argument("dimension n must be >= 3, got " + std::to_string(n));
}

/// vol(S^d) = 2 pi^((d+1)/2) / Gamma((d+1)/2)
double sphere_volume(int d) { return 2.0 * std::pow(M_PI, (d + 1) / 2.0) / gsl_sf_gamma((d + 1) / 2.0); }

struct GlTable {
  explicit GlTable(int order)
      : table(gsl_integration_glfixed_table_alloc(static_cast<std::size_t>(order)), gsl_integration_glfixed_table_free) {
    if (!table) throw std::runtime_error("cannot allocate Gauss-Legendre table");
  }
  std::unique_ptr<gsl_integration_glfixed_table, decltype(&gsl_integration_glfixed_table_free)> table;
};

struct Quadrature {
  double value = 0.0;
  double magnitude = 0.0;  // same rule applied to |f|
};

template <class Fn>
Quadrature gauss_legendre(const Fn& fn, double a, double b, int order) {
  const GlTable t(order);
  Quadrature q;
  for (int i = 0; i < order; ++i) {
    double x = 0, w = 0;
    gsl_integration_glfixed_point(a, b, static_cast<std::size_t>(i), &x, &w, t.table.get());
    const double f = fn(x);
    q.value += w * f;
    q.magnitude += w * std::fabs(f);
  }
  return q;
}

}  // namespace

double KID::value(double r, double theta, double fiber_y) const {
  const double f = function.radial(r, theta).f;
  return function.fiber_degree == 0 ? f : f * fiber_y;
}

std::vector<KID> kid_basis(int n) {
  require_dimension(n);
  std::vector<KID> out;
  out.push_back({"V0", 0, {[](double r, double) {
                             const double q = 1 + r * r;
                             const double s = std::sqrt(q);
                             ScalarJet j;
                             j.f = s;
                             j.f_r = r / s;
                             j.f_rr = 1 / (q * s);
                             return j;
                           },
                           0}});
  for (int i = 1; i < n; ++i) {
    out.push_back({"V" + std::to_string(i), i, {[](double r, double th) {
                                                  const double sn = std::sin(th), cs = std::cos(th);
                                                  ScalarJet j;
                                                  j.f = r * sn;
                                                  j.f_r = sn;
                                                  j.f_th = r * cs;
                                                  j.f_rth = cs;
                                                  j.f_thth = -r * sn;
                                                  return j;
                                                },
                                                1}});
  }
  out.push_back({"V" + std::to_string(n), n, {[](double r, double th) {
                                                const double sn = std::sin(th), cs = std::cos(th);
                                                ScalarJet j;
                                                j.f = r * cs;
                                                j.f_r = cs;
                                                j.f_th = -r * sn;
                                                j.f_rth = -sn;
                                                j.f_thth = -r * cs;
                                                return j;
                                              },
                                              0}});
  return out;
}

Eigen::MatrixXd lstar(const ScalarFunction& fn, ChartPoint point, int n, double fiber_y) {
  require_dimension(n);
  const double r = point.r, th = point.theta;
  if (!(r > 0) || !(th > 0 && th < M_PI)) throw std::domain_error("lstar needs r > 0 and 0 < theta < pi");
  if (fn.fiber_degree != 0 && fn.fiber_degree != 1) throw std::invalid_argument("fiber degree must be 0 or 1");
  if (!(std::fabs(fiber_y) <= 1)) throw std::invalid_argument("fiber value must lie in [-1, 1]");

  const ScalarJet F = fn.radial(r, th);
  const int c = fn.fiber_degree;
  const double y = c == 0 ? 1.0 : fiber_y;
  const double grad_y = c == 0 ? 0.0 : std::sqrt(1 - fiber_y * fiber_y);
  const double q = 1 + r * r;
  const double sq = std::sqrt(q);
  const double sn = std::sin(th), cot = std::cos(th) / sn;

  Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(n, n);
  hess(0, 0) = y * q * (F.f_rr + r / q * F.f_r);
  hess(1, 1) = y * (F.f_thth + q * r * F.f_r) / (r * r);
  hess(0, 1) = hess(1, 0) = y * (F.f_rth - F.f_th / r) * sq / r;
  const double fiber = y * (-c * F.f / (r * r * sn * sn) + q * F.f_r / r + cot * F.f_th / (r * r));
  for (int a = 2; a < n; ++a) hess(a, a) = fiber;
  if (n > 2 && c == 1) {
    hess(0, 2) = hess(2, 0) = (F.f_r - F.f / r) * grad_y * sq / (r * sn);
    hess(1, 2) = hess(2, 1) = (F.f_th - cot * F.f) * grad_y / (r * r * sn);
  }
  const double lap = hess.trace();
  const double f = y * F.f;
  Eigen::MatrixXd out = hess;
  out.diagonal().array() += -lap + (n - 1) * f;
  return out;
}

FluxDensity flux_density(const KID& V, const PerturbationJet& e, ChartPoint point, int n, double fiber_y) {
  require_dimension(n);
  const double r = point.r, th = point.theta;
  const ScalarJet F = V.function.radial(r, th);
  const int c = V.function.fiber_degree;
  const double y = c == 0 ? 1.0 : fiber_y;
  const double grad_y = c == 0 ? 0.0 : std::sqrt(std::max(0.0, 1 - fiber_y * fiber_y));
  const double q = 1 + r * r;
  const double sq = std::sqrt(q);
  const double mean = (n - 1) * sq / r;

  const double P = static_cast<double>(e.P), Fe = static_cast<double>(e.F);
  const double v = y * F.f;
  const double nu_v = y * sq * F.f_r;
  const double th_v = y * F.f_th / r;
  const double om_v = c == 0 ? 0.0 : grad_y * F.f / (r * std::sin(th));
  const double nu_F = sq * static_cast<double>(e.F_r);
  const double th_P = static_cast<double>(e.P_th) / r;
  const double th_F = static_cast<double>(e.F_th) / r;

  FluxDensity u;
  u.normal = v * ((P - Fe) * mean - (n - 1) * nu_F) + (n - 1) * Fe * nu_v;
  u.theta = v * (-th_P - (n - 2) * th_F) + (P + (n - 2) * Fe) * th_v;
  u.fiber = (P + (n - 2) * Fe) * om_v;
  return u;
}

double fiber_harmonic_integral(int n) {
  require_dimension(n);
  // Y = cos(chi) on S^{n-2}: vol(S^{n-3}) int_0^pi cos(chi) sin^{n-3}(chi) dchi
  const auto fn = [n](double chi) { return std::cos(chi) * std::pow(std::sin(chi), n - 3); };
  return sphere_volume(n - 3) * gauss_legendre(fn, 0.0, M_PI, 64).value;
}

FluxValue flux_integral(const MetricSource& g, const KID& V, double R, int q) {
  const int n = g.dimension();
  if (!(R > 0)) throw std::invalid_argument("flux radius must be positive");
  if (q < 2) throw std::invalid_argument("quadrature order must be >= 2");

  const double fiber = V.function.fiber_degree == 0 ? sphere_volume(n - 2) : fiber_harmonic_integral(n);
  const double area = std::pow(R, n - 1);
  const auto integrand = [&](double th) {
    const PerturbationJet e = g.perturbation(R, th);
    const double sn = std::sin(th);
    return flux_density(V, e, {R, th}, n, 1.0).normal * std::pow(sn, n - 2);
  };

  // Converged once successive estimates agree relative to the integral of
  // |integrand|, which stays meaningful when the signed integral vanishes.
  FluxValue out;
  Quadrature prev = gauss_legendre(integrand, 0.0, M_PI, q);
  for (int order = 2 * q; order <= kMaxQuadratureOrder; order *= 2) {
    const Quadrature cur = gauss_legendre(integrand, 0.0, M_PI, order);
    out.order = order;
    out.value = fiber * area * cur.value;
    if (std::fabs(cur.value - prev.value) <= kQuadratureRelTol * cur.magnitude) {
      out.converged = true;
      return out;
    }
    prev = cur;
  }
  return out;
}

FluxValue flux_integral(const SeriesSolution& sol, const KID& V, double R, int q) {
  const ConformalSeriesMetric g(sol);
  return flux_integral(g, V, R, q);
}

FluxReport extrapolate_flux(std::string kid, std::span<const double> radii, std::span<const double> flux) {
  if (radii.size() != flux.size()) throw std::invalid_argument("radii and flux values differ in length");
  if (radii.size() < 5) throw std::invalid_argument("flux extrapolation needs at least five radii");
  for (std::size_t i = 1; i < radii.size(); ++i)
    if (!(radii[i] > radii[i - 1])) throw std::invalid_argument("flux radii must be strictly increasing");
  if (!(radii.front() > 0)) throw std::invalid_argument("flux radii must be positive");

  auto fit = [&](std::size_t first) {
    const auto m = static_cast<Eigen::Index>(radii.size() - first);
    Eigen::MatrixXd a(m, 3);
    Eigen::VectorXd y(m);
    for (Eigen::Index i = 0; i < m; ++i) {
      const double inv = 1.0 / radii[first + static_cast<std::size_t>(i)];
      a(i, 0) = 1.0;
      a(i, 1) = inv;
      a(i, 2) = inv * inv;
      y[i] = flux[first + static_cast<std::size_t>(i)];
    }
    const Eigen::VectorXd c = a.colPivHouseholderQr().solve(y);
    const double rms = std::sqrt((a * c - y).squaredNorm() / static_cast<double>(m));
    return std::pair<Eigen::VectorXd, double>(c, rms);
  };

  FluxReport rep;
  rep.kid = std::move(kid);
  rep.radii.assign(radii.begin(), radii.end());
  rep.flux.assign(flux.begin(), flux.end());
  const auto [c, rms] = fit(0);
  rep.limit = c[0];
  rep.coeff_inv_r = c[1];
  rep.coeff_inv_r2 = c[2];
  rep.fit_residual = rms;
  rep.limit_drop_first = radii.size() > 5 ? fit(1).first[0] : rep.limit;
  const double scale = std::max(std::fabs(rep.limit), 1e-12);
  rep.stability_shift = std::fabs(rep.limit - rep.limit_drop_first) / scale;
  rep.stable = rep.stability_shift < kStabilityTol;
  return rep;
}

bool FluxEM::converged() const {
  return std::all_of(reports.begin(), reports.end(),
                     [](const FluxReport& r) { return r.quadrature_converged && r.stable; });
}

FluxEM em_from_flux(const MetricSource& g, std::span<const double> radii, int q) {
  const int n = g.dimension();
  if (radii.size() < 5) throw std::invalid_argument("flux extrapolation needs at least five radii");
  for (std::size_t i = 1; i < radii.size(); ++i)
    if (!(radii[i] > radii[i - 1])) throw std::invalid_argument("flux radii must be strictly increasing");

  const auto kids = kid_basis(n);
  const std::size_t nr = radii.size();
  std::vector<FluxValue> values(kids.size() * nr);
  parallel_for(values.size(), [&](std::size_t i) { values[i] = flux_integral(g, kids[i / nr], radii[i % nr], q); });

  FluxEM out{EMVector(n), {}};
  for (std::size_t k = 0; k < kids.size(); ++k) {
    std::vector<double> f(nr);
    std::vector<int> orders(nr);
    bool conv = true;
    for (std::size_t i = 0; i < nr; ++i) {
      f[i] = values[k * nr + i].value;
      orders[i] = values[k * nr + i].order;
      conv = conv && values[k * nr + i].converged;
    }
    FluxReport rep = extrapolate_flux(kids[k].name, radii, f);
    rep.quadrature_order = std::move(orders);
    rep.quadrature_converged = conv;
    out.p[kids[k].index] = rep.limit;
    out.reports.push_back(std::move(rep));
  }
  // A component that vanishes up to quadrature noise has no meaningful
  // relative shift; judge it against the size of the whole vector.
  const double floor = kVanishingComponent * out.p.components().cwiseAbs().maxCoeff();
  for (auto& rep : out.reports) {
    const double scale = std::max({std::fabs(rep.limit), floor, 1e-12});
    rep.stability_shift = std::fabs(rep.limit - rep.limit_drop_first) / scale;
    rep.stable = rep.stability_shift < kStabilityTol;
  }
  return out;
}

double calibrate_lambda(const EMVector& flux, const EMVector& moments) {
  if (flux.n() != moments.n()) throw std::invalid_argument("vectors differ in dimension");
  const double mm = moments.components().squaredNorm();
  if (!(mm > 0)) throw std::invalid_argument("moment vector is zero; lambda is undetermined");
  return flux.components().dot(moments.components()) / mm;
}

}  // namespace yamabe
