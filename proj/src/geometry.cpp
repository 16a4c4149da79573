#include "yamabe/geometry.hpp"

#include "yamabe/parallel.hpp"

#include <Eigen/Dense>
#include <boost/multiprecision/mpfr.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace yamabe {

using mp_t = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<100>,
                                           boost::multiprecision::et_off>;

template <>
mp_t from_rational<mp_t>(const Rational& q) {
  mp_t out;
  mpfr_set_q(out.backend().data(), q.get_mpq_t(), MPFR_RNDN);
  return out;
}

namespace {

void require_dimension(int n) {
  if (n < 3) throw std::invalid_argument("dimension n must be >= 3, got " + std::to_string(n));
}

void require_point(real_t r, real_t theta) {
  if (!(r > 0)) throw std::domain_error("chart point needs r > 0");
  if (!(theta >= 0 && theta <= static_cast<real_t>(M_PI) + 1e-15L))
    throw std::domain_error("chart point needs theta in [0, pi]");
}

/// Least-squares coefficients for y ~ A c.
Eigen::VectorXd lstsq(const Eigen::MatrixXd& a, const Eigen::VectorXd& y) {
  return a.colPivHouseholderQr().solve(y);
}

void require_increasing(std::span<const double> grid, const char* what) {
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw std::invalid_argument(std::string(what) + " must be strictly increasing");
}

}  // namespace

double ChartPoint::rho() const { return std::asinh(1.0 / r); }
double ChartPoint::s() const { return std::asinh(r); }
ChartPoint ChartPoint::from_rho(double rho, double theta) { return {1.0 / std::sinh(rho), theta}; }
ChartPoint ChartPoint::from_s(double s, double theta) { return {std::sinh(s), theta}; }

PerturbationJet MetricSource::perturbation(real_t r, real_t theta) const {
  const MetricJet j = jet(r, theta);
  const real_t q = 1 + r * r;
  PerturbationJet e;
  e.P = j.grr * q - 1;
  e.P_r = j.grr_r * q + 2 * r * j.grr;
  e.P_th = j.grr_th * q;
  e.F = j.gthth / (r * r) - 1;
  e.F_r = j.gthth_r / (r * r) - 2 * j.gthth / (r * r * r);
  e.F_th = j.gthth_th / (r * r);
  return e;
}

// ---------------------------------------------------------------- hyperbolic

HyperbolicMetric::HyperbolicMetric(int n) : n_(n) { require_dimension(n); }

MetricJet HyperbolicMetric::jet(real_t r, real_t theta) const {
  require_point(r, theta);
  const real_t q = 1 + r * r;
  const real_t sn = std::sin(theta);
  const real_t cs = std::cos(theta);
  MetricJet j;
  j.grr = 1 / q;
  j.grr_r = -2 * r / (q * q);
  j.gthth = r * r;
  j.gthth_r = 2 * r;
  j.gww = r * r * sn * sn;
  j.gww_r = 2 * r * sn * sn;
  j.gww_th = 2 * r * r * sn * cs;
  return j;
}

PerturbationJet HyperbolicMetric::perturbation(real_t r, real_t theta) const {
  require_point(r, theta);
  return {};
}

MetricJet hyperbolic_metric(ChartPoint point, int n) { return HyperbolicMetric(n).jet(point.r, point.theta); }

// ------------------------------------------------------------------- Kottler

KottlerMetric::KottlerMetric(int n, double m) : n_(n), m_(m) {
  require_dimension(n);
  if (!std::isfinite(m)) throw std::invalid_argument("Kottler mass must be finite");
}

std::string KottlerMetric::name() const { return "kottler(m=" + std::to_string(static_cast<double>(m_)) + ")"; }

real_t KottlerMetric::lapse_sq(real_t r) const {
  return 1 + r * r - 2 * m_ * std::pow(r, static_cast<real_t>(2 - n_));
}

MetricJet KottlerMetric::jet(real_t r, real_t theta) const {
  require_point(r, theta);
  const real_t l = lapse_sq(r);
  if (!(l > 0)) throw std::domain_error("Kottler metric: r = " + std::to_string(static_cast<double>(r)) +
                                        " lies inside the horizon");
  const real_t dl = 2 * r + 2 * m_ * (n_ - 2) * std::pow(r, static_cast<real_t>(1 - n_));
  MetricJet j = HyperbolicMetric(n_).jet(r, theta);
  j.grr = 1 / l;
  j.grr_r = -dl / (l * l);
  return j;
}

PerturbationJet KottlerMetric::perturbation(real_t r, real_t theta) const {
  require_point(r, theta);
  const real_t l = lapse_sq(r);
  if (!(l > 0)) throw std::domain_error("Kottler metric: point inside the horizon");
  const real_t dl = 2 * r + 2 * m_ * (n_ - 2) * std::pow(r, static_cast<real_t>(1 - n_));
  const real_t q = 2 * m_ * std::pow(r, static_cast<real_t>(2 - n_));
  const real_t dq = 2 * m_ * (2 - n_) * std::pow(r, static_cast<real_t>(1 - n_));
  PerturbationJet e;
  e.P = q / l;
  e.P_r = (dq * l - q * dl) / (l * l);
  return e;
}

MetricJet kottler_metric(double m, int n, ChartPoint point) { return KottlerMetric(n, m).jet(point.r, point.theta); }

// --------------------------------------------------------- conformal series

ConformalSeriesMetric::ConformalSeriesMetric(const SeriesSolution& sol, double min_u)
    : evaluator_(sol), min_u_(min_u) {
  require_dimension(sol.n);
}

ConformalSeriesMetric::Factor ConformalSeriesMetric::factor(real_t r, real_t theta) const {
  require_point(r, theta);
  const auto sj = evaluator_.jet(r, theta);
  const real_t u = 1 + sj.delta;
  if (!(u > min_u_))
    throw std::domain_error("truncated u = " + std::to_string(static_cast<double>(u)) + " at r = " +
                            std::to_string(static_cast<double>(r)) + " is outside the validity region");
  const real_t w = 4.0L / (evaluator_.n() - 2);
  Factor f;
  f.psi = std::expm1(w * std::log1p(sj.delta));
  f.phi = 1 + f.psi;
  f.phi_r = w * f.phi / u * sj.d_r;
  f.phi_th = w * f.phi / u * sj.d_th;
  return f;
}

MetricJet ConformalSeriesMetric::jet(real_t r, real_t theta) const {
  const Factor f = factor(r, theta);
  const MetricJet b = HyperbolicMetric(dimension()).jet(r, theta);
  MetricJet j;
  j.grr = f.phi * b.grr;
  j.gthth = f.phi * b.gthth;
  j.gww = f.phi * b.gww;
  j.grr_r = f.phi_r * b.grr + f.phi * b.grr_r;
  j.gthth_r = f.phi_r * b.gthth + f.phi * b.gthth_r;
  j.gww_r = f.phi_r * b.gww + f.phi * b.gww_r;
  j.grr_th = f.phi_th * b.grr;
  j.gthth_th = f.phi_th * b.gthth;
  j.gww_th = f.phi_th * b.gww + f.phi * b.gww_th;
  return j;
}

PerturbationJet ConformalSeriesMetric::perturbation(real_t r, real_t theta) const {
  const Factor f = factor(r, theta);
  return {f.psi, f.psi, f.phi_r, f.phi_r, f.phi_th, f.phi_th};
}

MetricJet conformal_metric(const SeriesSolution& sol, ChartPoint point) {
  return ConformalSeriesMetric(sol).jet(point.r, point.theta);
}

// -------------------------------------------------------------- interpolation

Cutoff Cutoff::smoothstep(double r1, double r2) {
  if (!(r1 > 0) || !(r2 > r1)) throw std::invalid_argument("cutoff annulus needs 0 < r1 < r2");
  return Cutoff(r1, r2, false, 0.0);
}

Cutoff Cutoff::constant(double value) {
  if (!(value >= 0 && value <= 1)) throw std::invalid_argument("constant cutoff must lie in [0, 1]");
  return Cutoff(0.0, 0.0, true, value);
}

real_t Cutoff::value(real_t r) const {
  if (constant_) return c_;
  const real_t t = std::clamp((r - r1_) / (r2_ - r1_), 0.0L, 1.0L);
  return t * t * t * (10 + t * (-15 + 6 * t));
}

real_t Cutoff::derivative(real_t r) const {
  if (constant_) return 0;
  const real_t t = (r - r1_) / (r2_ - r1_);
  if (t <= 0 || t >= 1) return 0;
  return 30 * t * t * (1 - t) * (1 - t) / (r2_ - r1_);
}

InterpolatedMetric::InterpolatedMetric(const MetricSource& a, const MetricSource& b, Cutoff chi)
    : a_(a), b_(b), chi_(chi) {
  if (a.dimension() != b.dimension()) throw std::invalid_argument("interpolated metrics must share n");
}

MetricJet InterpolatedMetric::jet(real_t r, real_t theta) const {
  const real_t c = chi_.value(r);
  const real_t dc = chi_.derivative(r);
  // Only evaluate a source where its weight is nonzero, so that regions where
  // one metric is undefined can still be covered by the other.
  MetricJet ja, jb;
  if (c < 1) ja = a_.jet(r, theta);
  if (c > 0) jb = b_.jet(r, theta);
  if (c <= 0) return ja;
  if (c >= 1) return jb;
  auto mix = [&](real_t MetricJet::*f) { return (1 - c) * ja.*f + c * jb.*f; };
  MetricJet j;
  j.grr = mix(&MetricJet::grr);
  j.gthth = mix(&MetricJet::gthth);
  j.gww = mix(&MetricJet::gww);
  j.grr_r = mix(&MetricJet::grr_r) + dc * (jb.grr - ja.grr);
  j.gthth_r = mix(&MetricJet::gthth_r) + dc * (jb.gthth - ja.gthth);
  j.gww_r = mix(&MetricJet::gww_r) + dc * (jb.gww - ja.gww);
  j.grr_th = mix(&MetricJet::grr_th);
  j.gthth_th = mix(&MetricJet::gthth_th);
  j.gww_th = mix(&MetricJet::gww_th);
  return j;
}

// ------------------------------------------------------------------ Laplacian

double laplacian_termwise(const SeriesSolution& sol, ChartPoint point) {
  require_dimension(sol.n);
  require_point(point.r, point.theta);
  return static_cast<double>(SeriesEvaluator<real_t>(sol).laplacian(point.r, point.theta));
}

double fd_laplacian_oracle(const SeriesSolution& sol, ChartPoint point, double rel_step) {
  require_dimension(sol.n);
  if (!(rel_step > 0)) throw std::invalid_argument("finite-difference step must be positive");
  const real_t r = point.r;
  const real_t th = point.theta;
  const real_t hr = rel_step * r;
  const real_t ht = rel_step;
  if (!(r - hr > 0)) throw std::domain_error("finite-difference stencil leaves r > 0");
  if (!(th - ht > 0) || !(th + ht < static_cast<real_t>(M_PI)))
    throw std::domain_error("finite-difference stencil leaves 0 < theta < pi");

  const SeriesEvaluator<real_t> ev(sol);
  auto d = [&](real_t rr, real_t tt) {
    const real_t v = ev.delta(rr, tt);
    if (!(1 + v > kMinValidConformalFactor))
      throw std::domain_error("finite-difference stencil leaves the validity region");
    return v;
  };
  const real_t c = d(r, th);
  const real_t rp = d(r + hr, th), rm = d(r - hr, th);
  const real_t tp = d(r, th + ht), tm = d(r, th - ht);
  const real_t d_r = (rp - rm) / (2 * hr);
  const real_t d_rr = (rp - 2 * c + rm) / (hr * hr);
  const real_t d_t = (tp - tm) / (2 * ht);
  const real_t d_tt = (tp - 2 * c + tm) / (ht * ht);
  const int n = sol.n;
  const real_t ang = d_tt + (n - 2) * std::cos(th) / std::sin(th) * d_t;
  return static_cast<double>((1 + r * r) * d_rr + ((n - 1) + n * r * r) / r * d_r + ang / (r * r));
}

// ------------------------------------------------------------------- residual

struct ResidualEvaluator::Impl {
  explicit Impl(const SeriesSolution& sol)
      : ev(sol),
        constant(from_rational<mp_t>(make_rational(sol.n * (sol.n - 2), 4))),
        exponent(from_rational<mp_t>(make_rational(sol.n + 2, sol.n - 2))) {}
  SeriesEvaluator<mp_t> ev;
  mp_t constant;
  mp_t exponent;
};

ResidualEvaluator::ResidualEvaluator(const SeriesSolution& sol) {
  require_dimension(sol.n);
  impl_ = std::make_unique<Impl>(sol);
}
ResidualEvaluator::~ResidualEvaluator() = default;
ResidualEvaluator::ResidualEvaluator(ResidualEvaluator&&) noexcept = default;
ResidualEvaluator& ResidualEvaluator::operator=(ResidualEvaluator&&) noexcept = default;

double ResidualEvaluator::operator()(double r, double theta) const {
  require_point(r, theta);
  const mp_t rr = r;
  const mp_t tt = theta;
  const auto j = impl_->ev.jet(rr, tt);
  const mp_t u = 1 + j.delta;
  if (!(u > 0)) throw std::domain_error("truncated u <= 0 at the residual point");
  const int n = impl_->ev.n();
  const mp_t lap = (1 + rr * rr) * j.d_rr + ((n - 1) + n * rr * rr) / rr * j.d_r + j.angular / (rr * rr);
  const mp_t rhs = impl_->constant * (pow(u, impl_->exponent) - u);
  return static_cast<double>(abs(lap - rhs));
}

double yamabe_residual(const SeriesSolution& sol, ChartPoint point) {
  return ResidualEvaluator(sol)(point.r, point.theta);
}

DecayFit fit_residual_decay(const SeriesSolution& sol, double r_min, double r_max, int samples,
                            std::span<const double> theta_grid) {
  if (!(r_min > 0) || !(r_max > r_min)) throw std::invalid_argument("residual fit needs 0 < r_min < r_max");
  if (samples < 2) throw std::invalid_argument("residual fit needs at least two radii");
  if (theta_grid.empty()) throw std::invalid_argument("residual fit needs a theta grid");
  const ResidualEvaluator eval(sol);
  DecayFit fit;
  fit.radii.resize(static_cast<std::size_t>(samples));
  fit.residuals.assign(static_cast<std::size_t>(samples), 0.0);
  const double lr = std::log(r_min);
  const double step = (std::log(r_max) - lr) / (samples - 1);
  for (int i = 0; i < samples; ++i) fit.radii[static_cast<std::size_t>(i)] = std::exp(lr + step * i);
  parallel_for(fit.radii.size(), [&](std::size_t i) {
    double worst = 0.0;
    for (double th : theta_grid) worst = std::max(worst, eval(fit.radii[i], th));
    fit.residuals[i] = worst;
  });

  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < fit.radii.size(); ++i) {
    if (fit.residuals[i] > 0) {
      xs.push_back(std::log(fit.radii[i]));
      ys.push_back(std::log(fit.residuals[i]));
    }
  }
  if (xs.size() < 2) {
    // exact solution: no measurable decay
    fit.slope = -std::numeric_limits<double>::infinity();
    fit.intercept = -std::numeric_limits<double>::infinity();
    return fit;
  }
  Eigen::MatrixXd a(static_cast<Eigen::Index>(xs.size()), 2);
  Eigen::VectorXd y(static_cast<Eigen::Index>(xs.size()));
  for (std::size_t i = 0; i < xs.size(); ++i) {
    a(static_cast<Eigen::Index>(i), 0) = 1.0;
    a(static_cast<Eigen::Index>(i), 1) = xs[i];
    y[static_cast<Eigen::Index>(i)] = ys[i];
  }
  const Eigen::VectorXd c = lstsq(a, y);
  fit.intercept = c[0];
  fit.slope = c[1];
  return fit;
}

// ------------------------------------------------------------ mean curvature

namespace {

real_t mean_curvature_at(const MetricSource& g, real_t r, real_t theta) {
  const MetricJet j = g.jet(r, theta);
  if (!j.positive_definite()) throw std::domain_error("degenerate metric in mean curvature");
  const int n = g.dimension();
  return (j.gthth_r / j.gthth + (n - 2) * j.gww_r / j.gww) / (2 * std::sqrt(j.grr));
}

}  // namespace

double mean_curvature_sphere(const MetricSource& g, double s, double theta) {
  if (!(s > 0)) throw std::invalid_argument("mean curvature needs s > 0");
  return static_cast<double>(mean_curvature_at(g, std::sinh(static_cast<real_t>(s)), theta));
}

CurvatureExpansionFit fit_mean_curvature_expansion(const MetricSource& g, std::span<const double> s_grid,
                                                   double theta) {
  if (s_grid.size() < 4) throw std::invalid_argument("curvature fit needs at least four s values");
  require_increasing(s_grid, "s grid");
  const int n = g.dimension();
  const auto m = static_cast<Eigen::Index>(s_grid.size());
  Eigen::MatrixXd a(m, 3);
  Eigen::VectorXd y(m);
  CurvatureExpansionFit fit;
  fit.min_excess = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < m; ++i) {
    const real_t s = s_grid[static_cast<std::size_t>(i)];
    const real_t excess = mean_curvature_at(g, std::sinh(s), theta) - (n - 1);
    fit.min_excess = std::min(fit.min_excess, static_cast<double>(excess));
    y[i] = static_cast<double>(excess * std::exp(2 * s));
    a(i, 0) = 1.0;
    a(i, 1) = static_cast<double>(std::exp(-s));
    a(i, 2) = static_cast<double>(std::exp(-2 * s));
  }
  const Eigen::VectorXd c = lstsq(a, y);
  fit.c0 = c[0];
  fit.c1 = c[1];
  fit.c2 = c[2];
  return fit;
}

MassAspectFit mass_aspect_extract(const MetricSource& g, std::span<const double> s_grid,
                                  std::span<const double> theta_grid, const PolyCos& profile) {
  if (s_grid.size() < 5) throw std::invalid_argument("mass-aspect extraction needs at least five s values");
  if (theta_grid.empty()) throw std::invalid_argument("mass-aspect extraction needs a theta grid");
  require_increasing(s_grid, "s grid");
  const int n = g.dimension();
  const auto m = static_cast<Eigen::Index>(s_grid.size());

  // mu(s) = mu_inf + c2 e^{-2s} + c3 e^{-3s} + c4 e^{-4s}
  Eigen::MatrixXd a(m, 4);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double s = s_grid[static_cast<std::size_t>(i)];
    a(i, 0) = 1.0;
    a(i, 1) = std::exp(-2 * s);
    a(i, 2) = std::exp(-3 * s);
    a(i, 3) = std::exp(-4 * s);
  }
  const auto qr = a.colPivHouseholderQr();

  MassAspectFit fit;
  fit.theta.assign(theta_grid.begin(), theta_grid.end());
  fit.mu.assign(theta_grid.size(), 0.0);
  const real_t scale = std::pow(2.0L, static_cast<real_t>(1 - n));
  parallel_for(theta_grid.size(), [&](std::size_t t) {
    Eigen::VectorXd y(m);
    for (Eigen::Index i = 0; i < m; ++i) {
      const real_t s = s_grid[static_cast<std::size_t>(i)];
      const real_t r = std::sinh(s);
      const real_t excess = mean_curvature_at(g, r, theta_grid[t]) - (n - 1) * std::sqrt(1 + r * r) / r;
      y[i] = static_cast<double>(-scale * std::exp(n * s) * excess);
    }
    fit.mu[t] = qr.solve(y)[0];
  });

  double pp = 0, mp = 0, mm = 0;
  for (std::size_t t = 0; t < fit.theta.size(); ++t) {
    const double p = profile.eval(fit.theta[t]);
    pp += p * p;
    mp += fit.mu[t] * p;
    mm += fit.mu[t] * fit.mu[t];
  }
  fit.kappa = pp > 0 ? mp / pp : 0.0;
  double rr = 0;
  for (std::size_t t = 0; t < fit.theta.size(); ++t) {
    const double d = fit.mu[t] - fit.kappa * profile.eval(fit.theta[t]);
    rr += d * d;
  }
  fit.residual = mm > 0 ? std::sqrt(rr / mm) : 0.0;
  fit.flagged = fit.residual > kMassAspectFitThreshold;
  return fit;
}

MassAspectFit mass_aspect_extract(const SeriesSolution& sol, std::span<const double> s_grid,
                                  std::span<const double> theta_grid) {
  const ConformalSeriesMetric g(sol);
  return mass_aspect_extract(g, s_grid, theta_grid, sol.u0());
}

// ------------------------------------------------------- scalar curvature (FD)

namespace {

/// Christoffel symbols gamma[a][b][c] = Gamma^a_bc of the diagonal metric
/// diag(grr, gthth, gww * prod_{j<l} sin^2 phi_j) at chart coordinates x.
class ChristoffelField {
 public:
  ChristoffelField(const MetricSource& g, int n) : g_(g), n_(n) {}

  std::vector<real_t> diagonal(const std::vector<real_t>& x) const {
    std::vector<real_t> d(static_cast<std::size_t>(n_));
    const MetricJet j = g_.jet(x[0], x[1]);
    d[0] = j.grr;
    d[1] = j.gthth;
    real_t prod = 1;
    for (int l = 1; l <= n_ - 2; ++l) {
      d[static_cast<std::size_t>(l + 1)] = j.gww * prod;
      const real_t sp = std::sin(x[static_cast<std::size_t>(l + 1)]);
      prod *= sp * sp;
    }
    return d;
  }

  std::vector<real_t> operator()(const std::vector<real_t>& x) const {
    const auto n = static_cast<std::size_t>(n_);
    const MetricJet j = g_.jet(x[0], x[1]);
    if (!j.positive_definite()) throw std::domain_error("degenerate metric in curvature oracle");
    // d[a] = g_aa, dd[a][c] = d_c g_aa
    std::vector<real_t> d(n, 0);
    std::vector<real_t> dd(n * n, 0);
    d[0] = j.grr;
    dd[0 * n + 0] = j.grr_r;
    dd[0 * n + 1] = j.grr_th;
    d[1] = j.gthth;
    dd[1 * n + 0] = j.gthth_r;
    dd[1 * n + 1] = j.gthth_th;
    real_t prod = 1;
    for (std::size_t l = 1; l + 1 < n; ++l) {
      const std::size_t a = l + 1;
      d[a] = j.gww * prod;
      dd[a * n + 0] = j.gww_r * prod;
      dd[a * n + 1] = j.gww_th * prod;
      for (std::size_t q = 1; q < l; ++q) {
        const real_t phi = x[q + 1];
        dd[a * n + q + 1] = d[a] * 2 * std::cos(phi) / std::sin(phi);
      }
      const real_t sp = std::sin(x[a]);
      prod *= sp * sp;
    }
    std::vector<real_t> gamma(n * n * n, 0);
    auto at = [&](std::size_t a, std::size_t b, std::size_t c) -> real_t& { return gamma[(a * n + b) * n + c]; };
    for (std::size_t a = 0; a < n; ++a) {
      const real_t inv = 1 / (2 * d[a]);
      for (std::size_t c = 0; c < n; ++c) {
        at(a, a, c) += inv * dd[a * n + c];
        at(a, c, a) += inv * dd[a * n + c];
      }
      for (std::size_t b = 0; b < n; ++b) at(a, b, b) -= inv * dd[b * n + a];
    }
    return gamma;
  }

 private:
  const MetricSource& g_;
  int n_;
};

}  // namespace

real_t scalar_curvature_fd(const MetricSource& g, real_t r, real_t theta, real_t step) {
  const int ni = g.dimension();
  const auto n = static_cast<std::size_t>(ni);
  if (!(step > 0)) throw std::invalid_argument("curvature step must be positive");
  const real_t pi = static_cast<real_t>(M_PI);
  if (!(r - 3 * step * r > 0)) throw std::domain_error("curvature stencil leaves r > 0");
  if (!(theta - 3 * step > 0) || !(theta + 3 * step < pi))
    throw std::domain_error("curvature stencil leaves 0 < theta < pi");

  const ChristoffelField field(g, ni);
  std::vector<real_t> x(n, pi / 2);
  x[0] = r;
  x[1] = theta;

  const auto gamma = field(x);
  const auto diag = field.diagonal(x);

  // dgamma[c] = d_c Gamma, sixth-order central differences
  static constexpr std::array<real_t, 3> w{45.0L, -9.0L, 1.0L};
  std::vector<std::vector<real_t>> dgamma(n);
  for (std::size_t c = 0; c < n; ++c) {
    const real_t h = c == 0 ? step * r : step;
    std::vector<real_t> acc(n * n * n, 0);
    for (int k = 1; k <= 3; ++k) {
      auto xp = x, xm = x;
      xp[c] += k * h;
      xm[c] -= k * h;
      const auto gp = field(xp);
      const auto gm = field(xm);
      for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += w[static_cast<std::size_t>(k - 1)] * (gp[i] - gm[i]);
    }
    for (auto& v : acc) v /= 60 * h;
    dgamma[c] = std::move(acc);
  }

  auto G = [&](std::size_t a, std::size_t b, std::size_t c) { return gamma[(a * n + b) * n + c]; };
  auto dG = [&](std::size_t c, std::size_t a, std::size_t b, std::size_t e) {
    return dgamma[c][(a * n + b) * n + e];
  };

  real_t scalar = 0;
  for (std::size_t b = 0; b < n; ++b) {
    real_t ric = 0;
    for (std::size_t a = 0; a < n; ++a) {
      ric += dG(a, a, b, b) - dG(b, a, a, b);
      for (std::size_t d = 0; d < n; ++d) ric += G(a, a, d) * G(d, b, b) - G(a, b, d) * G(d, a, b);
    }
    scalar += ric / diag[b];
  }
  return scalar;
}

InterpolationReport interpolation_residual(const MetricSource& a, const MetricSource& b, const Cutoff& chi,
                                           std::span<const double> r_grid, std::span<const double> theta_grid,
                                           real_t step) {
  if (a.dimension() != b.dimension()) throw std::invalid_argument("interpolated metrics must share n");
  if (r_grid.empty() || theta_grid.empty()) throw std::invalid_argument("interpolation residual needs a grid");
  const InterpolatedMetric g(a, b, chi);
  const int n = a.dimension();
  const std::size_t nt = theta_grid.size();
  InterpolationReport rep;
  const std::size_t total = r_grid.size() * nt;
  rep.r.resize(total);
  rep.theta.resize(total);
  rep.scalar_curvature.resize(total);
  parallel_for(total, [&](std::size_t i) {
    const double r = r_grid[i / nt];
    const double th = theta_grid[i % nt];
    // both sources must be defined on the whole sample set
    a.jet(r, th);
    b.jet(r, th);
    rep.r[i] = r;
    rep.theta[i] = th;
    rep.scalar_curvature[i] = static_cast<double>(scalar_curvature_fd(g, r, th, step));
  });
  const double target = -static_cast<double>(n) * (n - 1);
  for (std::size_t i = 0; i < total; ++i) {
    const double dev = std::fabs(rep.scalar_curvature[i] - target);
    if (i == 0 || dev > rep.max_deviation) {
      rep.max_deviation = dev;
      rep.r_at_max = rep.r[i];
      rep.theta_at_max = rep.theta[i];
    }
  }
  return rep;
}

std::vector<double> interior_theta_grid(int count) {
  if (count < 1) throw std::invalid_argument("theta grid needs at least one point");
  std::vector<double> out(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = (i + 0.5) * M_PI / count;
  return out;
}

}  // namespace yamabe
