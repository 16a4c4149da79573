#pragma once

#include "yamabe/polycos.hpp"
#include "yamabe/series.hpp"
#include "yamabe/series_eval.hpp"

#include <memory>
#include <span>
#include <string>
#include <vector>

namespace yamabe {

using real_t = long double;

/// Point of the (r, theta) chart; rho and s are the companion radial
/// coordinates with 1/r = sinh(rho) and sinh(s) = r.
struct ChartPoint {
  double r = 1.0;
  double theta = 0.0;

  double rho() const;
  double s() const;
  static ChartPoint from_rho(double rho, double theta);
  static ChartPoint from_s(double s, double theta);
};

/**
 * Components of a metric of the form
 *   g = grr dr^2 + gthth dtheta^2 + gww sigma_{n-2}
 * at one chart point, with first r and theta derivatives.
 */
struct MetricJet {
  real_t grr = 0, gthth = 0, gww = 0;
  real_t grr_r = 0, gthth_r = 0, gww_r = 0;
  real_t grr_th = 0, gthth_th = 0, gww_th = 0;

  bool positive_definite() const { return grr > 0 && gthth > 0 && gww > 0; }
};

/// e = g - b written as e = P b_rr dr^2 + F r^2 sigma_{n-1}, with derivatives.
struct PerturbationJet {
  real_t P = 0, F = 0;
  real_t P_r = 0, F_r = 0;
  real_t P_th = 0, F_th = 0;
};

/// Axisymmetric metric on an exterior region, sampled pointwise.
class MetricSource {
 public:
  virtual ~MetricSource() = default;

  virtual int dimension() const = 0;
  virtual std::string name() const = 0;
  /// Throws std::domain_error outside the region where the metric is defined.
  virtual MetricJet jet(real_t r, real_t theta) const = 0;
  /// g - b relative to the hyperbolic metric. The default differences jets;
  /// sources override it when an analytic form avoids cancellation.
  virtual PerturbationJet perturbation(real_t r, real_t theta) const;
};

/// b = dr^2/(1+r^2) + r^2 sigma_{n-1}
class HyperbolicMetric final : public MetricSource {
 public:
  explicit HyperbolicMetric(int n);
  int dimension() const override { return n_; }
  std::string name() const override { return "hyperbolic"; }
  MetricJet jet(real_t r, real_t theta) const override;
  PerturbationJet perturbation(real_t r, real_t theta) const override;

 private:
  int n_;
};

/// b_m = dr^2/(1 - 2m/r^(n-2) + r^2) + r^2 sigma_{n-1}
class KottlerMetric final : public MetricSource {
 public:
  KottlerMetric(int n, double m);
  int dimension() const override { return n_; }
  std::string name() const override;
  MetricJet jet(real_t r, real_t theta) const override;
  PerturbationJet perturbation(real_t r, real_t theta) const override;
  double mass() const { return m_; }

 private:
  real_t lapse_sq(real_t r) const;
  int n_;
  real_t m_;
};

inline constexpr double kMinValidConformalFactor = 0.5;

/// g = u^(4/(n-2)) b for a truncated series solution u. Points where the
/// truncated u <= min_u are rejected as outside the validity region.
class ConformalSeriesMetric final : public MetricSource {
 public:
  explicit ConformalSeriesMetric(const SeriesSolution& sol, double min_u = kMinValidConformalFactor);
  int dimension() const override { return evaluator_.n(); }
  std::string name() const override { return "series"; }
  MetricJet jet(real_t r, real_t theta) const override;
  PerturbationJet perturbation(real_t r, real_t theta) const override;
  const SeriesEvaluator<real_t>& evaluator() const { return evaluator_; }

 private:
  struct Factor {
    real_t phi, phi_r, phi_th, psi;  // psi = phi - 1
  };
  Factor factor(real_t r, real_t theta) const;

  SeriesEvaluator<real_t> evaluator_;
  real_t min_u_;
};

/// Radial cutoff chi(r): 0 inside r1, 1 outside r2, quintic smoothstep in
/// between (C^2). A constant cutoff is also available.
class Cutoff {
 public:
  static Cutoff smoothstep(double r1, double r2);
  static Cutoff constant(double value);

  real_t value(real_t r) const;
  real_t derivative(real_t r) const;
  double inner() const { return r1_; }
  double outer() const { return r2_; }

 private:
  Cutoff(double r1, double r2, bool is_constant, double c) : r1_(r1), r2_(r2), constant_(is_constant), c_(c) {}
  double r1_, r2_;
  bool constant_;
  double c_;
};

/// (1 - chi) gA + chi gB. Holds references; the sources must outlive it.
class InterpolatedMetric final : public MetricSource {
 public:
  InterpolatedMetric(const MetricSource& a, const MetricSource& b, Cutoff chi);
  int dimension() const override { return a_.dimension(); }
  std::string name() const override { return "interpolated(" + a_.name() + "," + b_.name() + ")"; }
  MetricJet jet(real_t r, real_t theta) const override;

 private:
  const MetricSource& a_;
  const MetricSource& b_;
  Cutoff chi_;
};

MetricJet hyperbolic_metric(ChartPoint point, int n);
MetricJet kottler_metric(double m, int n, ChartPoint point);
MetricJet conformal_metric(const SeriesSolution& sol, ChartPoint point);

/// Delta_b u from term-wise differentiation of the truncated series.
double laplacian_termwise(const SeriesSolution& sol, ChartPoint point);

/**
 * Delta_b u from centered second-order finite differences of the series
 * values. rel_step sets h_r = rel_step * r and h_theta = rel_step. Throws
 * std::domain_error if the stencil leaves r > 0, 0 < theta < pi or the
 * validity region.
 */
double fd_laplacian_oracle(const SeriesSolution& sol, ChartPoint point, double rel_step);

/// |Delta_b u - n(n-2)/4 (u^((n+2)/(n-2)) - u)|, evaluated in 100-digit
/// arithmetic so that residuals far below double epsilon are resolved.
class ResidualEvaluator {
 public:
  explicit ResidualEvaluator(const SeriesSolution& sol);
  ~ResidualEvaluator();
  ResidualEvaluator(ResidualEvaluator&&) noexcept;
  ResidualEvaluator& operator=(ResidualEvaluator&&) noexcept;

  double operator()(double r, double theta) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

double yamabe_residual(const SeriesSolution& sol, ChartPoint point);

struct DecayFit {
  std::vector<double> radii;
  std::vector<double> residuals;  // max over the theta grid at each radius
  double slope = 0.0;
  double intercept = 0.0;
};

/// Least-squares slope of log(max_theta residual) against log r over
/// `samples` log-spaced radii in [r_min, r_max].
DecayFit fit_residual_decay(const SeriesSolution& sol, double r_min, double r_max, int samples,
                            std::span<const double> theta_grid);

/// Mean curvature of the coordinate sphere r = sinh(s) at angle theta, from
/// the second fundamental form with the metric-normalized unit normal.
double mean_curvature_sphere(const MetricSource& g, double s, double theta);

/// Theta(s) - (n-1) ~ c0 e^{-2s} + c1 e^{-3s} + c2 e^{-4s}: least-squares
/// coefficients at fixed theta, plus the smallest sampled excess.
struct CurvatureExpansionFit {
  double c0 = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double min_excess = 0.0;
};

CurvatureExpansionFit fit_mean_curvature_expansion(const MetricSource& g, std::span<const double> s_grid,
                                                   double theta);

struct MassAspectFit {
  std::vector<double> theta;
  std::vector<double> mu;
  double kappa = 0.0;
  double residual = 0.0;  // ||mu - kappa*profile|| / ||mu||
  bool flagged = false;   // residual above threshold
};

inline constexpr double kMassAspectFitThreshold = 1e-2;

/**
 * mu(theta) = -2^(1-n) e^(ns) (Theta_s(theta) - (n-1) coth s), extrapolated in
 * s by a least-squares fit mu(s) = mu_inf + c e^{-2s}, then fitted against
 * kappa * profile(theta).
 */
MassAspectFit mass_aspect_extract(const MetricSource& g, std::span<const double> s_grid,
                                  std::span<const double> theta_grid, const PolyCos& profile);
MassAspectFit mass_aspect_extract(const SeriesSolution& sol, std::span<const double> s_grid,
                                  std::span<const double> theta_grid);

inline constexpr real_t kDefaultCurvatureStep = 2e-3L;

/**
 * Scalar curvature by finite-difference Christoffel symbols of the diagonal
 * metric in hyperspherical coordinates (r, theta, phi_1..phi_{n-2}), with a
 * sixth-order central stencil of relative step `step` (h_r = step * r).
 */
real_t scalar_curvature_fd(const MetricSource& g, real_t r, real_t theta, real_t step = kDefaultCurvatureStep);

struct InterpolationReport {
  double max_deviation = 0.0;  // max |R + n(n-1)|
  double r_at_max = 0.0;
  double theta_at_max = 0.0;
  std::vector<double> r;
  std::vector<double> theta;
  std::vector<double> scalar_curvature;
};

/// Scalar curvature of (1 - chi) gA + chi gB sampled on the grid. Throws
/// std::domain_error when either source is undefined at a sample.
InterpolationReport interpolation_residual(const MetricSource& a, const MetricSource& b, const Cutoff& chi,
                                           std::span<const double> r_grid, std::span<const double> theta_grid,
                                           real_t step = kDefaultCurvatureStep);

/// theta_i = (i + 1/2) pi / count: interior grid avoiding the poles.
std::vector<double> interior_theta_grid(int count);

}  // namespace yamabe
