#pragma once

#include "yamabe/geometry.hpp"
#include "yamabe/minkowski.hpp"
#include "yamabe/series.hpp"

#include <Eigen/Dense>

#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace yamabe {

/// Value and derivatives up to second order of a function of (r, theta).
struct ScalarJet {
  double f = 0, f_r = 0, f_th = 0;
  double f_rr = 0, f_rth = 0, f_thth = 0;
};

/**
 * Separable function f = F(r, theta) Y(omega) on the hyperbolic exterior, where
 * Y is 1 (fiber_degree 0) or a first spherical harmonic of the fiber sphere
 * S^{n-2} (fiber_degree 1), i.e. the restriction of a linear coordinate.
 */
struct ScalarFunction {
  std::function<ScalarJet(double r, double theta)> radial;
  int fiber_degree = 0;
};

/// Static KID V = r * (direction cosine) or sqrt(1+r^2), with closed-form derivatives.
struct KID {
  std::string name;
  int index = 0;  // 0 for V_(0), i for x^i
  ScalarFunction function;

  /// V at a chart point and fiber value Y (ignored when fiber_degree = 0).
  double value(double r, double theta, double fiber_y = 1.0) const;
};

/// V_(0) = sqrt(1+r^2), V_(i) = r sin(theta) omega_i for 1 <= i <= n-1, V_(n) = r cos(theta).
std::vector<KID> kid_basis(int n);

/**
 * L_b* f = -(Delta_b f) b + Hess_b f - f Ric_b as an n x n matrix in the
 * b-orthonormal frame (e_r, e_theta, e_omega_1, ..., e_omega_{n-2}). The fiber
 * point is chosen where Y = fiber_y and e_omega_1 points along grad Y.
 */
Eigen::MatrixXd lstar(const ScalarFunction& f, ChartPoint point, int n, double fiber_y = 0.6);

/// Components of U(V, e) in the b-orthonormal frame (nu_r, e_theta, e_omega_1).
/// e = g - b is diagonal with e(e_r, e_r) = P and F on the sphere block.
struct FluxDensity {
  double normal = 0;
  double theta = 0;
  double fiber = 0;
};

FluxDensity flux_density(const KID& V, const PerturbationJet& e, ChartPoint point, int n, double fiber_y = 1.0);

struct FluxValue {
  double value = 0.0;
  int order = 0;  // Gauss-Legendre nodes used for the final estimate
  bool converged = false;
};

inline constexpr double kQuadratureRelTol = 1e-10;
inline constexpr int kDefaultQuadratureOrder = 16;
inline constexpr int kMaxQuadratureOrder = 2048;

/**
 * int_{r=R} U(V, g - b)(nu_r) dS_r. The theta integral uses Gauss-Legendre in
 * theta starting at order q and doubling until successive estimates differ by
 * less than kQuadratureRelTol times the integral of |integrand|; the fiber sphere contributes its exact volume (or the
 * integral of Y for transverse KIDs).
 */
FluxValue flux_integral(const MetricSource& g, const KID& V, double R, int q = kDefaultQuadratureOrder);
FluxValue flux_integral(const SeriesSolution& sol, const KID& V, double R, int q = kDefaultQuadratureOrder);

/// int over S^{n-2} of a first harmonic Y, by quadrature (vanishes analytically).
double fiber_harmonic_integral(int n);

inline constexpr double kStabilityTol = 1e-3;
/// In em_from_flux, limits below this fraction of the largest component are
/// treated as vanishing when judging stability.
inline constexpr double kVanishingComponent = 1e-6;

struct FluxReport {
  std::string kid;
  std::vector<double> radii;
  std::vector<double> flux;
  std::vector<int> quadrature_order;
  double limit = 0.0;
  double coeff_inv_r = 0.0;
  double coeff_inv_r2 = 0.0;
  double fit_residual = 0.0;      // rms of the fit residuals
  double limit_drop_first = 0.0;  // limit refitted without the smallest radius
  double stability_shift = 0.0;   // |limit - limit_drop_first| / max(|limit|, tiny)
  bool quadrature_converged = true;
  bool stable = true;
};

/// Least-squares fit a + b/R + c/R^2 over at least five radii.
FluxReport extrapolate_flux(std::string kid, std::span<const double> radii, std::span<const double> flux);

struct FluxEM {
  EMVector p;
  std::vector<FluxReport> reports;

  bool converged() const;
};

/// Flux integrals of every basis KID at each radius, extrapolated and
/// assembled into (p_(0), ..., p_(n)). Radii must be strictly increasing.
/// Stability shifts are relative to max(|limit|, kVanishingComponent |p|_inf).
FluxEM em_from_flux(const MetricSource& g, std::span<const double> radii, int q = kDefaultQuadratureOrder);

/// Least-squares scale lambda with flux ~ lambda * moment vector.
double calibrate_lambda(const EMVector& flux, const EMVector& moments);

}  // namespace yamabe
