#pragma once

#include "yamabe/polycos.hpp"
#include "yamabe/rational.hpp"
#include "yamabe/series.hpp"

#include <Eigen/Dense>

#include <string_view>

namespace yamabe {

inline constexpr double kDefaultCausalTol = 1e-9;

enum class CausalClass { kZero, kTimelikeFuture, kTimelikePast, kNull, kSpacelike };

std::string_view to_string(CausalClass c);

/// Energy-momentum vector (p_0, p_1, ..., p_n) in R^{1,n}, eta = diag(+,-,...,-).
class EMVector {
 public:
  explicit EMVector(int n);
  explicit EMVector(Eigen::VectorXd components);

  int n() const { return static_cast<int>(p_.size()) - 1; }
  double operator[](int mu) const { return p_[mu]; }
  double& operator[](int mu) { return p_[mu]; }
  const Eigen::VectorXd& components() const { return p_; }
  Eigen::VectorXd spatial() const { return p_.tail(p_.size() - 1); }

  /// p_0^2 - sum_i p_i^2
  double eta_norm() const;

 private:
  Eigen::VectorXd p_;
};

/// Exact (int u0 sin, int u0 sin cos) over theta in [0, pi], i.e. the
/// integrals of u0(x) and x u0(x) over [-1, 1].
struct Moments {
  Rational mass;
  Rational dipole;
};

Moments moments(const PolyCos& u0);

/// lambda (I_0, 0, ..., 0, I_1). Throws std::invalid_argument for lambda <= 0.
EMVector em_vector(const SeriesSolution& sol, double lambda = 1.0);
EMVector em_vector(int n, const Rational& beta, const Rational& gamma, double lambda = 1.0);

/// ZERO if every |p_mu| <= tol; NULL if |eta(p,p)| <= tol |p|^2; otherwise by
/// the sign of eta(p,p) and of p_0.
CausalClass classify(const EMVector& p, double tol = kDefaultCausalTol);

/// Exact classification of (p0, p_spatial) given p0 and |p_spatial|^2.
CausalClass classify_exact(const Rational& p0, const Rational& spatial_norm_sq);

/// Exact causal class of the moment vector of u0 (lambda-independent).
CausalClass classify_moments(const PolyCos& u0);

/// Boost of rapidity phi in the (0, axis) plane, 1 <= axis <= n.
EMVector boost(const EMVector& p, double rapidity, int axis);

/// Applies an orthogonal n x n matrix to the spatial part. Throws
/// std::invalid_argument if the matrix is not orthogonal within tol.
EMVector rotate(const EMVector& p, const Eigen::MatrixXd& rotation, double tol = 1e-10);

/// Proper rotation in span{from, to} carrying unit vector `from` to unit
/// vector `to`; identity when they coincide.
Eigen::MatrixXd rotation_taking(const Eigen::VectorXd& from, const Eigen::VectorXd& to);

struct Realization {
  double beta = 0.0;
  double gamma = 0.0;
  Eigen::MatrixXd rotation;
};

/// Parameters (beta, gamma) and a spatial rotation R with
/// rotate(em_vector(beta, gamma, lambda), R) == target.
Realization realize_target(const EMVector& target, double lambda = 1.0);

}  // namespace yamabe
