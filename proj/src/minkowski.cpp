#include "yamabe/minkowski.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace yamabe {

std::string_view to_string(CausalClass c) {
  switch (c) {
    case CausalClass::kZero: return "ZERO";
    case CausalClass::kTimelikeFuture: return "TIMELIKE_FUTURE";
    case CausalClass::kTimelikePast: return "TIMELIKE_PAST";
    case CausalClass::kNull: return "NULL";
    case CausalClass::kSpacelike: return "SPACELIKE";
  }
  return "UNKNOWN";
}

EMVector::EMVector(int n) : p_(Eigen::VectorXd::Zero(n + 1)) {
  if (n < 1) throw std::invalid_argument("EMVector needs n >= 1");
}

EMVector::EMVector(Eigen::VectorXd components) : p_(std::move(components)) {
  if (p_.size() < 2) throw std::invalid_argument("EMVector needs at least two components");
  if (!p_.allFinite()) throw std::invalid_argument("EMVector components must be finite");
}

double EMVector::eta_norm() const {
  const auto s = spatial();
  return p_[0] * p_[0] - s.squaredNorm();
}

Moments moments(const PolyCos& u0) {
  // int_{-1}^{1} x^m dx = 2/(m+1) for even m, 0 for odd m.
  Moments out{0, 0};
  for (int i = 0; i <= u0.degree(); ++i) {
    const Rational& c = u0.coefficients()[static_cast<std::size_t>(i)];
    if (i % 2 == 0) out.mass += c * Rational(2, i + 1);
    if ((i + 1) % 2 == 0) out.dipole += c * Rational(2, i + 2);
  }
  return out;
}

EMVector em_vector(int n, const Rational& beta, const Rational& gamma, double lambda) {
  if (!(lambda > 0)) throw std::invalid_argument("lambda must be positive");
  const auto m = moments(PolyCos::linear(beta, gamma));
  EMVector p(n);
  p[0] = lambda * to_double(m.mass);
  p[n] = lambda * to_double(m.dipole);
  return p;
}

EMVector em_vector(const SeriesSolution& sol, double lambda) {
  if (!(lambda > 0)) throw std::invalid_argument("lambda must be positive");
  const auto m = moments(sol.u0());
  EMVector p(sol.n);
  p[0] = lambda * to_double(m.mass);
  p[sol.n] = lambda * to_double(m.dipole);
  return p;
}

CausalClass classify(const EMVector& p, double tol) {
  if (tol < 0) throw std::invalid_argument("tolerance must be >= 0");
  const auto& c = p.components();
  if (c.cwiseAbs().maxCoeff() <= tol) return CausalClass::kZero;
  const double eta = p.eta_norm();
  if (std::fabs(eta) <= tol * c.squaredNorm()) return CausalClass::kNull;
  if (eta < 0) return CausalClass::kSpacelike;
  return p[0] > 0 ? CausalClass::kTimelikeFuture : CausalClass::kTimelikePast;
}

CausalClass classify_exact(const Rational& p0, const Rational& spatial_norm_sq) {
  if (sgn(p0) == 0 && sgn(spatial_norm_sq) == 0) return CausalClass::kZero;
  const int s = sgn(p0 * p0 - spatial_norm_sq);
  if (s == 0) return CausalClass::kNull;
  if (s < 0) return CausalClass::kSpacelike;
  return sgn(p0) > 0 ? CausalClass::kTimelikeFuture : CausalClass::kTimelikePast;
}

CausalClass classify_moments(const PolyCos& u0) {
  const auto m = moments(u0);
  return classify_exact(m.mass, m.dipole * m.dipole);
}

EMVector boost(const EMVector& p, double rapidity, int axis) {
  if (axis < 1 || axis > p.n())
    throw std::invalid_argument("boost axis must lie in 1..n, got " + std::to_string(axis));
  EMVector out = p;
  const double ch = std::cosh(rapidity);
  const double sh = std::sinh(rapidity);
  out[0] = ch * p[0] + sh * p[axis];
  out[axis] = sh * p[0] + ch * p[axis];
  return out;
}

EMVector rotate(const EMVector& p, const Eigen::MatrixXd& rotation, double tol) {
  const int n = p.n();
  if (rotation.rows() != n || rotation.cols() != n)
    throw std::invalid_argument("rotation must be n x n");
  const double defect = (rotation.transpose() * rotation - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
  if (defect > tol) throw std::invalid_argument("rotation is not orthogonal");
  Eigen::VectorXd c(n + 1);
  c[0] = p[0];
  c.tail(n) = rotation * p.spatial();
  return EMVector(std::move(c));
}

Eigen::MatrixXd rotation_taking(const Eigen::VectorXd& from, const Eigen::VectorXd& to) {
  const auto n = from.size();
  Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
  const Eigen::VectorXd a = from.normalized();
  const Eigen::VectorXd b = to.normalized();
  const double c = std::clamp(a.dot(b), -1.0, 1.0);
  if (c > 1.0 - 1e-15) return id;

  // Unit vector orthogonal to a inside span{a, b}; any orthogonal direction
  // when b = -a.
  Eigen::VectorXd w = b - c * a;
  if (w.norm() < 1e-12) {
    Eigen::Index k = 0;
    a.cwiseAbs().minCoeff(&k);
    w = Eigen::VectorXd::Unit(n, k) - a[k] * a;
  }
  w.normalize();
  const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
  const double cos_t = c;
  const double sin_t = (b - c * a).norm() < 1e-12 ? 0.0 : s;
  return id + sin_t * (w * a.transpose() - a * w.transpose()) +
         (cos_t - 1.0) * (a * a.transpose() + w * w.transpose());
}

Realization realize_target(const EMVector& target, double lambda) {
  if (!(lambda > 0)) throw std::invalid_argument("lambda must be positive");
  const int n = target.n();
  const Eigen::VectorXd spatial = target.spatial();
  const double norm = spatial.norm();
  Realization out;
  out.beta = target[0] / (2.0 * lambda);
  out.gamma = 3.0 * norm / (2.0 * lambda);
  if (norm == 0.0) {
    out.rotation = Eigen::MatrixXd::Identity(n, n);
  } else {
    out.rotation = rotation_taking(Eigen::VectorXd::Unit(n, n - 1), spatial / norm);
  }
  return out;
}

}  // namespace yamabe
