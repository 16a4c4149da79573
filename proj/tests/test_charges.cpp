#include "yamabe/charges.hpp"
#include "yamabe/minkowski.hpp"

#include <doctest.h>

#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>

using namespace yamabe;

namespace {

using Vec3 = std::array<double, 3>;
using Field = std::function<double(const Vec3&)>;

double partial(const Field& f, Vec3 x, int i) {
  const double h = 1e-5 * (i == 0 ? x[0] : 1.0);
  Vec3 a = x, b = x;
  a[i] += h;
  b[i] -= h;
  Vec3 a2 = x, b2 = x;
  a2[i] += 2 * h;
  b2[i] -= 2 * h;
  return (-f(a2) + 8 * f(a) - 8 * f(b) + f(b2)) / (12 * h);
}

// Test perturbation e = P b_rr dr^2 + F r^2 sigma_2 on H^3 in (r, theta, phi).
double P_of(double r, double th) { return (0.3 + 0.5 * std::cos(th) + 0.2 * std::cos(th) * std::cos(th)) / (r * r * r); }
double F_of(double r, double th) { return (0.1 - 0.4 * std::cos(th)) / (r * r * r) + 0.05 / (r * r * r * r); }

double b_comp(int i, const Vec3& x) {
  const double r = x[0], sn = std::sin(x[1]);
  if (i == 0) return 1 / (1 + r * r);
  if (i == 1) return r * r;
  return r * r * sn * sn;
}

double e_comp(int i, const Vec3& x) {
  if (i == 0) return P_of(x[0], x[1]) * b_comp(0, x);
  return F_of(x[0], x[1]) * b_comp(i, x);
}

/// Christoffel symbol Gamma^l_{ij} of the diagonal metric b.
double christoffel(int l, int i, int j, const Vec3& x) {
  auto db = [&](int comp, int dir) { return partial([comp](const Vec3& y) { return b_comp(comp, y); }, x, dir); };
  const double gl = b_comp(l, x);
  double out = 0;
  if (l == i) out += db(l, j);
  if (l == j) out += db(l, i);
  if (i == j) out -= db(i, l);
  return out / (2 * gl);
}

/// Components (U(nu), U(e_theta), U(e_phi)) of V(div e - d tr e) - e(grad V) + tr(e) dV.
Vec3 flux_oracle(const Field& V, const Vec3& x) {
  auto tr = [](const Vec3& y) {
    double t = 0;
    for (int i = 0; i < 3; ++i) t += e_comp(i, y) / b_comp(i, y);
    return t;
  };
  Vec3 U{};
  for (int j = 0; j < 3; ++j) {
    double div = 0;
    for (int i = 0; i < 3; ++i) {
      // nabla_i e_{ij} for the diagonal tensor e
      double nab = i == j ? partial([i](const Vec3& y) { return e_comp(i, y); }, x, i) : 0.0;
      for (int l = 0; l < 3; ++l) {
        const double e_lj = l == j ? e_comp(j, x) : 0.0;
        const double e_il = l == i ? e_comp(i, x) : 0.0;
        nab -= christoffel(l, i, i, x) * e_lj + christoffel(l, i, j, x) * e_il;
      }
      div += nab / b_comp(i, x);
    }
    const double dV = partial(V, x, j);
    const double ejj_grad = partial(V, x, j) / b_comp(j, x) * e_comp(j, x);
    U[j] = V(x) * (div - partial(tr, x, j)) - ejj_grad + tr(x) * dV;
  }
  const double r = x[0], sn = std::sin(x[1]);
  return {std::sqrt(1 + r * r) * U[0], U[1] / r, U[2] / (r * sn)};
}

PerturbationJet test_jet(double r, double th) {
  const double h = 1e-6;
  PerturbationJet e;
  e.P = P_of(r, th);
  e.F = F_of(r, th);
  e.P_r = (P_of(r + h * r, th) - P_of(r - h * r, th)) / (2 * h * r);
  e.F_r = (F_of(r + h * r, th) - F_of(r - h * r, th)) / (2 * h * r);
  e.P_th = (P_of(r, th + h) - P_of(r, th - h)) / (2 * h);
  e.F_th = (F_of(r, th + h) - F_of(r, th - h)) / (2 * h);
  return e;
}

/// Delta_b of F(r, theta) Y with Y of the given fiber degree, from a ScalarJet.
double laplacian_oracle(const ScalarJet& j, double r, double th, int n, int degree) {
  const double q = 1 + r * r;
  const double ang = j.f_thth + (n - 2) * std::cos(th) / std::sin(th) * j.f_th -
                     degree * (n - 2) * j.f / (std::sin(th) * std::sin(th));
  return q * j.f_rr + ((n - 1) + n * r * r) / r * j.f_r + ang / (r * r);
}

}  // namespace

TEST_SUITE("charges") {
  TEST_CASE("L* of the constant function is minus the Ricci tensor") {
    const ScalarFunction one{[](double, double) {
                               ScalarJet j;
                               j.f = 1;
                               return j;
                             },
                             0};
    for (int n : {3, 4, 5, 6}) {
      const Eigen::MatrixXd m = lstar(one, {3.0, 1.2}, n);
      CHECK((m - (n - 1) * Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-13);
    }
  }

  TEST_CASE("static KIDs lie in the kernel of L*") {
    for (int n : {3, 4, 5}) {
      const auto kids = kid_basis(n);
      REQUIRE(kids.size() == static_cast<std::size_t>(n + 1));
      for (const auto& V : kids) {
        double worst = 0;
        for (int i = 0; i < 20; ++i) {
          for (int k = 0; k < 20; ++k) {
            const double r = 2.0 + 98.0 * i / 19.0;
            const double th = (k + 0.5) * M_PI / 20;
            worst = std::max(worst, lstar(V.function, {r, th}, n, 0.3).cwiseAbs().maxCoeff());
          }
        }
        CHECK(worst < 1e-10);
      }
    }
  }

  TEST_CASE("trace of L* matches an independent Laplacian") {
    const ScalarFunction f{[](double r, double th) {
                             ScalarJet j;
                             j.f = r * r * std::cos(th);
                             j.f_r = 2 * r * std::cos(th);
                             j.f_rr = 2 * std::cos(th);
                             j.f_th = -r * r * std::sin(th);
                             j.f_rth = -2 * r * std::sin(th);
                             j.f_thth = -r * r * std::cos(th);
                             return j;
                           },
                           1};
    for (int n : {3, 4, 5}) {
      const double r = 2.5, th = 0.9, y = 0.4;
      const ScalarJet j = f.radial(r, th);
      const double lap = y * laplacian_oracle(j, r, th, n, 1);
      const Eigen::MatrixXd m = lstar(f, {r, th}, n, y);
      CHECK(m.trace() == doctest::Approx(-(n - 1) * lap + n * (n - 1) * y * j.f).epsilon(1e-12));
      CHECK(m.cwiseAbs().maxCoeff() > 1e-3);
      CHECK((m - m.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    }
    CHECK_THROWS_AS(lstar(f, {1.0, 0.0}, 3), std::domain_error);
    CHECK_THROWS_AS(lstar(f, {1.0, 1.0}, 2), std::invalid_argument);
  }

  TEST_CASE("flux density matches a coordinate computation") {
    const auto kids = kid_basis(3);
    for (double r : {2.0, 7.0}) {
      for (double th : {0.6, 1.4, 2.5}) {
        const PerturbationJet e = test_jet(r, th);
        // V0 and V3 are fiber-independent
        for (int idx : {0, 3}) {
          const KID& V = kids[static_cast<std::size_t>(idx)];
          const Field vf = [&V](const Vec3& x) { return V.value(x[0], x[1]); };
          const Vec3 want = flux_oracle(vf, {r, th, 0.3});
          const FluxDensity got = flux_density(V, e, {r, th}, 3);
          const double scale = 1e-7 * (std::fabs(want[0]) + std::fabs(want[1]) + 1e-6);
          CHECK(std::fabs(got.normal - want[0]) < scale);
          CHECK(std::fabs(got.theta - want[1]) < scale);
          CHECK(std::fabs(got.fiber) < 1e-15);
        }
        // V1 = r sin(theta) cos(phi) at the fiber point where cos(phi) = y, sin(phi) < 0
        const double y = 0.35, phi = -std::acos(y);
        const Field v1 = [](const Vec3& x) { return x[0] * std::sin(x[1]) * std::cos(x[2]); };
        const Vec3 want = flux_oracle(v1, {r, th, phi});
        const FluxDensity got = flux_density(kids[1], e, {r, th}, 3, y);
        const double scale = 1e-7 * (std::fabs(want[0]) + std::fabs(want[1]) + std::fabs(want[2]) + 1e-6);
        CHECK(std::fabs(got.normal - want[0]) < scale);
        CHECK(std::fabs(got.theta - want[1]) < scale);
        CHECK(std::fabs(got.fiber - want[2]) < scale);
      }
    }
  }

  TEST_CASE("pure-trace perturbation gives (n-1) c dV") {
    for (int n : {3, 5}) {
      PerturbationJet e;
      e.P = e.F = 0.01;
      for (const auto& V : kid_basis(n)) {
        const double r = 4.0, th = 1.0;
        const ScalarJet j = V.function.radial(r, th);
        const FluxDensity u = flux_density(V, e, {r, th}, n, 0.5);
        const double y = V.function.fiber_degree ? 0.5 : 1.0;
        CHECK(u.normal == doctest::Approx((n - 1) * 0.01 * y * std::sqrt(1 + r * r) * j.f_r));
        CHECK(u.theta == doctest::Approx((n - 1) * 0.01 * y * j.f_th / r));
      }
    }
  }

  TEST_CASE("flux through spheres of b vanishes") {
    const HyperbolicMetric b(4);
    for (const auto& V : kid_basis(4)) {
      const FluxValue f = flux_integral(b, V, 30.0);
      CHECK(f.converged);
      CHECK(std::fabs(f.value) < 1e-12);
    }
  }

  TEST_CASE("Kottler flux is the sphere area times the constant density") {
    const KottlerMetric k(3, -1.0);
    const KID V0 = kid_basis(3)[0];
    for (double R : {10.0, 40.0}) {
      const FluxValue f = flux_integral(k, V0, R);
      const double dens = flux_density(V0, k.perturbation(R, 1.0), {R, 1.0}, 3).normal;
      CHECK(f.converged);
      CHECK(f.value == doctest::Approx(4 * M_PI * R * R * dens).epsilon(1e-12));
    }
    // F = 0 and P = (2m/R) / (1 + R^2 - 2m/R), so U(nu) = 2 V P sqrt(1+R^2)/R and
    // the flux is 16 pi m (1+R^2) / (1 + R^2 - 2m/R) -> 16 pi m.
    const std::vector<double> radii{20, 30, 40, 60, 80, 100};
    for (double m : {-1.0, -2.0}) {
      const FluxEM em = em_from_flux(KottlerMetric(3, m), radii);
      for (std::size_t i = 0; i < radii.size(); ++i) {
        const double R = radii[i];
        const double want = 16 * M_PI * m * (1 + R * R) / (1 + R * R - 2 * m / R);
        CHECK(em.reports[0].flux[i] == doctest::Approx(want).epsilon(1e-12));
      }
      // the 1/R^3 tail is outside the fitted model, so the limit is good to ~1e-4
      CHECK(em.p[0] == doctest::Approx(16 * M_PI * m).epsilon(1e-4));
      CHECK(classify(em.p) == CausalClass::kTimelikePast);
    }
  }

  TEST_CASE("series flux matches the extracted mass aspect") {
    // p_0 is the sphere integral of mu = kappa u_0, so lambda = 2 pi kappa at n = 3
    const SeriesSolution sol = solve_up_to(3, 1, 0, 20);
    const ConformalSeriesMetric g(sol);
    const std::vector<double> radii{20, 30, 40, 60, 80, 100};
    const FluxEM em = em_from_flux(g, radii);
    CHECK(em.converged());
    CHECK(std::fabs(em.p[3]) < 1e-8 * em.p[0]);
    std::vector<double> s_grid;
    for (int i = 0; i <= 16; ++i) s_grid.push_back(3.0 + 0.25 * i);
    const MassAspectFit mu = mass_aspect_extract(sol, s_grid, std::vector<double>{0.5, 1.5, 2.5});
    const double lambda = calibrate_lambda(em.p, em_vector(sol, 1.0));
    CHECK(lambda == doctest::Approx(2 * M_PI * mu.kappa).epsilon(1e-3));
  }

  TEST_CASE("extrapolation recovers an exact model") {
    const std::vector<double> radii{10, 15, 20, 30, 45, 70};
    std::vector<double> f;
    for (double R : radii) f.push_back(3.5 - 2.0 / R + 7.0 / (R * R));
    const FluxReport rep = extrapolate_flux("V0", radii, f);
    CHECK(rep.limit == doctest::Approx(3.5).epsilon(1e-12));
    CHECK(rep.coeff_inv_r == doctest::Approx(-2.0).epsilon(1e-9));
    CHECK(rep.coeff_inv_r2 == doctest::Approx(7.0).epsilon(1e-8));
    CHECK(rep.fit_residual < 1e-12);
    CHECK(rep.stable);
    const std::vector<double> few{1, 2, 3, 4};
    CHECK_THROWS_AS(extrapolate_flux("V0", few, few), std::invalid_argument);
    const std::vector<double> unsorted{1, 3, 2, 4, 5};
    CHECK_THROWS_AS(extrapolate_flux("V0", unsorted, unsorted), std::invalid_argument);
  }

  TEST_CASE("lambda calibration") {
    EMVector m(3), f(3);
    m[0] = 2;
    m[3] = 0.5;
    f[0] = 6;
    f[3] = 1.5;
    CHECK(calibrate_lambda(f, m) == doctest::Approx(3.0));
    CHECK_THROWS_AS(calibrate_lambda(f, EMVector(3)), std::invalid_argument);
  }

  TEST_CASE("fiber harmonic integrates to zero") {
    for (int n : {3, 4, 5, 6}) CHECK(std::fabs(fiber_harmonic_integral(n)) < 1e-14);
  }
}
