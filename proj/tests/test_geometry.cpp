#include "yamabe/geometry.hpp"
#include "yamabe/parallel.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <stdexcept>

using namespace yamabe;

namespace {

/// Checks the first derivatives stored in a jet against centered differences.
void check_jet_derivatives(const MetricSource& g, real_t r, real_t th) {
  const real_t hr = 1e-5L * r, ht = 1e-5L;
  const MetricJet j = g.jet(r, th);
  const MetricJet rp = g.jet(r + hr, th), rm = g.jet(r - hr, th);
  const MetricJet tp = g.jet(r, th + ht), tm = g.jet(r, th - ht);
  auto near = [](real_t got, real_t want, real_t scale) {
    CHECK(static_cast<double>(std::fabs(got - want)) <= 1e-7 * static_cast<double>(scale));
  };
  near(j.grr_r, (rp.grr - rm.grr) / (2 * hr), std::fabs(j.grr) / r + 1e-12L);
  near(j.gthth_r, (rp.gthth - rm.gthth) / (2 * hr), std::fabs(j.gthth) / r);
  near(j.gww_r, (rp.gww - rm.gww) / (2 * hr), std::fabs(j.gww) / r);
  near(j.grr_th, (tp.grr - tm.grr) / (2 * ht), std::fabs(j.grr));
  near(j.gthth_th, (tp.gthth - tm.gthth) / (2 * ht), std::fabs(j.gthth));
  near(j.gww_th, (tp.gww - tm.gww) / (2 * ht), std::fabs(j.gthth));
}

/// Fourth-order finite-difference Laplacian of eval_u in the (r, theta) chart.
double fd_laplacian_of_eval_u(const SeriesSolution& sol, double r, double th) {
  const double hr = 1e-3 * r, ht = 1e-3;
  auto u = [&](double rr, double tt) { return eval_u(sol, rr, tt) - 1.0; };
  auto d1 = [](double fm2, double fm1, double fp1, double fp2, double h) {
    return (fm2 - 8 * fm1 + 8 * fp1 - fp2) / (12 * h);
  };
  auto d2 = [](double fm2, double fm1, double f0, double fp1, double fp2, double h) {
    return (-fm2 + 16 * fm1 - 30 * f0 + 16 * fp1 - fp2) / (12 * h * h);
  };
  const double u0 = u(r, th);
  const double ur = d1(u(r - 2 * hr, th), u(r - hr, th), u(r + hr, th), u(r + 2 * hr, th), hr);
  const double urr = d2(u(r - 2 * hr, th), u(r - hr, th), u0, u(r + hr, th), u(r + 2 * hr, th), hr);
  const double ut = d1(u(r, th - 2 * ht), u(r, th - ht), u(r, th + ht), u(r, th + 2 * ht), ht);
  const double utt = d2(u(r, th - 2 * ht), u(r, th - ht), u0, u(r, th + ht), u(r, th + 2 * ht), ht);
  const int n = sol.n;
  return (1 + r * r) * urr + ((n - 1) + n * r * r) / r * ur +
         (utt + (n - 2) * std::cos(th) / std::sin(th) * ut) / (r * r);
}

}  // namespace

TEST_SUITE("geometry") {
  TEST_CASE("chart round trips") {
    for (double r : {0.01, 0.7, 3.0, 50.0, 1e4}) {
      const ChartPoint p{r, 1.0};
      CHECK(std::fabs(ChartPoint::from_s(p.s(), 1.0).r - r) <= 1e-14 * r);
      CHECK(std::fabs(ChartPoint::from_rho(p.rho(), 1.0).r - r) <= 1e-14 * r);
      CHECK(std::fabs(std::sinh(p.s()) - r) <= 1e-14 * r);
      CHECK(std::fabs(1.0 / std::sinh(p.rho()) - r) <= 1e-14 * r);
    }
  }

  TEST_CASE("hyperbolic metric components") {
    for (int n : {3, 4, 6}) {
      const MetricJet j = hyperbolic_metric({2.0, 0.7}, n);
      CHECK(static_cast<double>(j.grr) == doctest::Approx(1.0 / 5.0));
      CHECK(static_cast<double>(j.gthth) == doctest::Approx(4.0));
      CHECK(static_cast<double>(j.gww) == doctest::Approx(4.0 * std::sin(0.7) * std::sin(0.7)));
      CHECK(j.positive_definite());
    }
  }

  TEST_CASE("Kottler with m = 0 is exactly hyperbolic") {
    for (int n : {3, 4, 5}) {
      const KottlerMetric k(n, 0.0);
      const HyperbolicMetric b(n);
      for (real_t r : {0.5L, 2.0L, 40.0L}) {
        const MetricJet a = k.jet(r, 1.1L), c = b.jet(r, 1.1L);
        CHECK(a.grr == c.grr);
        CHECK(a.grr_r == c.grr_r);
        CHECK(a.gthth == c.gthth);
        CHECK(a.gww == c.gww);
        const PerturbationJet e = k.perturbation(r, 1.1L);
        CHECK(e.P == 0);
        CHECK(e.F == 0);
      }
    }
  }

  TEST_CASE("Kottler horizon and positivity") {
    const KottlerMetric k(3, 1.0);
    CHECK_THROWS_AS(k.jet(1.0L, 1.0L), std::domain_error);
    CHECK_THROWS_AS(k.jet(0.3L, 1.0L), std::domain_error);
    CHECK(k.jet(5.0L, 1.0L).positive_definite());
    const KottlerMetric neg(4, -1.0);
    CHECK(neg.jet(0.2L, 1.0L).positive_definite());
  }

  TEST_CASE("stored jet derivatives match finite differences") {
    const SeriesSolution sol = solve_up_to(3, 1, 1, 10);
    const ConformalSeriesMetric conf(sol);
    const KottlerMetric kot(4, -0.7);
    const HyperbolicMetric hyp(5);
    const InterpolatedMetric mix(hyp, KottlerMetric(5, 0.2), Cutoff::smoothstep(3, 6));
    for (real_t r : {3.0L, 4.5L, 9.0L}) {
      for (real_t th : {0.4L, 1.5L, 2.6L}) {
        check_jet_derivatives(conf, r, th);
        check_jet_derivatives(kot, r, th);
        check_jet_derivatives(hyp, r, th);
        check_jet_derivatives(mix, r, th);
      }
    }
  }

  TEST_CASE("analytic perturbations agree with differenced jets") {
    const KottlerMetric kot(3, -0.4);
    const ConformalSeriesMetric conf(solve_up_to(4, 2, 1, 8));
    for (const MetricSource* g : {static_cast<const MetricSource*>(&kot), static_cast<const MetricSource*>(&conf)}) {
      const PerturbationJet a = g->perturbation(6.0L, 0.9L);
      const PerturbationJet b = g->MetricSource::perturbation(6.0L, 0.9L);
      CHECK(static_cast<double>(a.P) == doctest::Approx(static_cast<double>(b.P)).epsilon(1e-9));
      CHECK(static_cast<double>(a.F) == doctest::Approx(static_cast<double>(b.F)).epsilon(1e-9));
      CHECK(static_cast<double>(a.P_r) == doctest::Approx(static_cast<double>(b.P_r)).epsilon(1e-8));
      CHECK(static_cast<double>(a.F_th) == doctest::Approx(static_cast<double>(b.F_th)).epsilon(1e-8).scale(1e-9));
    }
  }

  TEST_CASE("term-wise Laplacian against two finite-difference oracles") {
    for (int n : {3, 4, 5}) {
      const SeriesSolution sol = solve_up_to(n, 1, 1, 12);
      for (double r : {2.0, 5.0, 20.0}) {
        for (double th : {0.5, 1.3, 2.4}) {
          const double exact = laplacian_termwise(sol, {r, th});
          CHECK(fd_laplacian_of_eval_u(sol, r, th) == doctest::Approx(exact).epsilon(1e-6));
          CHECK(fd_laplacian_oracle(sol, {r, th}, 1e-5) == doctest::Approx(exact).epsilon(1e-6));
        }
      }
    }
    const SeriesSolution sol = solve_up_to(3, 1, 1, 4);
    CHECK_THROWS_AS(fd_laplacian_oracle(sol, {5.0, 1e-7}, 1e-5), std::domain_error);
  }

  TEST_CASE("Yamabe residual shrinks with r and with K") {
    const SeriesSolution s10 = solve_up_to(3, 1, 1, 10);
    const SeriesSolution s20 = solve_up_to(3, 1, 1, 20);
    CHECK(yamabe_residual(s10, {40.0, 1.0}) < yamabe_residual(s10, {20.0, 1.0}));
    CHECK(yamabe_residual(s20, {20.0, 1.0}) < yamabe_residual(s10, {20.0, 1.0}));
    // the first omitted order is r^-(n+K+1) with a nonzero coefficient
    const double ratio = yamabe_residual(s10, {80.0, 1.0}) / yamabe_residual(s10, {40.0, 1.0});
    CHECK(std::log2(ratio) == doctest::Approx(-14.0).epsilon(0.05));
  }

  TEST_CASE("decay fit is independent of the thread count") {
    const SeriesSolution sol = solve_up_to(3, 1, 1, 8);
    const auto grid = interior_theta_grid(6);
    setenv("YAMABE_THREADS", "1", 1);
    const DecayFit one = fit_residual_decay(sol, 20, 200, 8, grid);
    unsetenv("YAMABE_THREADS");
    const DecayFit many = fit_residual_decay(sol, 20, 200, 8, grid);
    CHECK(one.residuals == many.residuals);
    CHECK(one.slope == many.slope);
    CHECK(one.slope < -11);
  }

  TEST_CASE("scalar curvature oracle") {
    for (int n : {3, 4, 5}) {
      const HyperbolicMetric b(n);
      const KottlerMetric k(n, 0.3);
      for (real_t r : {2.0L, 10.0L}) {
        const double want = -n * (n - 1.0);
        CHECK(static_cast<double>(scalar_curvature_fd(b, r, 1.0L)) == doctest::Approx(want).epsilon(1e-8));
        CHECK(static_cast<double>(scalar_curvature_fd(k, r, 0.6L)) == doctest::Approx(want).epsilon(1e-7));
      }
    }
    // conformal change: R_g = u^-(n+2)/(n-2) (-4(n-1)/(n-2) Delta_b u - n(n-1) u)
    for (int n : {3, 4}) {
      const SeriesSolution sol = solve_up_to(n, 1, 1, 2);
      const ConformalSeriesMetric g(sol);
      for (double r : {3.0, 6.0}) {
        const double th = 0.8;
        const double u = eval_u(sol, r, th);
        const double lap = laplacian_termwise(sol, {r, th});
        const double want =
            std::pow(u, -(n + 2.0) / (n - 2.0)) * (-4.0 * (n - 1) / (n - 2) * lap - n * (n - 1.0) * u);
        CHECK(static_cast<double>(scalar_curvature_fd(g, r, th)) == doctest::Approx(want).epsilon(1e-7));
      }
    }
  }

  TEST_CASE("mean curvature of coordinate spheres") {
    for (int n : {3, 4, 5}) {
      const HyperbolicMetric b(n);
      const KottlerMetric k(n, -0.5);
      for (double s : {0.5, 2.0, 6.0}) {
        CHECK(mean_curvature_sphere(b, s, 1.0) == doctest::Approx((n - 1) / std::tanh(s)).epsilon(1e-12));
        const double r = std::sinh(s);
        const double lapse = std::sqrt(1 + 1.0 / std::pow(r, n - 2) + r * r);
        CHECK(mean_curvature_sphere(k, s, 1.0) == doctest::Approx((n - 1) * lapse / r).epsilon(1e-12));
      }
    }
    CHECK_THROWS_AS(mean_curvature_sphere(HyperbolicMetric(3), 0.0, 1.0), std::invalid_argument);
  }

  TEST_CASE("mass aspect of Kottler is 2(n-1) m") {
    std::vector<double> s_grid;
    for (int i = 0; i <= 16; ++i) s_grid.push_back(3.0 + 0.25 * i);
    const auto th = interior_theta_grid(5);
    for (int n : {3, 4}) {
      const KottlerMetric k(n, -0.25);
      const MassAspectFit fit = mass_aspect_extract(k, s_grid, th, PolyCos::constant(1));
      CHECK(fit.kappa == doctest::Approx(2.0 * (n - 1) * -0.25).epsilon(1e-4));
      CHECK_FALSE(fit.flagged);
      CHECK(fit.theta.size() == th.size());
    }
  }

  TEST_CASE("cutoff shape") {
    const Cutoff chi = Cutoff::smoothstep(2, 5);
    CHECK(chi.value(1.0L) == 0);
    CHECK(chi.value(2.0L) == 0);
    CHECK(chi.value(5.0L) == 1);
    CHECK(chi.value(9.0L) == 1);
    CHECK(static_cast<double>(chi.value(3.5L)) == doctest::Approx(0.5));
    real_t prev = 0;
    for (int i = 0; i <= 60; ++i) {
      const real_t r = 1.5L + i * 0.07L;
      const real_t v = chi.value(r);
      CHECK(v >= prev);
      prev = v;
      const real_t h = 1e-6L;
      CHECK(static_cast<double>(chi.derivative(r)) ==
            doctest::Approx(static_cast<double>((chi.value(r + h) - chi.value(r - h)) / (2 * h))).epsilon(1e-6).scale(1e-6));
    }
    CHECK(Cutoff::constant(0.3).value(100.0L) == doctest::Approx(0.3));
    CHECK(Cutoff::constant(0.3).derivative(1.0L) == 0);
    CHECK_THROWS(Cutoff::smoothstep(5, 2));
  }

  TEST_CASE("interpolating a metric with itself changes nothing") {
    const HyperbolicMetric b(3);
    const auto th = interior_theta_grid(4);
    const std::vector<double> radii{8, 10, 12, 14};
    const InterpolationReport rep = interpolation_residual(b, b, Cutoff::smoothstep(9, 13), radii, th);
    CHECK(rep.max_deviation < 1e-10);
    CHECK(rep.scalar_curvature.size() == radii.size() * th.size());
    const KottlerMetric inner(3, 1.0);
    const std::vector<double> bad{0.5, 3.0};
    CHECK_THROWS_AS(interpolation_residual(inner, b, Cutoff::smoothstep(1, 2), bad, th), std::domain_error);
  }

  TEST_CASE("conformal metric validity region") {
    // u = 1 - 10/r^3 drops below 1/2 inside r = 20^(1/3)
    const SeriesSolution sol = solve_up_to(3, -10, 0, 0);
    const ConformalSeriesMetric g(sol);
    CHECK_THROWS_AS(g.jet(2.0L, 1.0L), std::domain_error);
    CHECK_NOTHROW(g.jet(2.8L, 1.0L));
    CHECK(g.jet(20.0L, 1.0L).positive_definite());
  }

  TEST_CASE("interior theta grid") {
    const auto g = interior_theta_grid(4);
    REQUIRE(g.size() == 4);
    CHECK(g.front() == doctest::Approx(M_PI / 8));
    CHECK(g.back() == doctest::Approx(7 * M_PI / 8));
  }
}
