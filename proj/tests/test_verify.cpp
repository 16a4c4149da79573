#include "support.hpp"
#include "yamabe/verify.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>

using namespace yamabe;

namespace {

Rational s2_direct(int q) {
  Rational acc = 0;
  for (int r = 0; r <= q; ++r) acc += Rational(1, static_cast<long>(r + 1) * (r + 1) * (q - r + 1) * (q - r + 1));
  return acc;
}

/// S_p(l) by the convolution recursion S_p = S_1 * S_{p-1}.
Rational sp_recursive(int p, int l) {
  if (p == 1) return Rational(1, static_cast<long>(l + 1) * (l + 1));
  Rational acc = 0;
  for (int j = 0; j <= l; ++j) acc += Rational(1, static_cast<long>(j + 1) * (j + 1)) * sp_recursive(p - 1, l - j);
  return acc;
}

}  // namespace

TEST_SUITE("verify") {
  TEST_CASE("closed form of the two-term convolution") {
    for (int q = 0; q <= 200; ++q) CHECK(s2_closed_form(q) == s2_direct(q));
    CHECK_THROWS_AS(s2_closed_form(-1), std::invalid_argument);
  }

  TEST_CASE("pi^2 lower bound is below pi^2") {
    CHECK(pi_squared_lower().get_d() < M_PI * M_PI);
    CHECK(M_PI * M_PI - pi_squared_lower().get_d() < 1e-3);
  }

  TEST_CASE("lemma sweeps pass on small ranges") {
    const BoundReport a1 = lemma_a1_check(200, 8);
    CHECK(a1.pass);
    CHECK(a1.worst_ratio <= 1.0);
    CHECK(a1.diagnostic("instances") > 0);
    const BoundReport a2 = lemma_a2_check(100, 8);
    CHECK(a2.pass);
    CHECK(std::isfinite(a2.diagnostic("c_hat")));
    CHECK(a2.sequence.size() == 101);
    const BoundReport a3 = lemma_a3_check(500);
    CHECK(a3.pass);
    CHECK(a3.worst_ratio <= 1.0);
    CHECK_THROWS_AS(a2.diagnostic("missing"), std::out_of_range);
  }

  TEST_CASE("A.2 maxima agree with direct binomials") {
    const BoundReport a2 = lemma_a2_check(30, 6);
    for (int p = 0; p <= 30; ++p) {
      double best = 0;
      for (int n = 3; n <= 6; ++n) best = std::max(best, std::fabs(gen_binomial(n, p).get_d()) * std::exp(-p));
      if (best > 0) CHECK(a2.sequence[static_cast<std::size_t>(p)] == doctest::Approx(best).epsilon(1e-10));
    }
  }

  TEST_CASE("S_p enumeration") {
    for (int p = 1; p <= 4; ++p)
      for (int l = 0; l <= 10; ++l) CHECK(sp_enumerate(p, l) == sp_recursive(p, l));
    for (int q = 0; q <= 20; ++q) CHECK(sp_enumerate(2, q) == s2_direct(q));
    CHECK_THROWS_AS(sp_enumerate(12, 60), std::length_error);
    const BoundReport sw = sp_sweep(4, 20);
    CHECK(sw.pass);
    CHECK(sp_convolution_check(3, 10).pass);
  }

  TEST_CASE("coefficient bound re-verification") {
    const SeriesSolution sol = solve_up_to(3, 1, 1, 40);
    const BoundReport rep = coefficient_bound_check(sol);
    CHECK(rep.pass);
    REQUIRE(rep.sequence.size() == 40);
    const double alpha = rep.diagnostic("alpha_hat");
    CHECK(alpha == doctest::Approx(rep.sequence.back()));
    for (std::size_t i = 1; i < rep.sequence.size(); ++i) CHECK(rep.sequence[i] >= rep.sequence[i - 1]);
    // direct check of the bound in floating point
    for (int k = 1; k <= 40; ++k) {
      const double lhs = one_norm(sol.coefficients[static_cast<std::size_t>(k)]).get_d() * (k + 1) * (k + 1);
      CHECK(std::log(lhs) <= k * std::log(alpha) + 1e-9);
    }
    CHECK(rep.diagnostic("ratio_finite") == 1.0);
  }

  TEST_CASE("Jensen inequality on positive data") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> ud(-1, 1);
    for (int trial = 0; trial < 30; ++trial) {
      // 2 + small perturbation stays positive on [-1, 1]
      std::vector<Rational> c{2};
      for (int i = 1; i <= 6; ++i) c.push_back(from_double(ud(rng) / 4));
      for (int n : {3, 4, 5}) {
        const BoundReport rep = jensen_check(PolyCos(c), n);
        CHECK(rep.pass);
        CHECK(rep.worst_ratio <= 1.0);
      }
    }
    // n = 3 closed form for beta + gamma x: (2 pi)^2 (2 gamma/3)^2 against (2 pi)^2 (2 beta)^2
    const BoundReport lin = jensen_check(PolyCos{3, 2}, 3);
    CHECK(lin.worst_ratio == doctest::Approx((16.0 / 9.0) / 36.0).epsilon(1e-12));
    CHECK_THROWS_AS(jensen_check(PolyCos{0, 1}, 3), std::invalid_argument);
    CHECK_THROWS_AS(jensen_check(PolyCos{Rational(1, 2), 1}, 3), std::invalid_argument);
    CHECK_THROWS_AS(jensen_check(PolyCos(), 3), std::invalid_argument);
  }
}
