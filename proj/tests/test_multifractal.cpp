#include <doctest.h>

#include <cmath>

#include "rsflat/multifractal.hpp"
#include "rsflat/sweeps.hpp"

using namespace rsflat;

TEST_CASE("eta closed form") {
  CHECK(eta_closed_form(1.0, 4.0) == doctest::Approx(3.0));
  CHECK(eta_closed_form(1.0, 8.0) == doctest::Approx(5.0));
  for (double eps : {1e-3, 1e-6, 1e-9}) {
    CHECK(std::abs(eta_closed_form(0.8, 4.0 - eps) - eta_closed_form(0.8, 4.0 + eps)) <
          10.0 * eps);
  }
  CHECK_THROWS_AS(eta_closed_form(0.5, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(eta_closed_form(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("eta concavity in p") {
  const EtaCurve eta = eta_curve_closed_form(1.1);
  for (std::size_t i = 2; i < eta.p_grid.size(); ++i) {
    const double p0 = eta.p_grid[i - 2], p1 = eta.p_grid[i - 1], p2 = eta.p_grid[i];
    const double interp =
        eta.eta[i - 2] + (eta.eta[i] - eta.eta[i - 2]) * (p1 - p0) / (p2 - p0);
    CHECK(eta.eta[i - 1] >= interp - 1e-9);
  }
}

TEST_CASE("spectrum closed form at s=1") {
  const MultifractalSpectrum spec = spectrum_closed_form(1.0, {0.75, 0.5, 0.9, 1.5, 0.6});
  // alphas are sorted on construction: 0.5, 0.6, 0.75, 0.9, 1.5
  CHECK(spec.d_values[0] == doctest::Approx(0.0));   // left endpoint
  CHECK(spec.d_values[1] == doctest::Approx(0.4));
  CHECK(spec.d_values[2] == doctest::Approx(1.0));
  CHECK(spec.d_values[3] == dim_minus_infinity);
  CHECK(spec.d_values[4] == doctest::Approx(0.0));   // isolated point 2s - 1/2
}

TEST_CASE("numeric Legendre transform") {
  const EtaCurve eta = eta_curve_closed_form(1.0);
  SUBCASE("interior values") {
    const MultifractalSpectrum spec = legendre_transform(eta, {0.6, 0.75});
    CHECK(std::abs(spec.d_values[0] - 0.4) < 1e-3);
    CHECK(std::abs(spec.d_values[1] - 1.0) < 1e-3);
  }
  SUBCASE("divergence below the spectrum support") {
    const MultifractalSpectrum spec = legendre_transform(eta, {0.4});
    CHECK(spec.d_values[0] == dim_minus_infinity);
  }
  SUBCASE("grid preconditions") {
    EtaCurve short_grid = eta_curve_closed_form(1.0, 0.01, 30.0);
    CHECK_THROWS_AS(legendre_transform(short_grid, {0.6}), std::invalid_argument);
    CHECK_THROWS_AS(legendre_transform(eta, {}), std::invalid_argument);
  }
}

TEST_CASE("formalism check across s") {
  for (double s : {0.6, 0.8, 1.0, 1.25, 1.5, 2.0}) {
    const FormalismReport rep = formalism_check(s);
    CHECK(rep.pass);
    CHECK(rep.max_abs_deviation < 1e-3);
  }
  // s=2: pass on [1.5, 1.75]
  const FormalismReport rep = formalism_check(2.0);
  CHECK(rep.alphas.front() == doctest::Approx(1.5));
  CHECK(rep.alphas.back() == doctest::Approx(1.75));
}

TEST_CASE("structure-function exponent xi agrees with zeta only below s = 5/4") {
  // xi_p from a dyadic S_p sweep; zeta_p = eta_s(p) from the closed form.
  auto xi_hat = [](double s, double p) {
    SfSweepOptions opt;
    opt.margin = 16.0;
    const SfCurve sc =
        sf_sweep(s, p, geometric_ells(std::ldexp(1.0, -5), std::ldexp(1.0, -13), 2.0), opt);
    return p * fit_power_law(sc.curve).slope;
  };
  // rough regime: the two exponents coincide
  CHECK(std::abs(xi_hat(1.0, 2.0) - eta_closed_form(1.0, 2.0)) <= 0.1);
  // smooth regime s=2: S^{1/2} ~ ell so xi_2 ~ 2, while zeta_2 = 2(s-1/4) = 3.5.
  // The Besov exponent describes the derivative's increments there, not R_s's.
  const double xi = xi_hat(2.0, 2.0);
  const double zeta = eta_closed_form(2.0, 2.0);
  CHECK(zeta == doctest::Approx(3.5));
  CHECK(std::abs(xi - 2.0) <= 0.1);
  CHECK(zeta - xi > 1.0);
}

TEST_CASE("eta estimation from block norms") {
  SUBCASE("s-shift property at p=2") {
    const double delta = 0.1;
    const SeriesSpec a{1.0, 1024}, b{1.0 + delta, 1024};
    const double ea = eta_estimate(a, 2.0, 4, 3, 9);
    const double eb = eta_estimate(b, 2.0, 4, 3, 9);
    CHECK(std::abs((eb - ea) - 2.0 * delta) <= 0.05);
  }
  SUBCASE("s=1, p=2 lands near the closed form") {
    const SeriesSpec spec{1.0, 1024};  // covers freq 4^10
    CHECK(std::abs(eta_estimate(spec, 2.0, 4, 3, 9) - 1.5) <= 0.1);
  }
  SUBCASE("needs at least 4 blocks") {
    CHECK_THROWS_AS(eta_estimate(SeriesSpec{1.0, 64}, 2.0, 2, 3, 5),
                    insufficient_data_error);
  }
  SUBCASE("blocks must fit in the truncation") {
    CHECK_THROWS_AS(eta_estimate(SeriesSpec{1.0, 16}, 2.0, 4, 3, 8),
                    out_of_range_error);
  }
}
