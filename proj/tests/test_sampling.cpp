#include <doctest.h>

#include <cmath>

#include "rsflat/sampling.hpp"

using namespace rsflat;

TEST_CASE("sampling a single mode") {
  const SampleGrid g = sample(zalcwasser_coefficients(1), 8);
  REQUIRE(g.values.size() == 8);
  for (int j = 0; j < 8; ++j) {
    const double phase = 2.0 * M_PI * j / 8.0;
    CHECK(std::abs(g.values[j] - cplx{std::cos(phase), std::sin(phase)}) < 1e-12);
    CHECK(std::abs(g.values[j]) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("sampling the empty set gives zeros") {
  const SampleGrid g = sample(CoefficientSet{}, 16);
  for (const cplx& v : g.values) CHECK(std::abs(v) == 0.0);
}

TEST_CASE("sampling matches direct evaluation") {
  const CoefficientSet c = riemann_coefficients(SeriesSpec{1.0, 8});
  const SampleGrid g = sample(c, 256);
  double worst = 0.0;
  for (int j = 0; j < 256; ++j)
    worst = std::max(worst, std::abs(g.values[j] - direct_eval(c, j / 256.0)));
  CHECK(worst < 1e-10);
}

TEST_CASE("aliasing guard") {
  const CoefficientSet c = zalcwasser_coefficients(4);  // lambda = 16
  CHECK_THROWS_AS(sample(c, 32), aliasing_error);
  CHECK_NOTHROW(sample(c, 33));
}

TEST_CASE("lp_norm on grids") {
  SUBCASE("Plancherel: ||K_16||_2 = 4") {
    const QuadratureReport rep = lp_norm(zalcwasser_coefficients(16), 2.0);
    CHECK(rep.certified_exact);
    CHECK(rep.value == doctest::Approx(4.0).epsilon(1e-12));
  }
  SUBCASE("||K_2||_4^4 = 6 by counting") {
    const QuadratureReport rep = lp_norm(zalcwasser_coefficients(2), 4.0);
    CHECK(rep.certified_exact);
    CHECK(std::pow(rep.value, 4.0) == doctest::Approx(6.0).epsilon(1e-12));
    CHECK(rep.value == doctest::Approx(l4_exact_counting(2)).epsilon(1e-12));
  }
  SUBCASE("constant function has norm 1 for every p") {
    const CoefficientSet one =
        CoefficientSet::from_entries({{0, cplx{1.0, 0.0}}});
    for (double p : {0.5, 2.0, 3.0, 7.5})
      CHECK(lp_norm(one, p).value == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(lp_norm(one, p_infinity).value == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("p = infinity is a max over samples") {
    const QuadratureReport rep = lp_norm(zalcwasser_coefficients(1), p_infinity);
    CHECK(rep.value == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_FALSE(rep.certified_exact);
  }
  SUBCASE("invalid p") {
    CHECK_THROWS_AS(lp_norm(zalcwasser_coefficients(2), 0.0), std::invalid_argument);
    CHECK_THROWS_AS(lp_norm(zalcwasser_coefficients(2), -2.0), std::invalid_argument);
  }
}

TEST_CASE("certification and refinement reporting") {
  const CoefficientSet c = riemann_coefficients(SeriesSpec{1.0, 6});
  SUBCASE("even p certified, no refinement") {
    const QuadratureReport rep = lp_norm(c, 4.0);
    CHECK(rep.certified_exact);
    CHECK(rep.refinement_levels == 0);
  }
  SUBCASE("non-even p refines and reports") {
    const QuadratureReport rep = lp_norm(c, 3.0);
    CHECK_FALSE(rep.certified_exact);
    CHECK(rep.refinement_levels >= 1);
    CHECK(rep.relative_change_last < 1e-7);
  }
  SUBCASE("adaptive mode on even p still converges to the certified value") {
    GridPolicy adaptive;
    adaptive.mode = GridPolicy::Mode::adaptive;
    const double exact_val = lp_norm(c, 4.0).value;
    const double adapt_val = lp_norm(c, 4.0, adaptive).value;
    CHECK(adapt_val == doctest::Approx(exact_val).epsilon(1e-10));
  }
  SUBCASE("grid cap") {
    GridPolicy tiny;
    tiny.max_points = 1024;
    CHECK_THROWS_AS(lp_norm(riemann_coefficients(SeriesSpec{1.0, 64}), 4.0, tiny),
                    grid_too_large_error);
  }
}

TEST_CASE("l2_exact") {
  CHECK(l2_exact(zalcwasser_coefficients(9)) == doctest::Approx(3.0).epsilon(1e-14));
  long double sum = 0.0L;
  for (int n = 1; n <= 12; ++n) sum += powl(static_cast<long double>(n), -4.0L * 0.8L);
  CHECK(l2_exact(riemann_coefficients(SeriesSpec{0.8, 12})) ==
        doctest::Approx(std::sqrt(static_cast<double>(sum))).epsilon(1e-13));
}

TEST_CASE("l4 exact counting oracle") {
  CHECK(l4_exact_counting(1) == doctest::Approx(1.0));
  CHECK(std::pow(l4_exact_counting(2), 4.0) == doctest::Approx(6.0));
  for (int n : {2, 4, 8, 16}) {
    const double quad = lp_norm(zalcwasser_coefficients(n), 4.0).value;
    CHECK(std::abs(l4_exact_counting(n) - quad) < 1e-9);
  }
  CHECK_THROWS_AS(l4_exact_counting(65), oracle_cap_error);
  CHECK_NOTHROW(l4_exact_counting(65, 128));
}
