#include <doctest.h>

#include <cmath>

#include "rsflat/filters.hpp"
#include "rsflat/fitting.hpp"
#include "rsflat/sampling.hpp"
#include "rsflat/sweeps.hpp"

using namespace rsflat;

TEST_CASE("band filter") {
  const CoefficientSet c = riemann_coefficients(SeriesSpec{1.0, 4});
  SUBCASE("[0, inf) is the identity") {
    const CoefficientSet full = band_filter(c, FilterBand{});
    CHECK(full.size() == c.size());
  }
  SUBCASE("band beyond the top frequency empties the set") {
    const CoefficientSet none = band_filter(c, FilterBand{c.lambda() + 1, band_unbounded});
    CHECK(none.empty());
  }
  SUBCASE("K_4 restricted to [4, 10)") {
    const CoefficientSet mid = band_filter(zalcwasser_coefficients(4), FilterBand{4, 10});
    REQUIRE(mid.size() == 2);
    CHECK(mid.contains(4));
    CHECK(mid.contains(9));
  }
  SUBCASE("bad band") {
    CHECK_THROWS_AS(band_filter(c, FilterBand{5, 5}), std::invalid_argument);
  }
}

TEST_CASE("high-pass filter of R_s") {
  SUBCASE("cutoff 1 keeps the whole truncated series") {
    const auto [hp, tail] = high_pass_riemann(SeriesSpec{1.0, 16}, 1);
    CHECK(hp.size() == 16);
    CHECK(tail.convergent);
  }
  SUBCASE("support and tail bound at s=1, n_max=1000, cutoff 1e4") {
    const auto [hp, tail] = high_pass_riemann(SeriesSpec{1.0, 1000}, 10000);
    CHECK(hp.size() == 901);  // n from 100 to 1000
    CHECK(hp.contains(100 * 100));
    CHECK_FALSE(hp.contains(99 * 99));
    CHECK(tail.convergent);
    CHECK(tail.sup_tail == doctest::Approx(1e-3 + 1e-6).epsilon(1e-9));
  }
  SUBCASE("l2 norm decreases with the cutoff") {
    double prev = std::numeric_limits<double>::infinity();
    for (freq_t cutoff : {4, 16, 64, 256}) {
      const auto [hp, tail] = high_pass_riemann(SeriesSpec{1.0, 64}, cutoff);
      const double norm = l2_exact(hp);
      CHECK(norm < prev);
      prev = norm;
    }
  }
  SUBCASE("errors and non-convergent tails") {
    CHECK_THROWS_AS(high_pass_riemann(SeriesSpec{1.0, 8}, 65), empty_band_error);
    const auto [hp, tail] = high_pass_riemann(SeriesSpec{0.4, 32}, 4);
    CHECK_FALSE(tail.convergent);
    CHECK(std::isinf(tail.sup_tail));
  }
}

TEST_CASE("littlewood-paley blocks") {
  SUBCASE("first block is the single n=1 mode") {
    const CoefficientSet b = lp_block(SeriesSpec{0.7, 8}, 2, 0);
    REQUIRE(b.size() == 1);
    CHECK(std::abs(b.at(1) - cplx{1.0, 0.0}) < 1e-15);
  }
  SUBCASE("A=2, k=2, s=1") {
    const CoefficientSet b = lp_block(SeriesSpec{1.0, 8}, 2, 2);
    REQUIRE(b.size() == 4);
    for (int n : {4, 5, 6, 7}) {
      CHECK(b.contains(static_cast<freq_t>(n) * n));
      CHECK(std::abs(b.at(static_cast<freq_t>(n) * n)) ==
            doctest::Approx(std::pow(n, -2.0)).epsilon(1e-14));
    }
  }
  SUBCASE("blocks partition the truncated support") {
    const int K = 3, A = 2;
    const SeriesSpec spec{1.0, (1 << (K + 1)) - 1};  // n_max = A^{K+1} - 1
    std::size_t total = 0;
    for (int k = 0; k <= K; ++k) total += lp_block(spec, A, k).size();
    CHECK(total == riemann_coefficients(spec).size());
  }
  SUBCASE("out of range") {
    CHECK_THROWS_AS(lp_block(SeriesSpec{1.0, 8}, 2, 3), out_of_range_error);
  }
}

TEST_CASE("predicted block norms") {
  CHECK(predicted_block_norm(1.0, 2.0, 2, 3) ==
        doctest::Approx(std::pow(2.0, -1.5 * 3)).epsilon(1e-14));
  CHECK(predicted_block_norm(1.0, 6.0, 2, 3) ==
        doctest::Approx(std::pow(2.0, -4.0)).epsilon(1e-14));  // 2^{k(1-1/3-2)}
  for (int k : {1, 2, 5}) CHECK(predicted_block_norm(0.25, 2.0, 2, k) == 1.0);
}

TEST_CASE("block l2 equals the coefficient sum") {
  const SeriesSpec spec{0.9, 127};
  for (int k : {2, 4, 6}) {
    const CoefficientSet b = lp_block(spec, 2, k);
    long double sum = 0.0L;
    for (int n = 1 << k; n < (1 << (k + 1)); ++n)
      sum += powl(static_cast<long double>(n), -4.0L * 0.9L);
    CHECK(std::abs(l2_exact(b) - std::sqrt(static_cast<double>(sum))) < 1e-12);
  }
}

TEST_CASE("measured block-norm slopes match the model exponents") {
  // log-correction-free branches: s=1 with p=2 and p=6, A=2, k=3..8.
  const SeriesSpec spec{1.0, 511};
  for (double p : {2.0, 6.0}) {
    const ScalingCurve curve = block_norm_sweep(spec, p, 2, 3, 8);
    const double slope = fit_power_law(curve).slope;
    const double model = p < 4.0 ? 0.5 - 2.0 : 1.0 - 2.0 / p - 2.0;
    CHECK(std::abs(slope - model) <= 0.1);
  }
}
