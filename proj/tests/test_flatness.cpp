#include <doctest.h>

#include <cmath>

#include "rsflat/flatness.hpp"
#include "rsflat/sweeps.hpp"

using namespace rsflat;

TEST_CASE("single surviving mode gives F = 1") {
  const SeriesSpec spec{1.0, 12};
  const freq_t cutoff = spec.lambda();  // keeps only n = n_max
  for (double p : {3.0, 4.0, 6.0})
    CHECK(flatness_hp(spec, p, cutoff) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("F >= 1 and hand-assembled consistency") {
  const SeriesSpec spec{1.0, 32};
  const double f = flatness_hp(spec, 4.0, 64);
  CHECK(f >= 1.0 - 1e-9);
  auto [hp, tail] = high_pass_riemann(spec, 64);
  const double byhand = std::pow(lp_norm(hp, 4.0).value, 4.0) / std::pow(l2_exact(hp), 4.0);
  CHECK(f == doctest::Approx(byhand).epsilon(1e-10));
}

TEST_CASE("predicted flatness laws") {
  CHECK(predicted_flatness_hp(1.0, 3.0, 100.0) == 1.0);
  CHECK(predicted_flatness_hp(1.0, 8.0, 100.0) == doctest::Approx(100.0));
  CHECK(predicted_flatness_hp(0.9, 6.0, 64.0) ==
        doctest::Approx(predicted_flatness_hp(1.3, 6.0, 64.0)));  // s-independent
  CHECK(predicted_flatness_hp(1.0, 4.0, 100.0) == doctest::Approx(std::log(100.0)));
  CHECK_THROWS_AS(predicted_flatness_hp(0.2, 3.0, 100.0), out_of_validity_error);
}

TEST_CASE("predicted partial-sum norms") {
  const double n = 4096.0;
  CHECK(predicted_partial_sum_norm(0.0, 6.0, n).value() ==
        doctest::Approx(std::pow(n, 2.0 / 3.0)).epsilon(1e-12));
  CHECK(predicted_partial_sum_norm(0.25, 2.0, n).value() ==
        doctest::Approx(std::sqrt(std::log(n))).epsilon(1e-12));
  CHECK(predicted_partial_sum_norm(0.4, 20.0, n).value() ==
        doctest::Approx(std::pow(n, 0.1)).epsilon(1e-12));
  CHECK(predicted_partial_sum_norm(0.25, 4.0, n).is_interval());
  CHECK(predicted_partial_sum_norm(0.4, 10.0, n).is_interval());  // p = 2/(1-2s)
  CHECK(predicted_partial_sum_norm(0.7, 9.0, n).value() == 1.0);
}

TEST_CASE("predicted high-pass norms") {
  const double n = 65536.0;
  CHECK(predicted_hp_norm(1.0, 6.0, n) ==
        doctest::Approx(std::pow(n, -2.0 / 3.0)).epsilon(1e-12));
  CHECK(predicted_hp_norm(1.0, 2.0, n) ==
        doctest::Approx(std::pow(n, -0.75)).epsilon(1e-12));
  CHECK(predicted_hp_norm(1.0, p_infinity, n) ==
        doctest::Approx(std::pow(n, -0.5)).epsilon(1e-12));
  CHECK_THROWS_AS(predicted_hp_norm(0.45, p_infinity, n), out_of_validity_error);
}

TEST_CASE("high-pass l2 slope matches N^{1/4-s}") {
  HpSweepOptions opt;
  opt.n_max_cap = 500000;  // slope accuracy needs the l2 tail, not the sup rule
  const std::vector<freq_t> cutoffs = geometric_cutoffs(64, 262144, 4.0);
  for (double s : {0.75, 1.0, 1.4}) {
    const HpCurve hc = hp_norm_sweep(s, 2.0, cutoffs, opt);
    const double slope = fit_power_law(hc.curve).slope;
    CHECK(std::abs(slope - (0.25 - s)) <= 0.05);
  }
}

TEST_CASE("F log band and p=6 slope at s=1") {
  SUBCASE("p=4: F(N)/log N bounded in a factor-3 band") {
    HpSweepOptions opt;
    opt.truncation_ratio = 3.0;
    const HpCurve fc =
        hp_flatness_sweep(1.0, 4.0, geometric_cutoffs(256, 262144, 2.0), opt);
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (std::size_t i = 0; i < fc.curve.size(); ++i) {
      const double ratio = fc.curve.values[i] / std::log(fc.curve.scales[i]);
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
    CHECK(hi / lo < 3.0);
  }
  SUBCASE("p=6: slope of log F vs log N near 1/2") {
    HpSweepOptions opt;
    opt.truncation_ratio = 4.0;
    const HpCurve fc =
        hp_flatness_sweep(1.0, 6.0, geometric_cutoffs(1024, 262144, 4.0), opt);
    CHECK(std::abs(fit_power_law(fc.curve).slope - 0.5) <= 0.1);
  }
}
