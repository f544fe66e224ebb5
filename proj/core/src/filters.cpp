#include "rsflat/filters.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace rsflat {

TailBound riemann_tail_bound(double s, int n_max) {
  TailBound tb;
  tb.convergent = 2.0 * s > 1.0;
  if (!tb.convergent) {
    tb.sup_tail = std::numeric_limits<double>::infinity();
    return tb;
  }
  const double m = static_cast<double>(n_max);
  tb.sup_tail = std::pow(m, 1.0 - 2.0 * s) / (2.0 * s - 1.0) + std::pow(m, -2.0 * s);
  return tb;
}

CoefficientSet band_filter(const CoefficientSet& c, FilterBand band) {
  band.validate();
  std::vector<CoefficientSet::entry> kept;
  for (const auto& e : c.entries())
    if (e.first >= band.lo && e.first < band.hi) kept.push_back(e);
  return CoefficientSet::from_entries(std::move(kept));
}

std::pair<CoefficientSet, TailBound> high_pass_riemann(const SeriesSpec& spec,
                                                       freq_t n_freq) {
  spec.validate();
  if (n_freq < 1) throw std::invalid_argument("high_pass_riemann: n_freq must be >= 1");
  if (n_freq > spec.lambda())
    throw empty_band_error("high_pass_riemann: cutoff " + std::to_string(n_freq) +
                           " beyond truncation lambda " + std::to_string(spec.lambda()));
  CoefficientSet hp =
      band_filter(riemann_coefficients(spec), FilterBand{n_freq, band_unbounded});
  return {std::move(hp), riemann_tail_bound(spec.s, spec.n_max)};
}

namespace {

std::int64_t checked_ipow(std::int64_t base, int exp) {
  std::int64_t r = 1;
  for (int i = 0; i < exp; ++i) {
    if (r > std::numeric_limits<std::int64_t>::max() / base)
      throw out_of_range_error("lp_block: A^k overflows");
    r *= base;
  }
  return r;
}

}  // namespace

CoefficientSet lp_block(const SeriesSpec& spec, int a_param, int k) {
  spec.validate();
  if (a_param < 2) throw std::invalid_argument("lp_block: a_param must be >= 2");
  if (k < 0) throw std::invalid_argument("lp_block: k must be >= 0");
  const std::int64_t n_lo = checked_ipow(a_param, k);
  const std::int64_t n_hi = n_lo * a_param;  // exclusive
  if (n_hi - 1 > spec.n_max)
    throw out_of_range_error("lp_block: block [" + std::to_string(n_lo) + "," +
                             std::to_string(n_hi) + ") exceeds truncation n_max " +
                             std::to_string(spec.n_max));
  std::vector<CoefficientSet::entry> e;
  for (std::int64_t n = n_lo; n < n_hi; ++n) {
    const double amp = std::pow(static_cast<double>(n), -2.0 * spec.s);
    e.emplace_back(n * n, cplx{amp, 0.0});
  }
  return CoefficientSet::from_entries(std::move(e));
}

double predicted_block_norm(double s, double p, int a_param, int k) {
  if (!(p > 0.0)) throw std::invalid_argument("predicted_block_norm: p must be > 0");
  const double a = static_cast<double>(a_param);
  const double kk = static_cast<double>(k);
  if (p < 4.0) return std::pow(a, kk * (0.5 - 2.0 * s));
  if (p == 4.0) return std::pow(a, kk * (0.5 - 2.0 * s)) * std::pow(std::max(kk, 1.0), 0.25);
  return std::pow(a, kk * (1.0 - 2.0 / p - 2.0 * s));
}

}  // namespace rsflat
