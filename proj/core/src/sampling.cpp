#include "rsflat/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fft_internal.hpp"

namespace rsflat {

namespace {

std::int64_t next_pow2(std::int64_t x) {
  std::int64_t m = 1;
  while (m < x) m <<= 1;
  return m;
}

bool is_positive_even_integer(double p) {
  if (!(p > 0.0) || !std::isfinite(p)) return false;
  const double r = std::round(p);
  return std::abs(p - r) < 1e-9 && static_cast<std::int64_t>(r) % 2 == 0;
}

// |z|^p summed over the grid, accumulated in long double.  Small even p gets
// integer-power dispatch; everything else goes through powl once per point.
long double sum_abs_pow(const std::vector<cplx>& v, double p) {
  long double acc = 0.0L;
  const double r = std::round(p);
  const bool int_p = std::isfinite(p) && std::abs(p - r) < 1e-9 && r > 0 && r <= 16 &&
                     static_cast<int>(r) % 2 == 0;
  if (int_p) {
    const int half = static_cast<int>(r) / 2;
    for (const cplx& z : v) {
      const long double m2 = static_cast<long double>(z.real()) * z.real() +
                             static_cast<long double>(z.imag()) * z.imag();
      long double t = 1.0L, b = m2;
      int e = half;
      while (e > 0) {
        if (e & 1) t *= b;
        b *= b;
        e >>= 1;
      }
      acc += t;
    }
  } else {
    for (const cplx& z : v) {
      const long double m2 = static_cast<long double>(z.real()) * z.real() +
                             static_cast<long double>(z.imag()) * z.imag();
      if (m2 > 0.0L) acc += std::pow(m2, static_cast<long double>(0.5 * p));
    }
  }
  return acc;
}

double rect_rule_norm(const std::vector<cplx>& v, double p) {
  const long double mean = sum_abs_pow(v, p) / static_cast<long double>(v.size());
  return static_cast<double>(std::pow(mean, 1.0L / static_cast<long double>(p)));
}

double max_abs(const std::vector<cplx>& v) {
  double mx = 0.0;
  for (const cplx& z : v) mx = std::max(mx, std::abs(z));
  return mx;
}

bool certification_rule(double p, std::int64_t m, freq_t lambda) {
  if (!is_positive_even_integer(p)) return false;
  // m >= p*lambda + 1, computed without overflow for large lambda.
  return static_cast<long double>(m) >=
         static_cast<long double>(p) * static_cast<long double>(lambda) + 1.0L;
}

std::vector<cplx> sample_values(const CoefficientSet& c, std::int64_t m) {
  std::vector<cplx> buf(static_cast<std::size_t>(m), cplx{0.0, 0.0});
  for (const auto& [k, v] : c.entries()) buf[static_cast<std::size_t>(k)] = v;
  detail::inverse_dft_inplace(buf);
  return buf;
}

}  // namespace

SampleGrid sample(const CoefficientSet& c, std::int64_t m) {
  if (m <= 0) throw std::invalid_argument("sample: m must be positive");
  if (m <= 2 * c.lambda())
    throw aliasing_error("sample: m = " + std::to_string(m) +
                         " risks aliasing (need m > 2*lambda = " +
                         std::to_string(2 * c.lambda()) + ")");
  SampleGrid g;
  g.m = m;
  g.lambda = c.lambda();
  g.values = sample_values(c, m);
  return g;
}

QuadratureReport lp_norm(const SampleGrid& g, double p) {
  if (g.values.empty()) throw std::invalid_argument("lp_norm: empty grid");
  QuadratureReport rep;
  if (std::isinf(p) && p > 0) {
    rep.value = max_abs(g.values);
    return rep;
  }
  if (!(p > 0.0)) throw std::invalid_argument("lp_norm: p must be > 0");
  rep.value = rect_rule_norm(g.values, p);
  rep.certified_exact = certification_rule(p, g.m, g.lambda);
  return rep;
}

QuadratureReport lp_norm(const CoefficientSet& c, double p, const GridPolicy& policy) {
  const freq_t lambda = c.lambda();
  const std::int64_t alias_free = next_pow2(2 * lambda + 1);

  if (std::isinf(p) && p > 0) {
    // Max over samples on the doubled base grid; a lower bound on the sup.
    const std::int64_t m = std::min<std::int64_t>(2 * alias_free, policy.max_points);
    QuadratureReport rep;
    rep.value = max_abs(sample_values(c, m));
    return rep;
  }
  if (!(p > 0.0)) throw std::invalid_argument("lp_norm: p must be > 0");

  if (policy.mode == GridPolicy::Mode::exact && is_positive_even_integer(p)) {
    const long double need = static_cast<long double>(p) * lambda + 1.0L;
    if (need > static_cast<long double>(policy.max_points))
      throw grid_too_large_error(
          "lp_norm: certified grid for p=" + std::to_string(p) + ", lambda=" +
          std::to_string(lambda) + " exceeds max_points; reduce n_max or use adaptive mode");
    const std::int64_t m = next_pow2(std::max<std::int64_t>(
        static_cast<std::int64_t>(std::ceil(need)), alias_free));
    if (m > policy.max_points)
      throw grid_too_large_error(
          "lp_norm: certified grid needs " + std::to_string(m) + " points (cap " +
          std::to_string(policy.max_points) + "); reduce n_max or p, or use adaptive mode");
    QuadratureReport rep;
    rep.value = rect_rule_norm(sample_values(c, m), p);
    rep.certified_exact = true;
    return rep;
  }

  // Adaptive: double the grid until the norm stabilizes.
  std::int64_t m = alias_free;
  if (m > policy.max_points)
    throw grid_too_large_error("lp_norm: base grid exceeds max_points");
  QuadratureReport rep;
  rep.value = rect_rule_norm(sample_values(c, m), p);
  rep.certified_exact = certification_rule(p, m, lambda);
  for (int level = 1; level <= policy.max_refinements; ++level) {
    if (2 * m > policy.max_points) break;
    m *= 2;
    const double refined = rect_rule_norm(sample_values(c, m), p);
    const double denom = std::max(std::abs(refined), 1e-300);
    rep.relative_change_last = std::abs(refined - rep.value) / denom;
    rep.value = refined;
    rep.refinement_levels = level;
    rep.certified_exact = certification_rule(p, m, lambda);
    if (rep.relative_change_last < policy.quad_tol) break;
  }
  return rep;
}

double l2_exact(const CoefficientSet& c) {
  long double acc = 0.0L;
  for (const auto& [k, v] : c.entries()) {
    const long double re = v.real(), im = v.imag();
    acc += re * re + im * im;
  }
  return static_cast<double>(std::sqrt(acc));
}

double l4_exact_counting(int n_max, int cap) {
  if (n_max < 1) throw std::invalid_argument("l4_exact_counting: n_max must be >= 1");
  if (n_max > cap)
    throw oracle_cap_error("l4_exact_counting: n_max " + std::to_string(n_max) +
                           " above oracle cap " + std::to_string(cap));
  // ||K_N||_4^4 = #{a^2+b^2 = c^2+d^2} = sum over attainable sums of count^2.
  const std::int64_t top = 2 * static_cast<std::int64_t>(n_max) * n_max;
  std::vector<std::int64_t> hist(static_cast<std::size_t>(top) + 1, 0);
  for (std::int64_t a = 1; a <= n_max; ++a)
    for (std::int64_t b = 1; b <= n_max; ++b) ++hist[static_cast<std::size_t>(a * a + b * b)];
  long double quadruples = 0.0L;
  for (std::int64_t h : hist) quadruples += static_cast<long double>(h) * h;
  return static_cast<double>(std::pow(quadruples, 0.25L));
}

}  // namespace rsflat
