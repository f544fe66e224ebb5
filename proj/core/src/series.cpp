#include "rsflat/series.hpp"

#include <algorithm>
#include <cmath>

namespace rsflat {

double s_star(double p) {
  if (!(p > 0.0)) throw std::invalid_argument("s_star: p must be > 0");
  return p <= 4.0 ? 0.25 : 0.5 - 1.0 / p;
}

bool SeriesSpec::valid_for(double p) const { return s > s_star(p); }

CoefficientSet CoefficientSet::from_entries(std::vector<entry> entries) {
  std::sort(entries.begin(), entries.end(),
            [](const entry& a, const entry& b) { return a.first < b.first; });
  CoefficientSet out;
  out.entries_.reserve(entries.size());
  freq_t prev = -1;
  for (const auto& [k, v] : entries) {
    if (k < 0) throw std::invalid_argument("CoefficientSet: negative frequency");
    if (k == prev) throw std::invalid_argument("CoefficientSet: duplicate frequency");
    prev = k;
    if (v == cplx{0.0, 0.0}) continue;
    out.entries_.emplace_back(k, v);
  }
  return out;
}

cplx CoefficientSet::at(freq_t k) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), k,
                             [](const entry& e, freq_t key) { return e.first < key; });
  if (it != entries_.end() && it->first == k) return it->second;
  return {0.0, 0.0};
}

bool CoefficientSet::contains(freq_t k) const { return at(k) != cplx{0.0, 0.0}; }

CoefficientSet CoefficientSet::scaled(double t) const {
  CoefficientSet out;
  out.entries_ = entries_;
  for (auto& [k, v] : out.entries_) v *= t;
  return out;
}

CoefficientSet riemann_coefficients(const SeriesSpec& spec) {
  spec.validate();
  std::vector<CoefficientSet::entry> e;
  e.reserve(static_cast<std::size_t>(spec.n_max));
  for (int n = 1; n <= spec.n_max; ++n) {
    const freq_t k = static_cast<freq_t>(n) * n;
    const double amp = std::pow(static_cast<double>(n), -2.0 * spec.s);
    e.emplace_back(k, cplx{amp, 0.0});
  }
  return CoefficientSet::from_entries(std::move(e));
}

CoefficientSet zalcwasser_coefficients(int n_max) {
  return riemann_coefficients(SeriesSpec{0.0, n_max});
}

namespace {

// e^{2 pi i u} with the argument reduced mod 1 in long double, so that
// frequencies ~1e7 against arbitrary reals keep ~1e-12 phase accuracy.
cplx unit_phase(long double u) {
  long double r = std::fmod(u, 1.0L);
  if (r < 0.0L) r += 1.0L;
  const long double two_pi = 2.0L * 3.14159265358979323846264338327950288L;
  return {static_cast<double>(std::cos(two_pi * r)),
          static_cast<double>(std::sin(two_pi * r))};
}

// sin(pi u), argument reduced mod 2.
double sin_pi(long double u) {
  long double r = std::fmod(u, 2.0L);
  if (r < 0.0L) r += 2.0L;
  const long double pi = 3.14159265358979323846264338327950288L;
  return static_cast<double>(std::sin(pi * r));
}

}  // namespace

CoefficientSet phase_shift(const CoefficientSet& c, double a) {
  std::vector<CoefficientSet::entry> e;
  e.reserve(c.size());
  for (const auto& [k, v] : c.entries())
    e.emplace_back(k, v * unit_phase(static_cast<long double>(k) * a));
  return CoefficientSet::from_entries(std::move(e));
}

CoefficientSet increment_coefficients(const SeriesSpec& spec, double ell) {
  spec.validate();
  if (!(ell > 0.0 && ell < 1.0))
    throw std::invalid_argument("increment_coefficients: ell must lie in (0,1)");

  std::vector<CoefficientSet::entry> e;
  e.reserve(static_cast<std::size_t>(spec.n_max));
  double max_mod = 0.0;
  for (int n = 1; n <= spec.n_max; ++n) {
    const freq_t k = static_cast<freq_t>(n) * n;
    const double sn = sin_pi(static_cast<long double>(k) * ell);
    const double amp = 2.0 * sn * std::pow(static_cast<double>(n), -2.0 * spec.s);
    max_mod = std::max(max_mod, std::abs(amp));
    e.emplace_back(k, cplx{0.0, amp});
  }
  const double dead_band = 1e-300 * max_mod;
  std::erase_if(e, [dead_band](const CoefficientSet::entry& en) {
    return std::abs(en.second) < dead_band || en.second == cplx{0.0, 0.0};
  });
  return CoefficientSet::from_entries(std::move(e));
}

cplx direct_eval(const CoefficientSet& c, double x) {
  cplx acc{0.0, 0.0};
  for (const auto& [k, v] : c.entries())
    acc += v * unit_phase(static_cast<long double>(k) * x);
  return acc;
}

}  // namespace rsflat
