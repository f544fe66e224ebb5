#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "rsflat/errors.hpp"

namespace rsflat {

using cplx = std::complex<double>;
using freq_t = std::int64_t;

// Truncated generalized Riemann series: sum_{n=1}^{n_max} n^{-2s} e^{2pi i n^2 x}.
// s = 1 is the classical non-differentiable function; s = 0 gives the
// Zalcwasser partial sums K_N.
struct SeriesSpec {
  double s = 1.0;
  int n_max = 1;

  // Frequency cap Lambda = n_max^2 (largest mode present).
  freq_t lambda() const { return static_cast<freq_t>(n_max) * n_max; }

  void validate() const {
    if (n_max < 1) throw std::invalid_argument("SeriesSpec: n_max must be >= 1");
  }

  // The L^p asymptotics apply only above the threshold s_star(p).  Below it
  // the construction is still usable (validity flag, not an error).
  bool valid_for(double p) const;
};

// Minimal s for which the relevant L^p theory applies:
// 1/4 for p <= 4, 1/2 - 1/p for p > 4.
double s_star(double p);

// Sparse complex Fourier coefficients on nonnegative integer frequencies.
// Stored sorted by frequency; zero amplitudes are never kept.
class CoefficientSet {
public:
  using entry = std::pair<freq_t, cplx>;

  CoefficientSet() = default;

  // Sorts, rejects negative frequencies and duplicate keys, drops exact zeros.
  static CoefficientSet from_entries(std::vector<entry> entries);

  std::span<const entry> entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  // Max frequency present (0 for the empty set).
  freq_t lambda() const { return entries_.empty() ? 0 : entries_.back().first; }

  // Amplitude at frequency k, 0 if absent.
  cplx at(freq_t k) const;
  bool contains(freq_t k) const;

  CoefficientSet scaled(double t) const;

private:
  std::vector<entry> entries_;
};

// Coefficients of the truncated R_s: entries[n^2] = n^{-2s}, 1 <= n <= n_max.
CoefficientSet riemann_coefficients(const SeriesSpec& spec);

// K_N coefficients: entries[n^2] = 1.  Equals riemann_coefficients with s = 0.
CoefficientSet zalcwasser_coefficients(int n_max);

// Exact Fourier shift f(x) -> f(x+a): each (k, v) -> (k, v e^{2pi i k a}).
CoefficientSet phase_shift(const CoefficientSet& c, double a);

// Coefficients of I_s(x, ell) = R_s(x+ell/2) - R_s(x-ell/2):
// entries[n^2] = 2i sin(pi n^2 ell) n^{-2s}.
// Dead-band: only entries below 1e-300 * max-modulus are dropped, so the
// critical-regime log corrections are not distorted by silent truncation.
CoefficientSet increment_coefficients(const SeriesSpec& spec, double ell);

// Oracle: naive summation of the trigonometric polynomial at one point.
// Phases are reduced in extended precision so large k*x stays accurate.
cplx direct_eval(const CoefficientSet& c, double x);

}  // namespace rsflat
