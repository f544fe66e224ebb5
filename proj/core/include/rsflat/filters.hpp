#pragma once

#include <cstdint>
#include <limits>
#include <utility>

#include "rsflat/series.hpp"

namespace rsflat {

// Exclusive upper sentinel for unbounded bands.
inline constexpr freq_t band_unbounded = std::numeric_limits<freq_t>::max();

// Half-open frequency band [lo, hi).
struct FilterBand {
  freq_t lo = 0;
  freq_t hi = band_unbounded;

  void validate() const {
    if (!(lo < hi)) throw std::invalid_argument("FilterBand: need lo < hi");
    if (lo < 0) throw std::invalid_argument("FilterBand: lo must be >= 0");
  }
};

// Bound on the sup norm of the part of the infinite series discarded by
// truncation at n_max.  Convergent only when 2s > 1; then
// sup_tail = n_max^{1-2s}/(2s-1) + n_max^{-2s} (integral comparison + first term).
struct TailBound {
  double sup_tail = 0.0;
  bool convergent = false;
};

TailBound riemann_tail_bound(double s, int n_max);

// Keeps exactly the entries with lo <= k < hi.
CoefficientSet band_filter(const CoefficientSet& c, FilterBand band);

// High-pass filter (R_s)_{>=N} for the frequency cutoff n_freq: keeps modes
// n^2 >= n_freq (n-index cutoff sqrt(n_freq)), truncated at spec.n_max,
// together with the bound on what truncation discarded.
// Throws empty_band_error when n_freq > spec.lambda().
std::pair<CoefficientSet, TailBound> high_pass_riemann(const SeriesSpec& spec,
                                                       freq_t n_freq);

// Littlewood-Paley block in the n-index: modes with n in [A^k, A^{k+1}).
// Requires A^{k+1} - 1 <= spec.n_max.
CoefficientSet lp_block(const SeriesSpec& spec, int a_param, int k);

// Model block norm, up to constants (fit target only):
// A^{k(1/2-2s)} for p<4, with k^{1/4} at p=4, A^{k(1-2/p-2s)} for p>4.
double predicted_block_norm(double s, double p, int a_param, int k);

}  // namespace rsflat
