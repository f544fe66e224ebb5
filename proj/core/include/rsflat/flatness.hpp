#pragma once

#include "rsflat/filters.hpp"
#include "rsflat/prediction.hpp"
#include "rsflat/sampling.hpp"
#include "rsflat/series.hpp"

namespace rsflat {

// Flatness in the sense of high-pass filters:
// F_{s,p}(N) = ||(R_s)_{>=N}||_p^p / ||(R_s)_{>=N}||_2^p.
// Numerator by quadrature, denominator by the quadrature-free l2_exact
// (removes one error source in a ratio of similar magnitudes).
// p = 2 is allowed (for tests) and gives exactly 1.
double flatness_hp(const SeriesSpec& spec, double p, freq_t n_freq,
                   const GridPolicy& policy = {});

// Model flatness, s-independent: 1 for p<4, log N at p=4, N^{p/4-1} for p>4.
// Requires s > s_star(p).
double predicted_flatness_hp(double s, double p, double n_freq);

// Model low-pass/partial-sum norm || sum_{n<=N} n^{-2s} e^{2pi i n^2 x} ||_p
// across the four s-cases; intervals on the critical lines (s=1/4 with p=4;
// p = 2/(1-2s) for 1/4 < s < 1/2).  Valid for every real s.
Prediction predicted_partial_sum_norm(double s, double p, double n_big);

// Model high-pass norm ||(R_s)_{>=N}||_p: N^{1/4-s} (p<4), with (log N)^{1/4}
// at p=4, N^{1/2-1/p-s} (p>4); p = inf allowed with 1/p = 0.
double predicted_hp_norm(double s, double p, double n_freq);

}  // namespace rsflat
