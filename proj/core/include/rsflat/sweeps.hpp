#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "rsflat/filters.hpp"
#include "rsflat/fitting.hpp"
#include "rsflat/io.hpp"
#include "rsflat/sampling.hpp"
#include "rsflat/series.hpp"
#include "rsflat/structure.hpp"

namespace rsflat {

inline const char* grid_policy_tag(const GridPolicy& g) {
  return g.mode == GridPolicy::Mode::exact ? "exact" : "adaptive";
}

// Runs fn(i) for i in [0, n) on up to `jobs` threads.  Exceptions are
// rethrown on the caller's thread.  Results must be written to
// index-addressed slots so the outcome is independent of scheduling.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn);

// ---- High-pass sweeps (scale = frequency cutoff N) ----

struct HpSweepOptions {
  double truncation_ratio = 4.0;  // n_max = ratio * sqrt(N) for p > 2
  GridPolicy grid;
  // p = 2 route is quadrature-free; truncation grows until the sup-tail
  // certification rule (sup_tail < rule_fraction * norm) holds or n_max_cap.
  bool p2_exact_route = true;
  double rule_fraction = 0.01;
  int n_max_cap = 8'000'000;
  int jobs = 1;
  const ResultCache* cache = nullptr;  // optional per-point result cache
};

struct HpPoint {
  double n_freq = 0.0;
  int n_max = 0;
  double value = 0.0;  // ||(R_s)_{>=N}||_p
  bool certified = false;
  TailBound tail;
  bool sup_rule_met = false;
};

struct HpCurve {
  ScalingCurve curve;  // (N, norm)
  std::vector<HpPoint> points;
};

HpCurve hp_norm_sweep(double s, double p, const std::vector<freq_t>& cutoffs,
                      const HpSweepOptions& opt = {});

// Flatness F over the cutoff sweep (same truncation policy as the p-norm
// numerator; denominator always l2_exact of the same filtered set).
HpCurve hp_flatness_sweep(double s, double p, const std::vector<freq_t>& cutoffs,
                          const HpSweepOptions& opt = {});

// ---- Structure-function sweeps (scale = ell) ----

struct SfSweepOptions {
  double margin = sf_resolution_margin;  // n_max = margin * ell^{-1/2}
  GridPolicy grid;
  int s2_margin = 512;  // quadrature-free S_2 denominators use a wide margin
  int jobs = 1;
  const ResultCache* cache = nullptr;
};

struct SfPoint {
  double ell = 0.0;
  int n_max = 0;
  double value_root = 0.0;  // S^{1/p}
  double value = 0.0;       // S
  bool certified = false;
};

struct SfCurve {
  ScalingCurve curve;  // (ell, S^{1/p}) or (ell, G)
  std::vector<SfPoint> points;
};

SfCurve sf_sweep(double s, double p, const std::vector<double>& ells,
                 const SfSweepOptions& opt = {});

SfCurve sf_flatness_sweep(double s, double p, const std::vector<double>& ells,
                          const SfSweepOptions& opt = {});

// Quadrature-free S_2(ell) = 4 sum sin^2(pi n^2 ell) n^{-4s}.
double s2_plancherel(double s, double ell, int n_max);

// ---- Partial-sum (low-pass) norms, scale = n-index truncation N ----

struct PartialSumOptions {
  GridPolicy grid;
  int jobs = 1;
};

ScalingCurve partial_sum_sweep(double s, double p, const std::vector<int>& n_values,
                               const PartialSumOptions& opt = {});

// Littlewood-Paley block norms ||Delta_k||_p, scale = A^k (n-index blocks).
ScalingCurve block_norm_sweep(const SeriesSpec& spec, double p, int a_param, int k_lo,
                              int k_hi, const GridPolicy& policy = {});

// Dyadic-style ranges.
std::vector<freq_t> geometric_cutoffs(freq_t lo, freq_t hi, double ratio);
std::vector<double> geometric_ells(double lo, double hi, double ratio);

}  // namespace rsflat
