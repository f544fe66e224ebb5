#pragma once

#include <vector>

#include "rsflat/sampling.hpp"
#include "rsflat/series.hpp"

namespace rsflat {

inline constexpr double dim_minus_infinity = -std::numeric_limits<double>::infinity();

enum class SpectrumSource { closed_form, legendre_numeric };
enum class EtaSource { closed_form, estimated };

// Spectrum of singularities d(alpha); -inf marks empty Hoelder sets.
struct MultifractalSpectrum {
  std::vector<double> alphas;
  std::vector<double> d_values;
  SpectrumSource source = SpectrumSource::closed_form;
};

// Critical Besov exponent eta_s(p) on a p grid.
struct EtaCurve {
  std::vector<double> p_grid;
  std::vector<double> eta;
  EtaSource source = EtaSource::closed_form;
};

// eta_s(p) = p(s-1/4) for p <= 4, 1 + p(s-1/2) for p > 4 (continuous at 4).
// Requires s > 1/2.
double eta_closed_form(double s, double p);

// Closed-form eta on the transform grid: geometric, n_points on [p_min, p_max],
// plus the kink p = 4 inserted exactly (the Legendre infimum on the increasing
// part of d is attained there, so it must be a grid point).
EtaCurve eta_curve_closed_form(double s, double p_min = 0.01, double p_max = 40.0,
                               int n_points = 400);

// Numeric counterpart of eta from Littlewood-Paley block norms: frequency
// blocks P_k onto [A^k, A^{k+1}) (n-index blocks with parameter sqrt(A));
// returns -p * slope of log_A ||P_k R_s||_p vs k over k in [k_lo, k_hi].
// Needs at least 4 blocks and blocks within spec's truncation.
double eta_estimate(const SeriesSpec& spec, double p, int a_param, int k_lo, int k_hi,
                    const GridPolicy& policy = {});

// Jaffard's spectrum: d = 4a - 4s + 2 on [s-1/2, s-1/4], 0 at the isolated
// point a = 2s - 1/2, -inf elsewhere.  Requires s > 1/2.
MultifractalSpectrum spectrum_closed_form(double s, const std::vector<double>& alphas);

// d(alpha) = inf_{p>0} { alpha p - eta(p) + 1 } on the given grid.  Divergence
// (objective still decreasing at p_max, slope < -1e-6) reports -inf.
// The eta grid must reach p_max >= 40.
MultifractalSpectrum legendre_transform(const EtaCurve& eta,
                                        const std::vector<double>& alphas);

struct FormalismReport {
  double s = 0.0;
  double max_abs_deviation = 0.0;
  bool pass = false;
  double tolerance = 1e-3;
  std::vector<double> alphas;
  std::vector<double> closed_form;
  std::vector<double> legendre;
};

// Compares the numeric Legendre transform of the closed-form eta against the
// closed-form spectrum on the increasing part alpha in [s-1/2, s-1/4]
// (the validity range of the formalism theorem).
FormalismReport formalism_check(double s, double alpha_step = 0.005,
                                double tolerance = 1e-3);

}  // namespace rsflat
