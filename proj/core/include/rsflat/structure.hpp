#pragma once

#include "rsflat/prediction.hpp"
#include "rsflat/sampling.hpp"
#include "rsflat/series.hpp"

namespace rsflat {

// One evaluation of the structure function S_{s,p}(ell) = ||I_s(., ell)||_p^p,
// computed at the coefficient level through the increment identity.
struct StructureFunctionPoint {
  double ell = 0.0;
  double p = 0.0;
  double s = 0.0;
  double value = 0.0;       // S_{s,p}(ell)
  double value_root = 0.0;  // S_{s,p}(ell)^{1/p}
  QuadratureReport quad;
};

// Resolution rule: frequencies near 1/ell dominate the increment, so the
// truncation must satisfy n_max >= margin * ell^{-1/2}.  The floor is margin
// 4; sweeps at large p pass more (see sweeps.hpp).
inline constexpr double sf_resolution_margin = 4.0;

int sf_required_n_max(double ell, double margin = sf_resolution_margin);

// Throws insufficient_resolution_error when spec.n_max violates the rule.
// Exact (certified) quadrature for even p under the default policy.
StructureFunctionPoint structure_function(const SeriesSpec& spec, double p, double ell,
                                          const GridPolicy& policy = {});

// Model value of S_{s,p}(ell)^{1/p} per the four s-regimes; intervals on the
// critical lines (s = 5/4 with p = 4; p = 2/(3-2s)).
Prediction predicted_sf_root(double s, double p, double ell);

// Flatness in the sense of structure functions:
// G_{s,p}(ell) = S_{s,p}(ell) / S_{s,2}(ell)^{p/2}.
// The denominator is Plancherel-exact (quadrature-free).  p = 2 returns 1.
double flatness_sf(const SeriesSpec& spec, double p, double ell,
                   const GridPolicy& policy = {});

}  // namespace rsflat
