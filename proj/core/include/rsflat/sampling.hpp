#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "rsflat/series.hpp"

namespace rsflat {

// M equispaced complex samples at x_j = j/m on the torus, alias-free for the
// generating coefficients (m > 2*lambda).
struct SampleGrid {
  std::vector<cplx> values;
  std::int64_t m = 0;
  freq_t lambda = 0;
};

// Outcome of one L^p quadrature.
//
// The rectangle rule on m points integrates e^{2pi i k x} exactly unless
// m | k, k != 0.  For even p, |f|^p is a trigonometric polynomial with
// frequencies in [-(p/2) lambda, (p/2) lambda], so m >= p*lambda + 1 makes
// the rule exact; that is the certification rule.  Non-even p is refined by
// grid doubling until the relative change drops below quad_tol.
struct QuadratureReport {
  double value = 0.0;
  bool certified_exact = false;
  int refinement_levels = 0;
  double relative_change_last = 0.0;
};

struct GridPolicy {
  enum class Mode {
    exact,     // certified grids for even p, adaptive refinement otherwise
    adaptive,  // adaptive refinement for every p
  };
  Mode mode = Mode::exact;
  double quad_tol = 1e-7;   // relative-change stop for adaptive refinement
  int max_refinements = 4;  // doublings past the base grid
  std::int64_t max_points = std::int64_t{1} << 26;  // memory guard
};

// Sentinel accepted by lp_norm for the sup norm.
inline constexpr double p_infinity = std::numeric_limits<double>::infinity();

// Inverse DFT of the zero-padded coefficient array.
// Throws aliasing_error when m <= 2*lambda.
SampleGrid sample(const CoefficientSet& c, std::int64_t m);

// Single-grid rectangle-rule norm ((1/m) sum |v_j|^p)^{1/p}; max for p = inf.
// Certification flag per the even-p rule above; no refinement at this level.
QuadratureReport lp_norm(const SampleGrid& g, double p);

// Norm of the trigonometric polynomial given by c, with grid selection:
// even p (exact mode) uses the certified grid; otherwise the base grid is the
// smallest power of two > 2*lambda, doubled until quad_tol or the refinement
// cap.  p = inf is evaluated on the doubled base grid and is a lower bound on
// the true sup norm.
QuadratureReport lp_norm(const CoefficientSet& c, double p, const GridPolicy& policy = {});

// Plancherel: sqrt(sum |v_k|^2), quadrature-free.
double l2_exact(const CoefficientSet& c);

// ||K_{n_max}||_4 by exhaustive counting of a^2+b^2 = c^2+d^2 quadruples in
// [1, n_max]^4.  Test oracle; refuses n_max above the cost cap.
double l4_exact_counting(int n_max, int cap = 64);

}  // namespace rsflat
