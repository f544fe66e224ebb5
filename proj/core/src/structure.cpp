#include "rsflat/structure.hpp"

#include <cmath>
#include <string>

namespace rsflat {

int sf_required_n_max(double ell, double margin) {
  return static_cast<int>(std::ceil(margin / std::sqrt(ell)));
}

StructureFunctionPoint structure_function(const SeriesSpec& spec, double p, double ell,
                                          const GridPolicy& policy) {
  spec.validate();
  if (!(p > 0.0)) throw std::invalid_argument("structure_function: p must be > 0");
  if (!(ell > 0.0 && ell < 1.0))
    throw std::invalid_argument("structure_function: ell must lie in (0,1)");
  const int needed = sf_required_n_max(ell);
  if (spec.n_max < needed)
    throw insufficient_resolution_error(
        "structure_function: n_max " + std::to_string(spec.n_max) + " below " +
        std::to_string(needed) + " required for ell = " + std::to_string(ell));

  const CoefficientSet inc = increment_coefficients(spec, ell);
  StructureFunctionPoint pt;
  pt.ell = ell;
  pt.p = p;
  pt.s = spec.s;
  pt.quad = lp_norm(inc, p, policy);
  pt.value_root = pt.quad.value;
  pt.value = std::pow(pt.value_root, p);
  return pt;
}

Prediction predicted_sf_root(double s, double p, double ell) {
  if (!(p > 0.0)) throw std::invalid_argument("predicted_sf_root: p must be > 0");
  if (!(s > s_star(p)))
    throw out_of_validity_error("predicted_sf_root: s <= s_star(p)");
  if (!(ell > 0.0 && ell < 1.0))
    throw std::invalid_argument("predicted_sf_root: ell must lie in (0,1)");

  const double lg = std::log(1.0 / ell);
  if (s < 1.25) {
    if (p < 4.0) return Prediction::point(std::pow(ell, s - 0.25));
    if (p == 4.0) return Prediction::point(std::pow(ell, s - 0.25) * std::pow(lg, 0.25));
    return Prediction::point(std::pow(ell, s + 1.0 / p - 0.5));
  }
  if (s == 1.25) {
    if (p < 4.0) return Prediction::point(ell * std::sqrt(lg));
    if (p == 4.0) return Prediction::interval(ell * std::sqrt(lg), ell * std::pow(lg, 0.75));
    return Prediction::point(std::pow(ell, 0.75 + 1.0 / p));
  }
  if (s < 1.5) {
    const double threshold = 2.0 / (3.0 - 2.0 * s);
    if (std::abs(p - threshold) <= 1e-9 * threshold)
      return Prediction::interval(ell, ell * std::sqrt(lg));
    if (p < threshold) return Prediction::point(ell);
    return Prediction::point(std::pow(ell, s + 1.0 / p - 0.5));
  }
  return Prediction::point(ell);
}

double flatness_sf(const SeriesSpec& spec, double p, double ell,
                   const GridPolicy& policy) {
  if (!(p >= 2.0))
    throw std::invalid_argument("flatness_sf: p must be >= 2");
  if (p == 2.0) return 1.0;

  const StructureFunctionPoint sp = structure_function(spec, p, ell, policy);
  const double s2 = [&] {
    const double root = l2_exact(increment_coefficients(spec, ell));
    return root * root;
  }();
  if (s2 <= 0.0)
    throw degenerate_input_error("flatness_sf: S_2 vanished");
  return sp.value / std::pow(s2, 0.5 * p);
}

}  // namespace rsflat
