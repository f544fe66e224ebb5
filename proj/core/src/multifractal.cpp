#include "rsflat/multifractal.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rsflat/filters.hpp"
#include "rsflat/fitting.hpp"

namespace rsflat {

double eta_closed_form(double s, double p) {
  if (!(s > 0.5)) throw std::invalid_argument("eta_closed_form: requires s > 1/2");
  if (!(p > 0.0)) throw std::invalid_argument("eta_closed_form: p must be > 0");
  return p <= 4.0 ? p * (s - 0.25) : 1.0 + p * (s - 0.5);
}

EtaCurve eta_curve_closed_form(double s, double p_min, double p_max, int n_points) {
  if (!(p_min > 0.0 && p_max > p_min && n_points >= 2))
    throw std::invalid_argument("eta_curve_closed_form: bad grid");
  EtaCurve curve;
  curve.p_grid.reserve(static_cast<std::size_t>(n_points) + 1);
  const double ratio = std::log(p_max / p_min) / (n_points - 1);
  for (int i = 0; i < n_points; ++i)
    curve.p_grid.push_back(p_min * std::exp(ratio * i));
  curve.p_grid.back() = p_max;  // exact endpoint, immune to exp/log roundoff
  if (p_min < 4.0 && p_max > 4.0) curve.p_grid.push_back(4.0);
  std::sort(curve.p_grid.begin(), curve.p_grid.end());
  curve.p_grid.erase(std::unique(curve.p_grid.begin(), curve.p_grid.end()),
                     curve.p_grid.end());
  curve.eta.reserve(curve.p_grid.size());
  for (double p : curve.p_grid) curve.eta.push_back(eta_closed_form(s, p));
  curve.source = EtaSource::closed_form;
  return curve;
}

double eta_estimate(const SeriesSpec& spec, double p, int a_param, int k_lo, int k_hi,
                    const GridPolicy& policy) {
  spec.validate();
  if (a_param < 2) throw std::invalid_argument("eta_estimate: a_param must be >= 2");
  if (k_hi - k_lo + 1 < 4)
    throw insufficient_data_error("eta_estimate: need at least 4 blocks");
  const CoefficientSet base = riemann_coefficients(spec);

  ScalingCurve curve;
  curve.meta = {spec.s, p, "lp_block_norm"};
  for (int k = k_lo; k <= k_hi; ++k) {
    const double lo_d = std::pow(static_cast<double>(a_param), k);
    const double hi_d = std::pow(static_cast<double>(a_param), k + 1);
    if (hi_d - 1.0 > static_cast<double>(spec.lambda()))
      throw out_of_range_error("eta_estimate: block k=" + std::to_string(k) +
                               " exceeds truncation");
    const CoefficientSet block = band_filter(
        base, FilterBand{static_cast<freq_t>(std::ceil(lo_d)),
                         static_cast<freq_t>(std::ceil(hi_d))});
    if (block.empty())
      throw insufficient_data_error("eta_estimate: empty block at k=" + std::to_string(k));
    curve.scales.push_back(lo_d);
    curve.values.push_back(lp_norm(block, p, policy).value);
  }
  const ExponentFit fit = fit_power_law(curve);
  return -p * fit.slope;
}

MultifractalSpectrum spectrum_closed_form(double s, const std::vector<double>& alphas) {
  if (!(s > 0.5)) throw std::invalid_argument("spectrum_closed_form: requires s > 1/2");
  MultifractalSpectrum spec;
  spec.alphas = alphas;
  std::sort(spec.alphas.begin(), spec.alphas.end());
  spec.d_values.reserve(spec.alphas.size());
  const double isolated = 2.0 * s - 0.5;
  for (double a : spec.alphas) {
    if (a >= s - 0.5 - 1e-12 && a <= s - 0.25 + 1e-12)
      spec.d_values.push_back(4.0 * a - 4.0 * s + 2.0);
    else if (std::abs(a - isolated) < 1e-12)
      spec.d_values.push_back(0.0);
    else
      spec.d_values.push_back(dim_minus_infinity);
  }
  spec.source = SpectrumSource::closed_form;
  return spec;
}

MultifractalSpectrum legendre_transform(const EtaCurve& eta,
                                        const std::vector<double>& alphas) {
  if (eta.p_grid.size() < 2 || alphas.empty())
    throw std::invalid_argument("legendre_transform: empty grid");
  if (eta.p_grid.size() != eta.eta.size())
    throw std::invalid_argument("legendre_transform: grid size mismatch");
  if (eta.p_grid.back() < 40.0)
    throw std::invalid_argument("legendre_transform: p grid must reach p_max >= 40");

  MultifractalSpectrum spec;
  spec.alphas = alphas;
  std::sort(spec.alphas.begin(), spec.alphas.end());
  spec.d_values.reserve(spec.alphas.size());
  const std::size_t n = eta.p_grid.size();
  for (double a : spec.alphas) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i)
      best = std::min(best, a * eta.p_grid[i] - eta.eta[i] + 1.0);
    // Divergence: objective still decreasing at the boundary of the grid.
    const double g_last = a * eta.p_grid[n - 1] - eta.eta[n - 1] + 1.0;
    const double g_prev = a * eta.p_grid[n - 2] - eta.eta[n - 2] + 1.0;
    const double slope = (g_last - g_prev) / (eta.p_grid[n - 1] - eta.p_grid[n - 2]);
    spec.d_values.push_back(slope < -1e-6 ? dim_minus_infinity : best);
  }
  spec.source = SpectrumSource::legendre_numeric;
  return spec;
}

FormalismReport formalism_check(double s, double alpha_step, double tolerance) {
  if (!(s > 0.5)) throw std::invalid_argument("formalism_check: requires s > 1/2");
  FormalismReport rep;
  rep.s = s;
  rep.tolerance = tolerance;
  for (double a = s - 0.5; a <= s - 0.25 + 1e-12; a += alpha_step)
    rep.alphas.push_back(std::min(a, s - 0.25));
  if (rep.alphas.back() < s - 0.25) rep.alphas.push_back(s - 0.25);

  const EtaCurve eta = eta_curve_closed_form(s);
  const MultifractalSpectrum numeric = legendre_transform(eta, rep.alphas);
  const MultifractalSpectrum closed = spectrum_closed_form(s, rep.alphas);
  rep.legendre = numeric.d_values;
  rep.closed_form = closed.d_values;
  double dev = 0.0;
  for (std::size_t i = 0; i < rep.alphas.size(); ++i)
    dev = std::max(dev, std::abs(rep.legendre[i] - rep.closed_form[i]));
  rep.max_abs_deviation = dev;
  rep.pass = dev < tolerance;
  return rep;
}

}  // namespace rsflat
