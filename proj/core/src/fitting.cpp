#include "rsflat/fitting.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "rsflat/errors.hpp"
#include "rsflat/series.hpp"

namespace rsflat {

namespace {

struct Ols {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 1.0;
  double residual_max = 0.0;
};

Ols ols(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit: degenerate scale range");
  Ols f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss_res = 0.0, ss_tot = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (f.intercept + f.slope * x[i]);
    ss_res += r * r;
    ss_tot += (y[i] - my) * (y[i] - my);
    f.residual_max = std::max(f.residual_max, std::abs(r));
  }
  f.r_squared = ss_tot > 0.0 ? std::max(0.0, 1.0 - ss_res / ss_tot) : 1.0;
  return f;
}

void check_curve(const ScalingCurve& curve) {
  if (curve.scales.size() != curve.values.size())
    throw std::invalid_argument("fit: scales/values length mismatch");
  if (curve.size() < 4) throw insufficient_data_error("fit: need at least 4 points");
  for (std::size_t i = 0; i < curve.size(); ++i) {
    if (!(curve.scales[i] > 0.0))
      throw std::invalid_argument("fit: scales must be positive");
    if (!(curve.values[i] > 0.0))
      throw std::invalid_argument("fit: values must be positive");
    if (i > 0 && (curve.scales[i] > curve.scales[i - 1]) !=
                     (curve.scales[1] > curve.scales[0]))
      throw std::invalid_argument("fit: scales must be strictly monotone");
    if (i > 0 && curve.scales[i] == curve.scales[i - 1])
      throw std::invalid_argument("fit: scales must be strictly monotone");
  }
}

std::string fmt_exp(double e) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", e);
  return buf;
}

}  // namespace

ScalingCurve apply_window(const ScalingCurve& curve, FitWindow window) {
  if (window.drop_small < 0 || window.drop_large < 0)
    throw std::invalid_argument("apply_window: negative drop counts");
  const std::size_t drop =
      static_cast<std::size_t>(window.drop_small) + static_cast<std::size_t>(window.drop_large);
  if (drop >= curve.size())
    throw insufficient_data_error("apply_window: window drops every point");
  const bool ascending = curve.scales.back() > curve.scales.front();
  const std::size_t lead = ascending ? static_cast<std::size_t>(window.drop_small)
                                     : static_cast<std::size_t>(window.drop_large);
  const std::size_t tail = ascending ? static_cast<std::size_t>(window.drop_large)
                                     : static_cast<std::size_t>(window.drop_small);
  ScalingCurve out;
  out.meta = curve.meta;
  for (std::size_t i = lead; i + tail < curve.size(); ++i)
    out.push(curve.scales[i], curve.values[i]);
  return out;
}

ExponentFit fit_power_law(const ScalingCurve& curve) {
  check_curve(curve);
  std::vector<double> x(curve.size()), y(curve.size());
  for (std::size_t i = 0; i < curve.size(); ++i) {
    x[i] = std::log(curve.scales[i]);
    y[i] = std::log(curve.values[i]);
  }
  const Ols f = ols(x, y);
  ExponentFit fit;
  fit.slope = f.slope;
  fit.intercept = f.intercept;
  fit.r_squared = f.r_squared;
  fit.residual_max = f.residual_max;
  return fit;
}

ExponentFit fit_with_log_correction(const ScalingCurve& curve, double base_exponent) {
  check_curve(curve);
  std::vector<double> x(curve.size()), y(curve.size());
  double umin = std::numeric_limits<double>::infinity(), umax = 0.0;
  for (std::size_t i = 0; i < curve.size(); ++i) {
    const double u = std::abs(std::log(curve.scales[i]));
    if (!(u > 1.0))
      throw insufficient_range_error(
          "fit_with_log_correction: |log scale| must exceed 1 at every point");
    umin = std::min(umin, u);
    umax = std::max(umax, u);
    x[i] = std::log(u);
    y[i] = std::log(curve.values[i]) - base_exponent * std::log(curve.scales[i]);
  }
  if (umax / umin < 2.0)
    throw insufficient_range_error(
        "fit_with_log_correction: max/min of |log scale| below 2");
  const Ols f = ols(x, y);
  ExponentFit fit;
  fit.slope = base_exponent;
  fit.intercept = f.intercept;
  fit.r_squared = f.r_squared;
  fit.log_correction_power = f.slope;
  fit.residual_max = f.residual_max;
  return fit;
}

RegimeDescriptor classify_regime(double s, double p) {
  if (!(p > 0.0)) throw std::invalid_argument("classify_regime: p must be > 0");
  constexpr double eps = 1e-12;
  RegimeDescriptor r;
  r.in_validity_range = s > s_star(p);
  r.critical_p4 = std::abs(p - 4.0) < eps;
  r.critical_s54 = std::abs(s - 1.25) < eps;
  r.smooth_range = s >= 1.5;
  const bool mid_range = s > 1.25 && s < 1.5;
  const double sf_threshold = mid_range ? 2.0 / (3.0 - 2.0 * s) : 0.0;
  r.critical_sf_threshold = mid_range && std::abs(p - sf_threshold) < 1e-9;

  // F is s-independent.
  if (p < 4.0 - eps)
    r.hp = {GrowthKind::constant, 0.0, 0.0, 0.0};
  else if (r.critical_p4)
    r.hp = {GrowthKind::logarithmic, 0.0, 1.0, 0.0};
  else
    r.hp = {GrowthKind::power, 0.25 * p - 1.0, 0.0, 0.0};

  // G by s-regime, exponents in ell^{-1}.
  if (s < 1.25) {
    r.sf = r.hp;
  } else if (r.critical_s54) {
    if (p < 4.0 - eps)
      r.sf = {GrowthKind::constant, 0.0, 0.0, 0.0};
    else if (r.critical_p4)
      r.sf = {GrowthKind::interval, 0.0, 0.0, 1.0};  // between 1 and log
    else
      r.sf = {GrowthKind::power, 0.25 * p - 1.0, -0.5 * p, 0.0};
  } else if (mid_range) {
    if (r.critical_sf_threshold)
      r.sf = {GrowthKind::interval, 0.0, 0.0, 0.5 * p};  // between 1 and log^{p/2}
    else if (p < sf_threshold)
      r.sf = {GrowthKind::constant, 0.0, 0.0, 0.0};
    else
      r.sf = {GrowthKind::power, 1.5 * p - 1.0 - p * s, 0.0, 0.0};
  } else {
    r.sf = {GrowthKind::constant, 0.0, 0.0, 0.0};
  }

  r.flatnesses_equivalent = r.hp.kind == r.sf.kind &&
                            std::abs(r.hp.exponent - r.sf.exponent) < eps &&
                            std::abs(r.hp.log_power - r.sf.log_power) < eps;

  if (r.hp.kind == GrowthKind::constant && r.sf.kind == GrowthKind::constant)
    r.region = 1;
  else if (r.flatnesses_equivalent || r.critical_p4)
    r.region = 2;
  else
    r.region = 3;

  auto law_str = [](const FlatnessLaw& law) -> std::string {
    switch (law.kind) {
      case GrowthKind::constant:
        return "constant";
      case GrowthKind::logarithmic:
        return "log-growth";
      case GrowthKind::interval:
        return "critical band";
      case GrowthKind::power: {
        std::string out = "power " + fmt_exp(law.exponent);
        if (law.log_power != 0.0) out += " (log^" + fmt_exp(law.log_power) + ")";
        return out;
      }
    }
    return "";
  };
  r.verdict = "F " + law_str(r.hp) + "; G " + law_str(r.sf) + "; flatnesses " +
              (r.flatnesses_equivalent ? "match" : "differ");
  if (!r.in_validity_range) r.verdict += " [outside validity range s > s_star(p)]";
  return r;
}

}  // namespace rsflat
