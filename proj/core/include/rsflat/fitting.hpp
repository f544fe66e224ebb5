#pragma once

#include <optional>
#include <string>
#include <vector>

namespace rsflat {

struct CurveMeta {
  double s = 0.0;
  double p = 0.0;
  std::string quantity;
};

// A measured (scale, value) sequence for one quantity at fixed (s, p);
// scale is N or ell, strictly monotone.
struct ScalingCurve {
  std::vector<double> scales;
  std::vector<double> values;
  CurveMeta meta;

  std::size_t size() const { return scales.size(); }
  void push(double scale, double value) {
    scales.push_back(scale);
    values.push_back(value);
  }
};

struct ExponentFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::optional<double> log_correction_power;
  double residual_max = 0.0;
};

// Fit window: how many scales to drop at the small end and the large end.
// The CLI default drops two on each side (boundary/truncation transients).
struct FitWindow {
  int drop_small = 0;
  int drop_large = 0;
};

inline constexpr FitWindow default_cli_fit_window{2, 2};

ScalingCurve apply_window(const ScalingCurve& curve, FitWindow window);

// Ordinary least squares on (log scale, log value).
ExponentFit fit_power_law(const ScalingCurve& curve);

// Fits value / scale^base = c * |log scale|^beta by regressing the log ratio
// on log |log scale|; returns beta as log_correction_power (slope holds the
// fixed base exponent).  Requires |log scale| > 1 throughout and a spread
// max/min |log scale| >= 2.
ExponentFit fit_with_log_correction(const ScalingCurve& curve, double base_exponent);

enum class GrowthKind { constant, logarithmic, power, interval };

// One flatness law: F in N, or G in ell^{-1} (so the two are comparable).
struct FlatnessLaw {
  GrowthKind kind = GrowthKind::constant;
  double exponent = 0.0;   // power exponent; 0 for constant/log
  double log_power = 0.0;  // extra (log)^q factor; q = -p/2 on the s = 5/4 line
  double interval_hi_log_power = 0.0;  // upper log power when kind == interval
};

// Which branch of the flatness theorems applies at (s, p), with flags on the
// critical lines p = 4, s = 5/4, p = 2/(3-2s) and s = 3/2.
struct RegimeDescriptor {
  bool in_validity_range = false;  // s > s_star(p)
  FlatnessLaw hp;                  // F law, scale N
  FlatnessLaw sf;                  // G law, scale ell^{-1}
  bool critical_p4 = false;
  bool critical_s54 = false;
  bool critical_sf_threshold = false;  // p == 2/(3-2s), 5/4 < s < 3/2
  bool smooth_range = false;           // s >= 3/2
  int region = 0;  // 1 non-intermittent, 2 matching power laws, 3 SF-only weaker law
  bool flatnesses_equivalent = false;
  std::string verdict;
};

RegimeDescriptor classify_regime(double s, double p);

}  // namespace rsflat
