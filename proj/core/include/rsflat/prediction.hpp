#pragma once

namespace rsflat {

// Model value for an asymptotic law.  On critical lines only two-sided bounds
// are known, so the value degenerates to an interval [lo, hi].
struct Prediction {
  double lo = 0.0;
  double hi = 0.0;

  static Prediction point(double v) { return {v, v}; }
  static Prediction interval(double lo, double hi) { return {lo, hi}; }

  bool is_interval() const { return lo != hi; }
  double value() const { return 0.5 * (lo + hi); }
  bool contains(double v, double slack = 1.0) const {
    return v >= lo / slack && v <= hi * slack;
  }
};

}  // namespace rsflat
