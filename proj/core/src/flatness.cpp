#include "rsflat/flatness.hpp"

#include <cmath>

namespace rsflat {

double flatness_hp(const SeriesSpec& spec, double p, freq_t n_freq,
                   const GridPolicy& policy) {
  if (!(p >= 2.0)) throw std::invalid_argument("flatness_hp: p must be >= 2");
  auto [hp, tail] = high_pass_riemann(spec, n_freq);
  if (hp.empty()) throw degenerate_input_error("flatness_hp: empty band");
  if (p == 2.0) return 1.0;
  const double num = std::pow(lp_norm(hp, p, policy).value, p);
  const double den = std::pow(l2_exact(hp), p);
  if (den <= 0.0) throw degenerate_input_error("flatness_hp: vanishing L2 norm");
  return num / den;
}

double predicted_flatness_hp(double s, double p, double n_freq) {
  if (!(p > 0.0)) throw std::invalid_argument("predicted_flatness_hp: p must be > 0");
  if (!(s > s_star(p)))
    throw out_of_validity_error("predicted_flatness_hp: s <= s_star(p)");
  if (p < 4.0) return 1.0;
  if (p == 4.0) return std::log(n_freq);
  return std::pow(n_freq, 0.25 * p - 1.0);
}

Prediction predicted_partial_sum_norm(double s, double p, double n_big) {
  if (!(p > 0.0))
    throw std::invalid_argument("predicted_partial_sum_norm: p must be > 0");
  const double lg = std::log(n_big);
  if (s < 0.25) {
    if (p < 4.0) return Prediction::point(std::pow(n_big, 0.5 - 2.0 * s));
    if (p == 4.0)
      return Prediction::point(std::pow(n_big, 0.5 - 2.0 * s) * std::pow(lg, 0.25));
    return Prediction::point(std::pow(n_big, 1.0 - 2.0 / p - 2.0 * s));
  }
  if (s == 0.25) {
    if (p < 4.0) return Prediction::point(std::sqrt(lg));
    if (p == 4.0) return Prediction::interval(std::sqrt(lg), std::pow(lg, 0.75));
    return Prediction::point(std::pow(n_big, 0.5 - 2.0 / p));
  }
  if (s < 0.5) {
    const double threshold = 2.0 / (1.0 - 2.0 * s);
    if (std::abs(p - threshold) <= 1e-9 * threshold)
      return Prediction::interval(std::pow(lg, 1.0 / p), std::sqrt(lg));
    if (p < threshold) return Prediction::point(1.0);
    return Prediction::point(std::pow(n_big, 1.0 - 2.0 / p - 2.0 * s));
  }
  return Prediction::point(1.0);
}

double predicted_hp_norm(double s, double p, double n_freq) {
  if (!(p > 0.0)) throw std::invalid_argument("predicted_hp_norm: p must be > 0");
  const double inv_p = std::isinf(p) ? 0.0 : 1.0 / p;
  const double threshold = std::isinf(p) ? 0.5 : s_star(p);
  if (!(s > threshold)) throw out_of_validity_error("predicted_hp_norm: s <= s_star(p)");
  if (p < 4.0) return std::pow(n_freq, 0.25 - s);
  if (p == 4.0) return std::pow(n_freq, 0.25 - s) * std::pow(std::log(n_freq), 0.25);
  return std::pow(n_freq, 0.5 - inv_p - s);
}

}  // namespace rsflat
