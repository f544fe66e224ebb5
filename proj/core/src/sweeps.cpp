#include "rsflat/sweeps.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>

namespace rsflat {

void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn) {
  if (n == 0) return;
  const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(n)));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

namespace {

int ceil_sqrt(freq_t k) {
  int r = static_cast<int>(std::floor(std::sqrt(static_cast<double>(k))));
  while (static_cast<freq_t>(r) * r < k) ++r;
  while (r > 1 && static_cast<freq_t>(r - 1) * (r - 1) >= k) --r;
  return r;
}

// Exact high-pass L2 norm by direct summation; no grid, so n_max can be large.
double hp_l2_direct(double s, int n_lo, int n_max) {
  long double acc = 0.0L;
  for (int n = n_lo; n <= n_max; ++n)
    acc += std::pow(static_cast<long double>(n), -4.0L * s);
  return static_cast<double>(std::sqrt(acc));
}

HpPoint hp_point(double s, double p, freq_t n_freq, const HpSweepOptions& opt,
                 bool flatness) {
  HpPoint pt;
  pt.n_freq = static_cast<double>(n_freq);
  const int n_lo = ceil_sqrt(n_freq);

  if (p == 2.0 && opt.p2_exact_route && !flatness) {
    // Grow the truncation until the sup-tail rule certifies, when attainable.
    const bool tail_convergent = riemann_tail_bound(s, 2).convergent;
    int n_max = std::max(64 * n_lo, 4 * n_lo);
    double value = 0.0;
    for (;;) {
      value = hp_l2_direct(s, n_lo, n_max);
      if (!tail_convergent) break;  // rule unattainable at any truncation
      const TailBound tb = riemann_tail_bound(s, n_max);
      if (tb.sup_tail < opt.rule_fraction * value) {
        pt.sup_rule_met = true;
        break;
      }
      if (n_max >= opt.n_max_cap) break;
      n_max = std::min(opt.n_max_cap, 4 * n_max);
    }
    pt.n_max = n_max;
    pt.value = value;
    pt.tail = riemann_tail_bound(s, n_max);
    pt.certified = true;  // Plancherel route, exact for the truncated object
    return pt;
  }

  SeriesSpec spec{s, std::max(static_cast<int>(std::lround(opt.truncation_ratio * n_lo)),
                              n_lo + 1)};
  auto [hp, tail] = high_pass_riemann(spec, n_freq);
  pt.n_max = spec.n_max;
  pt.tail = tail;
  if (flatness) {
    const QuadratureReport rep = lp_norm(hp, p, opt.grid);
    const double den_root = l2_exact(hp);
    pt.value = std::pow(rep.value, p) / std::pow(den_root, p);
    pt.certified = rep.certified_exact;
    // For a ratio the tail rule is judged against the constituent norms; the
    // L2 denominator is the smaller of the two.
    pt.sup_rule_met = tail.convergent && tail.sup_tail < opt.rule_fraction * den_root;
  } else {
    const QuadratureReport rep = lp_norm(hp, p, opt.grid);
    pt.value = rep.value;
    pt.certified = rep.certified_exact;
    pt.sup_rule_met = tail.convergent && tail.sup_tail < opt.rule_fraction * pt.value;
  }
  return pt;
}

// Cache adapters: one record per sweep point, keyed per the canonical rule.

std::string hp_policy_tag(const HpSweepOptions& opt) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%s#rf=%g#cap=%d", grid_policy_tag(opt.grid),
                opt.rule_fraction, opt.n_max_cap);
  return buf;
}

std::optional<HpPoint> hp_cache_get(const HpSweepOptions& opt, const char* quantity,
                                    double s, double p, freq_t n_freq) {
  if (opt.cache == nullptr) return std::nullopt;
  const std::string key =
      ResultCache::canonical_key(quantity, s, p, static_cast<double>(n_freq),
                                 opt.truncation_ratio, hp_policy_tag(opt), 1);
  const auto rec = opt.cache->cache_get(key);
  if (!rec) return std::nullopt;
  HpPoint pt;
  pt.n_freq = static_cast<double>(n_freq);
  pt.n_max = rec->values.at("n_max").get<int>();
  pt.value = rec->values.at("value").get<double>();
  pt.certified = rec->certification.at("certified").get<bool>();
  pt.tail.sup_tail = rec->certification.at("sup_tail").get<double>();
  pt.tail.convergent = rec->certification.at("convergent").get<bool>();
  pt.sup_rule_met = rec->certification.at("sup_rule_met").get<bool>();
  return pt;
}

void hp_cache_put(const HpSweepOptions& opt, const char* quantity, double s, double p,
                  const HpPoint& pt) {
  if (opt.cache == nullptr) return;
  ResultRecord rec;
  rec.quantity = quantity;
  rec.parameters = {{"s", s}, {"p", p}, {"scale", pt.n_freq},
                    {"truncation_ratio", opt.truncation_ratio},
                    {"grid_policy", hp_policy_tag(opt)}};
  rec.values = {{"value", pt.value}, {"n_max", pt.n_max}};
  rec.certification = {{"certified", pt.certified},
                       {"sup_tail", pt.tail.sup_tail},
                       {"convergent", pt.tail.convergent},
                       {"sup_rule_met", pt.sup_rule_met}};
  rec.timestamp = iso8601_utc_now();
  const std::string key = ResultCache::canonical_key(
      quantity, s, p, pt.n_freq, opt.truncation_ratio, hp_policy_tag(opt), 1);
  opt.cache->cache_put(key, rec);
}

HpCurve hp_sweep_impl(const char* quantity, double s, double p,
                      const std::vector<freq_t>& cutoffs, const HpSweepOptions& opt,
                      bool flatness) {
  HpCurve out;
  out.points.resize(cutoffs.size());
  parallel_for(cutoffs.size(), opt.jobs, [&](std::size_t i) {
    if (auto hit = hp_cache_get(opt, quantity, s, p, cutoffs[i])) {
      out.points[i] = *hit;
      return;
    }
    out.points[i] = hp_point(s, p, cutoffs[i], opt, flatness);
    hp_cache_put(opt, quantity, s, p, out.points[i]);
  });
  out.curve.meta = {s, p, quantity};
  for (const HpPoint& pt : out.points) out.curve.push(pt.n_freq, pt.value);
  return out;
}

}  // namespace

HpCurve hp_norm_sweep(double s, double p, const std::vector<freq_t>& cutoffs,
                      const HpSweepOptions& opt) {
  return hp_sweep_impl("hp_norm", s, p, cutoffs, opt, /*flatness=*/false);
}

HpCurve hp_flatness_sweep(double s, double p, const std::vector<freq_t>& cutoffs,
                          const HpSweepOptions& opt) {
  return hp_sweep_impl("flatness_hp", s, p, cutoffs, opt, /*flatness=*/true);
}

double s2_plancherel(double s, double ell, int n_max) {
  const CoefficientSet inc = increment_coefficients(SeriesSpec{s, n_max}, ell);
  const double root = l2_exact(inc);
  return root * root;
}

namespace {

std::string sf_policy_tag(const SfSweepOptions& opt) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s#s2m=%d", grid_policy_tag(opt.grid), opt.s2_margin);
  return buf;
}

std::optional<SfPoint> sf_cache_get(const SfSweepOptions& opt, const char* quantity,
                                    double s, double p, double ell) {
  if (opt.cache == nullptr) return std::nullopt;
  const std::string key =
      ResultCache::canonical_key(quantity, s, p, ell, opt.margin, sf_policy_tag(opt), 1);
  const auto rec = opt.cache->cache_get(key);
  if (!rec) return std::nullopt;
  SfPoint pt;
  pt.ell = ell;
  pt.n_max = rec->values.at("n_max").get<int>();
  pt.value_root = rec->values.at("value_root").get<double>();
  pt.value = rec->values.at("value").get<double>();
  pt.certified = rec->certification.at("certified").get<bool>();
  return pt;
}

void sf_cache_put(const SfSweepOptions& opt, const char* quantity, double s, double p,
                  const SfPoint& pt) {
  if (opt.cache == nullptr) return;
  ResultRecord rec;
  rec.quantity = quantity;
  rec.parameters = {{"s", s}, {"p", p}, {"scale", pt.ell}, {"margin", opt.margin},
                    {"grid_policy", sf_policy_tag(opt)}};
  rec.values = {{"value_root", pt.value_root}, {"value", pt.value}, {"n_max", pt.n_max}};
  rec.certification = {{"certified", pt.certified}};
  rec.timestamp = iso8601_utc_now();
  opt.cache->cache_put(
      ResultCache::canonical_key(quantity, s, p, pt.ell, opt.margin, sf_policy_tag(opt), 1),
      rec);
}

}  // namespace

SfCurve sf_sweep(double s, double p, const std::vector<double>& ells,
                 const SfSweepOptions& opt) {
  SfCurve out;
  out.points.resize(ells.size());
  parallel_for(ells.size(), opt.jobs, [&](std::size_t i) {
    const double ell = ells[i];
    if (auto hit = sf_cache_get(opt, "sf_root", s, p, ell)) {
      out.points[i] = *hit;
      return;
    }
    const SeriesSpec spec{s, sf_required_n_max(ell, opt.margin)};
    const StructureFunctionPoint sp = structure_function(spec, p, ell, opt.grid);
    out.points[i] = {ell, spec.n_max, sp.value_root, sp.value, sp.quad.certified_exact};
    sf_cache_put(opt, "sf_root", s, p, out.points[i]);
  });
  out.curve.meta = {s, p, "sf_root"};
  for (const SfPoint& pt : out.points) out.curve.push(pt.ell, pt.value_root);
  return out;
}

SfCurve sf_flatness_sweep(double s, double p, const std::vector<double>& ells,
                          const SfSweepOptions& opt) {
  SfCurve out;
  out.points.resize(ells.size());
  parallel_for(ells.size(), opt.jobs, [&](std::size_t i) {
    const double ell = ells[i];
    if (auto hit = sf_cache_get(opt, "flatness_sf", s, p, ell)) {
      out.points[i] = *hit;
      return;
    }
    const SeriesSpec spec{s, sf_required_n_max(ell, opt.margin)};
    const StructureFunctionPoint sp = structure_function(spec, p, ell, opt.grid);
    const double s2 =
        s2_plancherel(s, ell, sf_required_n_max(ell, static_cast<double>(opt.s2_margin)));
    if (s2 <= 0.0) throw degenerate_input_error("sf_flatness_sweep: S_2 vanished");
    const double g = sp.value / std::pow(s2, 0.5 * p);
    out.points[i] = {ell, spec.n_max, g, g, sp.quad.certified_exact};
    sf_cache_put(opt, "flatness_sf", s, p, out.points[i]);
  });
  out.curve.meta = {s, p, "flatness_sf"};
  for (const SfPoint& pt : out.points) out.curve.push(pt.ell, pt.value);
  return out;
}

ScalingCurve partial_sum_sweep(double s, double p, const std::vector<int>& n_values,
                               const PartialSumOptions& opt) {
  std::vector<double> values(n_values.size());
  parallel_for(n_values.size(), opt.jobs, [&](std::size_t i) {
    const CoefficientSet c = riemann_coefficients(SeriesSpec{s, n_values[i]});
    values[i] = lp_norm(c, p, opt.grid).value;
  });
  ScalingCurve curve;
  curve.meta = {s, p, "partial_sum_norm"};
  for (std::size_t i = 0; i < n_values.size(); ++i)
    curve.push(static_cast<double>(n_values[i]), values[i]);
  return curve;
}

ScalingCurve block_norm_sweep(const SeriesSpec& spec, double p, int a_param, int k_lo,
                              int k_hi, const GridPolicy& policy) {
  ScalingCurve curve;
  curve.meta = {spec.s, p, "lp_block_norm"};
  for (int k = k_lo; k <= k_hi; ++k) {
    const CoefficientSet block = lp_block(spec, a_param, k);
    curve.push(std::pow(static_cast<double>(a_param), k), lp_norm(block, p, policy).value);
  }
  return curve;
}

std::vector<freq_t> geometric_cutoffs(freq_t lo, freq_t hi, double ratio) {
  if (lo < 1 || hi < lo || ratio <= 1.0)
    throw std::invalid_argument("geometric_cutoffs: need 1 <= lo <= hi, ratio > 1");
  std::vector<freq_t> out;
  double v = static_cast<double>(lo);
  while (v <= static_cast<double>(hi) * (1.0 + 1e-12)) {
    out.push_back(static_cast<freq_t>(std::llround(v)));
    v *= ratio;
  }
  return out;
}

std::vector<double> geometric_ells(double lo, double hi, double ratio) {
  if (!(lo > 0.0 && hi > 0.0) || ratio <= 1.0)
    throw std::invalid_argument("geometric_ells: need positive bounds, ratio > 1");
  // Emitted from the larger ell downward.
  const double top = std::max(lo, hi), bottom = std::min(lo, hi);
  std::vector<double> out;
  for (double v = top; v >= bottom * (1.0 - 1e-12); v /= ratio) out.push_back(v);
  return out;
}

}  // namespace rsflat
