#include "rsflat/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>

#include "rsflat/filters.hpp"
#include "rsflat/fitting.hpp"
#include "rsflat/flatness.hpp"
#include "rsflat/multifractal.hpp"
#include "rsflat/sampling.hpp"
#include "rsflat/series.hpp"
#include "rsflat/structure.hpp"
#include "rsflat/sweeps.hpp"

namespace rsflat {

namespace {

std::string fmt(const char* format, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof buf, format, args);
  va_end(args);
  return buf;
}

// Plain OLS of y against x (linear coordinates), for the F ~ log N fit.
struct LinFit {
  double slope = 0.0, intercept = 0.0, r_squared = 1.0;
};
LinFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LinFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss_res = 0, ss_tot = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (f.intercept + f.slope * x[i]);
    ss_res += r * r;
    ss_tot += (y[i] - my) * (y[i] - my);
  }
  f.r_squared = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
  return f;
}

std::vector<double> dyadic_ells(int j_lo, int j_hi) {
  std::vector<double> out;
  for (int j = j_lo; j <= j_hi; ++j) out.push_back(std::ldexp(1.0, -j));
  return out;
}

CriterionResult make_result(int id, const char* name) {
  CriterionResult r;
  r.id = id;
  r.name = name;
  return r;
}

// ---- criterion 1: Plancherel exactness ----
CriterionResult c1_plancherel() {
  CriterionResult r = make_result(1, "plancherel-exactness");
  const CoefficientSet c = riemann_coefficients(SeriesSpec{1.0, 64});
  std::int64_t m = 1;
  while (m <= 2 * c.lambda()) m <<= 1;
  const SampleGrid grid = sample(c, m);
  const QuadratureReport rep = lp_norm(grid, 2.0);
  const double exact = l2_exact(c);
  const double dev = std::abs(rep.value - exact) / exact;
  r.pass = rep.certified_exact && dev < 1e-10;
  r.detail = fmt("s=1 n_max=64 m=%lld: |lp2-l2_exact|/l2 = %.3g (tol 1e-10)",
                 static_cast<long long>(m), dev);
  return r;
}

// ---- criterion 2: L4 counting oracle ----
CriterionResult c2_l4_counting() {
  CriterionResult r = make_result(2, "l4-counting-oracle");
  double worst = 0.0;
  bool count2_ok = false;
  for (int n : {2, 4, 8, 16, 32}) {
    const double oracle = l4_exact_counting(n);
    const double oracle4 = std::pow(oracle, 4.0);
    if (n == 2) count2_ok = std::abs(oracle4 - 6.0) < 1e-9;
    const double quad = lp_norm(zalcwasser_coefficients(n), 4.0).value;
    const double quad4 = std::pow(quad, 4.0);
    worst = std::max(worst, std::abs(quad4 - oracle4) / oracle4);
  }
  r.pass = count2_ok && worst < 1e-8;
  r.detail = fmt("count(N=2)=6 %s; max rel dev ||K_N||_4^4 vs count = %.3g (tol 1e-8)",
                 count2_ok ? "ok" : "WRONG", worst);
  return r;
}

// ---- criterion 3: Zalcwasser ratio boundedness ----
CriterionResult c3_zalcwasser_ratio() {
  CriterionResult r = make_result(3, "zalcwasser-ratio-bounded");
  double worst = 0.0;
  std::string worst_tag;
  for (double p : {2.0, 3.0, 4.0, 6.0, 8.0}) {
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (int j = 4; j <= 9; ++j) {
      const int n = 1 << j;
      const double norm = lp_norm(zalcwasser_coefficients(n), p).value;
      const double psi = predicted_partial_sum_norm(0.0, p, n).value();
      const double ratio = norm / psi;
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
    if (hi / lo > worst) {
      worst = hi / lo;
      worst_tag = fmt("p=%g", p);
    }
  }
  r.pass = worst < 3.0;
  r.detail = fmt("max over p of (max/min ||K_N||_p / psi_p(N)) = %.3f at %s (bound 3)",
                 worst, worst_tag.c_str());
  return r;
}

// ---- criterion 4: high-pass norm law ----
CriterionResult c4_hp_norm_law(int jobs) {
  CriterionResult r = make_result(4, "high-pass-norm-law");
  const std::vector<freq_t> cutoffs = geometric_cutoffs(64, 262144, 4.0);

  HpSweepOptions o2;
  o2.jobs = jobs;
  const HpCurve hp2 = hp_norm_sweep(1.0, 2.0, cutoffs, o2);
  const double slope2 = fit_power_law(hp2.curve).slope;
  bool rule2 = true, conv = true;
  for (const auto& pt : hp2.points) {
    rule2 = rule2 && pt.sup_rule_met;
    conv = conv && pt.tail.convergent;
  }

  HpSweepOptions o6;
  o6.jobs = jobs;
  o6.truncation_ratio = 4.0;
  const HpCurve hp6 = hp_norm_sweep(1.0, 6.0, cutoffs, o6);
  const double slope6 = fit_power_law(hp6.curve).slope;
  bool cert6 = true;
  for (const auto& pt : hp6.points) {
    cert6 = cert6 && pt.certified;
    conv = conv && pt.tail.convergent;
  }

  const double e2 = std::abs(slope2 + 0.75), e6 = std::abs(slope6 + 2.0 / 3.0);
  r.pass = e2 <= 0.08 && e6 <= 0.08 && rule2 && cert6 && conv;
  r.detail = fmt(
      "slope p=2: %.4f (target -0.75, tol 0.08, sup-tail rule %s); "
      "slope p=6: %.4f (target -0.6667, tol 0.08, certified %s, tails convergent %s)",
      slope2, rule2 ? "met" : "NOT MET", slope6, cert6 ? "yes" : "NO",
      conv ? "yes" : "NO");
  return r;
}

// ---- criterion 5: structure-function slopes ----
CriterionResult c5_sf_slopes(int jobs) {
  CriterionResult r = make_result(5, "structure-function-slopes");
  const std::vector<double> ells = dyadic_ells(6, 16);

  auto s2_curve = [&](double s) {
    ScalingCurve c;
    c.meta = {s, 2.0, "sf_root"};
    for (double ell : ells)
      c.push(ell, std::sqrt(s2_plancherel(s, ell, sf_required_n_max(ell, 64.0))));
    return c;
  };
  const double sl_s1_p2 = fit_power_law(s2_curve(1.0)).slope;
  const double sl_s2_p2 = fit_power_law(s2_curve(2.0)).slope;

  SfSweepOptions o6;
  o6.jobs = jobs;
  const SfCurve sf6 = sf_sweep(1.0, 6.0, ells, o6);
  const double sl_s1_p6 = fit_power_law(sf6.curve).slope;

  const double e1 = std::abs(sl_s1_p2 - 0.75);
  const double e2 = std::abs(sl_s1_p6 - 2.0 / 3.0);
  const double e3 = std::abs(sl_s2_p2 - 1.0);
  r.pass = e1 <= 0.08 && e2 <= 0.08 && e3 <= 0.05;
  r.detail = fmt(
      "s=1: p=2 slope %.4f (3/4 tol .08), p=6 slope %.4f (2/3 tol .08); "
      "s=2 p=2 slope %.4f (1 tol .05)",
      sl_s1_p2, sl_s1_p6, sl_s2_p2);
  return r;
}

// ---- criterion 6: flatness log growth at p = 4 ----
CriterionResult c6_flatness_log(int jobs) {
  CriterionResult r = make_result(6, "flatness-log-growth");
  HpSweepOptions opt;
  opt.jobs = jobs;
  opt.truncation_ratio = 3.0;
  const std::vector<freq_t> cutoffs = geometric_cutoffs(256, 262144, 2.0);
  const HpCurve f = hp_flatness_sweep(1.0, 4.0, cutoffs, opt);

  std::vector<double> log_n, values;
  for (std::size_t i = 0; i < f.curve.size(); ++i) {
    log_n.push_back(std::log(f.curve.scales[i]));
    values.push_back(f.curve.values[i]);
  }
  const LinFit lin = linear_fit(log_n, values);
  const double pow_slope = fit_power_law(f.curve).slope;
  r.pass = lin.r_squared > 0.98 && lin.slope > 0.0 && pow_slope < 0.1;
  r.detail = fmt("F vs log N: R^2=%.4f slope=%.4f (need R^2>0.98, slope>0); "
                 "pure power slope=%.4f (need <0.1)",
                 lin.r_squared, lin.slope, pow_slope);
  return r;
}

// ---- criterion 7: regime map / Corollary C ----

struct RegimeCellResult {
  double s = 0, p = 0;
  double f_measured = 0, f_theory = 0;
  double g_measured = 0, g_theory = 0;
  bool asserted = true;
  bool pass = true;
};

RegimeCellResult regime_cell(double s, double p, int jobs) {
  RegimeCellResult cell;
  cell.s = s;
  cell.p = p;
  const RegimeDescriptor reg = classify_regime(s, p);
  cell.f_theory = reg.hp.exponent;
  cell.g_theory = reg.sf.exponent;

  // Near-critical exclusion: heavy moments next to the p = 2/(3-2s) branch
  // boundary or the s = 5/4 crossover converge like ell^gap and cannot reach
  // their asymptote at any feasible scale.
  const double gap = std::min(std::abs(1.5 - s - 1.0 / p), std::abs(s - 1.25));
  cell.asserted = !(p >= 8.0 && gap <= 0.05 + 1e-9);

  HpSweepOptions fo;
  fo.jobs = jobs;
  fo.truncation_ratio = 4.0;
  const std::vector<freq_t> n_range =
      p >= 8.0 ? geometric_cutoffs(256, 65536, 4.0) : geometric_cutoffs(1024, 262144, 4.0);
  const HpCurve fc = hp_flatness_sweep(s, p, n_range, fo);
  cell.f_measured = fit_power_law(fc.curve).slope;

  SfSweepOptions go;
  go.jobs = jobs;
  int drop_large = 0;
  std::vector<double> ells;
  if (p < 4.0) {
    go.margin = 8.0;
    ells = dyadic_ells(6, 16);
  } else if (p < 8.0) {
    go.margin = 8.0;
    ells = dyadic_ells(5, 15);
    drop_large = 4;
  } else {
    go.margin = 16.0;
    ells = dyadic_ells(4, 13);
    drop_large = 4;
  }
  const SfCurve gc = sf_flatness_sweep(s, p, ells, go);
  cell.g_measured = -fit_power_law(apply_window(gc.curve, FitWindow{0, drop_large})).slope;

  cell.pass = std::abs(cell.f_measured - cell.f_theory) <= 0.1 &&
              std::abs(cell.g_measured - cell.g_theory) <= 0.1;
  return cell;
}

CriterionResult c7_regime_map(int jobs) {
  CriterionResult r = make_result(7, "regime-map-corollary-c");
  std::ostringstream detail;
  bool all_pass = true;
  RegimeCellResult showcase;  // (s=1.45, p=6): F power 1/2 vs G constant
  for (double s : {0.8, 1.0, 1.3, 1.45}) {
    for (double p : {3.0, 6.0, 12.0}) {
      const RegimeCellResult cell = regime_cell(s, p, jobs);
      if (s == 1.45 && p == 6.0) showcase = cell;
      if (cell.asserted && !cell.pass) {
        all_pass = false;
        detail << fmt("FAIL (s=%g,p=%g): F %.3f/%.2f G %.3f/%.2f; ", s, p,
                      cell.f_measured, cell.f_theory, cell.g_measured, cell.g_theory);
      }
      if (!cell.asserted)
        detail << fmt("near-critical (s=%g,p=%g) reported only: F %.3f/%.2f G %.3f/%.2f; ",
                      s, p, cell.f_measured, cell.f_theory, cell.g_measured,
                      cell.g_theory);
    }
  }
  // Corollary C showcase: F and G exponents differ at s > 5/4.
  const bool corollary_c = std::abs(showcase.g_measured - 0.0) <= 0.1 &&
                           std::abs(showcase.f_measured - 0.5) <= 0.1;
  if (!corollary_c) all_pass = false;
  detail << fmt("showcase (s=1.45,p=6): F=%.3f (0.5) vs G=%.3f (0) -> flatnesses differ %s",
                showcase.f_measured, showcase.g_measured, corollary_c ? "ok" : "FAIL");
  r.pass = all_pass;
  r.detail = detail.str();
  return r;
}

// ---- criterion 8: log-correction detection ----
CriterionResult c8_log_correction() {
  CriterionResult r = make_result(8, "log-correction-detection");
  ScalingCurve curve;
  curve.meta = {1.25, 2.0, "sf_root"};
  for (double ell : dyadic_ells(6, 16))
    curve.push(ell, std::sqrt(s2_plancherel(1.25, ell, sf_required_n_max(ell, 64.0))));
  const ExponentFit fit = fit_with_log_correction(curve, 1.0);
  const double beta = fit.log_correction_power.value();
  r.pass = beta >= 0.3 && beta <= 0.7;
  r.detail = fmt("s=5/4 p=2, base exponent 1: beta = %.4f (accept [0.3, 0.7], target 0.5)",
                 beta);
  return r;
}

// ---- criterion 9: multifractal formalism ----
CriterionResult c9_formalism() {
  CriterionResult r = make_result(9, "multifractal-formalism");
  double worst = 0.0;
  bool divergence_ok = true;
  for (double s : {0.6, 0.8, 1.0, 1.25, 1.5, 2.0}) {
    const FormalismReport rep = formalism_check(s);
    // Criterion window starts at s - 1/2 + 0.01.
    double dev = 0.0;
    for (std::size_t i = 0; i < rep.alphas.size(); ++i)
      if (rep.alphas[i] >= s - 0.5 + 0.01 - 1e-12)
        dev = std::max(dev, std::abs(rep.legendre[i] - rep.closed_form[i]));
    worst = std::max(worst, dev);
    const EtaCurve eta = eta_curve_closed_form(s);
    const MultifractalSpectrum below = legendre_transform(eta, {s - 0.5 - 0.05});
    divergence_ok = divergence_ok && std::isinf(below.d_values[0]) && below.d_values[0] < 0;
  }
  r.pass = worst < 1e-3 && divergence_ok;
  r.detail = fmt("max |legendre - closed_form| over s set = %.2e (tol 1e-3); "
                 "divergence below alpha = s-1/2 flagged: %s",
                 worst, divergence_ok ? "yes" : "NO");
  return r;
}

// ---- criterion 10: eta estimation ----
CriterionResult c10_eta_estimate() {
  CriterionResult r = make_result(10, "eta-estimation");
  const int a_param = 5, k_lo = 3, k_hi = 8;
  const double top_freq = std::pow(5.0, k_hi + 1);
  const SeriesSpec spec{1.0, static_cast<int>(std::ceil(std::sqrt(top_freq))) + 1};
  double worst = 0.0;
  std::string per_p;
  for (double p : {2.0, 4.0, 8.0}) {
    const double est = eta_estimate(spec, p, a_param, k_lo, k_hi);
    const double closed = eta_closed_form(1.0, p);
    worst = std::max(worst, std::abs(est - closed));
    per_p += fmt("p=%g: %.3f/%.2f  ", p, est, closed);
  }
  r.pass = worst <= 0.15;
  r.detail = fmt("A=5 blocks k=3..8, s=1: %smax |est - closed| = %.3f (tol 0.15)",
                 per_p.c_str(), worst);
  return r;
}

// ---- criterion 11: randomized invariant suite ----
CriterionResult c11_invariants(std::uint64_t seed, int cases) {
  CriterionResult r = make_result(11, "invariant-suite");
  const InvariantStats st = run_invariant_suite(seed, cases);
  r.pass = st.failures == 0 && st.cases >= cases;
  std::string first;
  if (!st.messages.empty()) first = "; first: " + st.messages.front();
  r.detail = fmt("%d randomized cases, %d failures (seed %llu)%s", st.cases, st.failures,
                 static_cast<unsigned long long>(seed), first.c_str());
  return r;
}

CriterionResult timed(const std::function<CriterionResult()>& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  CriterionResult r = fn();
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt) {
  std::vector<CriterionResult> out;
  const int jobs = std::max(1, opt.jobs);
  if (opt.quick) {
    out.push_back(timed([] { return c1_plancherel(); }));
    out.push_back(timed([] { return c2_l4_counting(); }));
    out.push_back(timed([] { return c9_formalism(); }));
    out.push_back(timed([&] { return c11_invariants(opt.seed, 60); }));
    return out;
  }
  out.push_back(timed([] { return c1_plancherel(); }));
  out.push_back(timed([] { return c2_l4_counting(); }));
  out.push_back(timed([] { return c3_zalcwasser_ratio(); }));
  out.push_back(timed([&] { return c4_hp_norm_law(jobs); }));
  out.push_back(timed([&] { return c5_sf_slopes(jobs); }));
  out.push_back(timed([&] { return c6_flatness_log(jobs); }));
  out.push_back(timed([&] { return c7_regime_map(jobs); }));
  out.push_back(timed([] { return c8_log_correction(); }));
  out.push_back(timed([] { return c9_formalism(); }));
  out.push_back(timed([] { return c10_eta_estimate(); }));
  out.push_back(timed([&] { return c11_invariants(opt.seed, 200); }));
  return out;
}

namespace {

// One named check inside the randomized suite.
struct InvariantContext {
  std::mt19937_64 rng;
  InvariantStats* stats = nullptr;

  void check(bool ok, const std::string& what) {
    ++stats->cases;
    if (!ok) {
      ++stats->failures;
      if (stats->messages.size() < 8) stats->messages.push_back(what);
    }
  }
  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  }
  int uniform_int(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  }
  SeriesSpec random_spec() {
    return SeriesSpec{uniform(0.6, 2.2), uniform_int(3, 24)};
  }
};

void series_invariants(InvariantContext& ctx) {
  const SeriesSpec spec = ctx.random_spec();
  const CoefficientSet c = riemann_coefficients(spec);
  bool support_ok = c.size() == static_cast<std::size_t>(spec.n_max);
  for (int n = 1; n <= spec.n_max; ++n)
    support_ok = support_ok && c.contains(static_cast<freq_t>(n) * n);
  ctx.check(support_ok, "riemann support = {n^2 : n <= n_max}");

  const double a = ctx.uniform(-2.0, 2.0);
  const CoefficientSet shifted = phase_shift(c, a);
  bool moduli_ok = shifted.size() == c.size();
  for (std::size_t i = 0; i < c.size() && moduli_ok; ++i) {
    moduli_ok = shifted.entries()[i].first == c.entries()[i].first &&
                std::abs(std::abs(shifted.entries()[i].second) -
                         std::abs(c.entries()[i].second)) <
                    1e-12 * std::abs(c.entries()[i].second);
  }
  ctx.check(moduli_ok, "phase_shift preserves support and moduli");

  const double ell = ctx.uniform(0.001, 0.999);
  const CoefficientSet inc = increment_coefficients(spec, ell);
  bool inc_ok = true;
  for (const auto& [k, v] : inc.entries()) {
    const double n = std::sqrt(static_cast<double>(k));
    const double expect =
        2.0 * std::abs(std::sin(M_PI * static_cast<double>(k) * ell)) *
        std::pow(n, -2.0 * spec.s);
    if (std::abs(std::abs(v) - expect) > 1e-9 * std::max(expect, 1e-30)) inc_ok = false;
  }
  ctx.check(inc_ok, "increment moduli = 2|sin(pi n^2 ell)| n^{-2s}");

  const double x = ctx.uniform(-1.5, 1.5);
  const cplx f0 = direct_eval(c, x), f1 = direct_eval(c, x + 1.0);
  ctx.check(std::abs(f0 - f1) <= 1e-10 * std::max(1.0, std::abs(f0)),
            "direct_eval periodicity");
}

void sampling_invariants(InvariantContext& ctx) {
  const SeriesSpec spec = ctx.random_spec();
  const CoefficientSet c = riemann_coefficients(spec);

  const QuadratureReport q2 = lp_norm(c, 2.0);
  const double exact = l2_exact(c);
  ctx.check(std::abs(q2.value - exact) <= 1e-10 * exact, "Plancherel exactness");

  const double a = ctx.uniform(0.0, 1.0);
  const double p = std::vector<double>{2.0, 3.0, 4.0, 6.0}[ctx.uniform_int(0, 3)];
  const double n1 = lp_norm(c, p).value;
  const double n2 = lp_norm(phase_shift(c, a), p).value;
  ctx.check(std::abs(n1 - n2) <= 1e-9 * n1, "shift invariance of lp_norm");

  const double p_lo = ctx.uniform(0.5, 3.0), p_hi = p_lo + ctx.uniform(0.1, 3.0);
  ctx.check(lp_norm(c, p_lo).value <= lp_norm(c, p_hi).value + 1e-9,
            "norm monotone in p");

  const double t = ctx.uniform(0.25, 4.0);
  ctx.check(std::abs(lp_norm(c.scaled(t), p).value - t * n1) <= 1e-10 * t * n1,
            "norm homogeneity");

  // Even-p certification: doubling a certified grid moves nothing.
  std::int64_t m = 1;
  while (m < 4 * c.lambda() + 1) m <<= 1;
  const double v1 = lp_norm(sample(c, m), 4.0).value;
  const double v2 = lp_norm(sample(c, 2 * m), 4.0).value;
  ctx.check(std::abs(v1 - v2) <= 1e-12 * v1, "certified p=4 grid stable under doubling");

  const int j = ctx.uniform_int(0, static_cast<int>(2 * c.lambda()));
  const SampleGrid g = sample(c, 2 * c.lambda() + 1 + j % 7);
  const std::size_t idx = static_cast<std::size_t>(j) % g.values.size();
  const cplx direct = direct_eval(c, static_cast<double>(idx) / static_cast<double>(g.m));
  ctx.check(std::abs(g.values[idx] - direct) <= 1e-9 * std::max(1.0, std::abs(direct)),
            "sample matches direct_eval");
}

void filter_invariants(InvariantContext& ctx) {
  const SeriesSpec spec = ctx.random_spec();
  const CoefficientSet c = riemann_coefficients(spec);
  const freq_t cut = ctx.uniform_int(1, static_cast<int>(spec.lambda()));

  const FilterBand band{cut, band_unbounded};
  const CoefficientSet once = band_filter(c, band);
  const CoefficientSet twice = band_filter(once, band);
  ctx.check(once.size() == twice.size(), "band_filter idempotent");

  const double a = ctx.uniform(0.0, 1.0);
  const CoefficientSet left = band_filter(phase_shift(c, a), band);
  const CoefficientSet right = phase_shift(band_filter(c, band), a);
  bool commute = left.size() == right.size();
  for (std::size_t i = 0; i < left.size() && commute; ++i)
    commute = std::abs(left.entries()[i].second - right.entries()[i].second) < 1e-12;
  ctx.check(commute, "band_filter commutes with phase_shift");

  const CoefficientSet low = band_filter(c, FilterBand{0, cut});
  ctx.check(low.size() + once.size() == c.size(), "low + high reconstructs support");

  const int a_param = ctx.uniform_int(2, 3);
  int k = 0;
  while (std::pow(a_param, k + 2) - 1 <= spec.n_max) ++k;
  const CoefficientSet block = lp_block(spec, a_param, k);
  long double sum = 0.0L;
  for (std::int64_t n = static_cast<std::int64_t>(std::pow(a_param, k));
       n < static_cast<std::int64_t>(std::pow(a_param, k + 1)); ++n)
    if (n <= spec.n_max) sum += std::pow(static_cast<long double>(n), -4.0L * spec.s);
  ctx.check(std::abs(l2_exact(block) - std::sqrt(static_cast<double>(sum))) < 1e-12,
            "block l2 equals sqrt(sum n^{-4s})");
}

void structure_invariants(InvariantContext& ctx) {
  const double s = ctx.uniform(0.6, 2.0);
  const double ell = std::ldexp(1.0, -ctx.uniform_int(4, 8)) * ctx.uniform(0.75, 1.25);
  const SeriesSpec spec{s, sf_required_n_max(ell) + ctx.uniform_int(0, 8)};
  const double p = std::vector<double>{2.0, 4.0, 6.0}[ctx.uniform_int(0, 2)];

  // Two-route equivalence: coefficient-level increments vs two phase-shifted
  // samplings subtracted on a shared grid.
  const StructureFunctionPoint pt = structure_function(spec, p, ell);
  const CoefficientSet base = riemann_coefficients(spec);
  const CoefficientSet fwd = phase_shift(base, ell / 2.0);
  const CoefficientSet bwd = phase_shift(base, -ell / 2.0);
  std::int64_t m = 1;
  while (m < static_cast<std::int64_t>(p) * spec.lambda() + 1) m <<= 1;
  const SampleGrid gf = sample(fwd, m), gb = sample(bwd, m);
  SampleGrid diff;
  diff.m = m;
  diff.lambda = spec.lambda();
  diff.values.resize(gf.values.size());
  for (std::size_t i = 0; i < diff.values.size(); ++i)
    diff.values[i] = gf.values[i] - gb.values[i];
  const double direct_root = lp_norm(diff, p).value;
  ctx.check(std::abs(direct_root - pt.value_root) <=
                1e-9 * std::max(pt.value_root, 1e-30),
            "two-route equivalence of S_p");

  if (p > 2.0) {
    const double g = flatness_sf(spec, p, ell);
    ctx.check(g >= 1.0 - 1e-9, "G >= 1 (Jensen)");
    // Scale invariance comes from the ratio structure; exercised through a
    // scaled spec by hand.
    const CoefficientSet inc = increment_coefficients(spec, ell);
    const double t = ctx.uniform(0.5, 2.0);
    const double num = std::pow(lp_norm(inc.scaled(t), p).value, p);
    const double den = std::pow(l2_exact(inc.scaled(t)), p);
    ctx.check(std::abs(num / den - g) <= 1e-9 * g, "G scale invariance");
  }

  const double s2a = s2_plancherel(s, ell, spec.n_max);
  const double s2b = s2_plancherel(s, 1.0 - ell, spec.n_max);
  ctx.check(std::abs(s2a - s2b) <= 1e-10 * std::max(s2a, 1e-30),
            "S_2 symmetric under ell <-> 1-ell");
}

void flatness_invariants(InvariantContext& ctx) {
  const SeriesSpec spec{ctx.uniform(0.8, 1.6), ctx.uniform_int(8, 24)};
  const freq_t cut = ctx.uniform_int(1, spec.n_max);  // keep several modes
  const double p = std::vector<double>{3.0, 4.0, 6.0}[ctx.uniform_int(0, 2)];

  const double f = flatness_hp(spec, p, cut);
  ctx.check(f >= 1.0 - 1e-9, "F >= 1 (Hoelder)");

  auto [hp, tail] = high_pass_riemann(spec, cut);
  const double assembled =
      std::pow(lp_norm(hp, p).value, p) / std::pow(l2_exact(hp), p);
  ctx.check(std::abs(assembled - f) <= 1e-10 * f, "flatness_hp consistency");

  const double t = ctx.uniform(0.5, 2.0);
  const double scaled =
      std::pow(lp_norm(hp.scaled(t), p).value, p) / std::pow(l2_exact(hp.scaled(t)), p);
  ctx.check(std::abs(scaled - f) <= 1e-9 * f, "F scale invariance");
}

void multifractal_invariants(InvariantContext& ctx) {
  const double s = ctx.uniform(0.55, 2.2);
  const EtaCurve eta = eta_curve_closed_form(s);
  std::vector<double> alphas;
  for (int i = 0; i < 12; ++i) alphas.push_back(ctx.uniform(s - 0.5, s - 0.25));
  const MultifractalSpectrum spec = legendre_transform(eta, alphas);

  bool inf_property = true;
  for (std::size_t i = 0; i < spec.alphas.size(); ++i)
    for (std::size_t j = 0; j < eta.p_grid.size(); j += 37)
      inf_property = inf_property &&
                     spec.d_values[i] <=
                         spec.alphas[i] * eta.p_grid[j] - eta.eta[j] + 1.0 + 1e-12;
  ctx.check(inf_property, "legendre infimum property");

  bool concave = true;
  for (std::size_t i = 2; i < spec.alphas.size(); ++i) {
    const double a0 = spec.alphas[i - 2], a1 = spec.alphas[i - 1], a2 = spec.alphas[i];
    if (a2 - a0 < 1e-9) continue;
    const double interp = spec.d_values[i - 2] +
                          (spec.d_values[i] - spec.d_values[i - 2]) * (a1 - a0) / (a2 - a0);
    concave = concave && spec.d_values[i - 1] >= interp - 1e-9;
  }
  ctx.check(concave, "legendre output concave");

  const double eps = ctx.uniform(1e-6, 1e-3);
  ctx.check(std::abs(eta_closed_form(s, 4.0 - eps) - eta_closed_form(s, 4.0 + eps)) <
                10.0 * eps,
            "eta continuous at p=4");
}

void fitting_invariants(InvariantContext& ctx) {
  ScalingCurve curve;
  curve.meta = {0, 0, "synthetic"};
  const double expo = ctx.uniform(-2.0, 2.0);
  const double amp = ctx.uniform(0.1, 10.0);
  for (int i = 0; i < 8; ++i) {
    const double t = std::pow(2.0, i);
    curve.push(t, amp * std::pow(t, expo));
  }
  const ExponentFit fit = fit_power_law(curve);
  ctx.check(std::abs(fit.slope - expo) < 1e-12 && fit.r_squared > 1.0 - 1e-12,
            "exact power data recovered");

  const double c = ctx.uniform(0.5, 20.0);
  ScalingCurve scaled = curve;
  for (double& v : scaled.values) v *= c;
  const ExponentFit fit2 = fit_power_law(scaled);
  ctx.check(std::abs(fit2.slope - fit.slope) < 1e-12 &&
                std::abs(fit2.intercept - fit.intercept - std::log(c)) < 1e-9,
            "affine equivariance");

  ScalingCurve reversed;
  reversed.meta = curve.meta;
  for (std::size_t i = curve.size(); i-- > 0;)
    reversed.push(curve.scales[i], curve.values[i]);
  const ExponentFit fit3 = fit_power_law(reversed);
  ctx.check(std::abs(fit3.slope - fit.slope) < 1e-12, "order independence");

  // Corollary C tabulation away from critical lines.
  const double s = ctx.uniform(0.6, 2.0);
  const double p = ctx.uniform(2.0, 14.0);
  const bool near_line = std::abs(p - 4.0) < 0.05 || std::abs(s - 1.25) < 0.02 ||
                         std::abs(s - 1.5) < 0.02 ||
                         (s > 1.25 && s < 1.5 && std::abs(p - 2.0 / (3.0 - 2.0 * s)) < 0.05);
  if (!near_line) {
    const RegimeDescriptor reg = classify_regime(s, p);
    const bool expect = p <= 4.0 || s < 1.25;
    ctx.check(reg.flatnesses_equivalent == expect,
              "F/G exponent coincidence iff p<=4 or s<5/4");
  }
}

}  // namespace

InvariantStats run_invariant_suite(std::uint64_t seed, int target_cases) {
  InvariantStats stats;
  InvariantContext ctx;
  ctx.rng.seed(seed);
  ctx.stats = &stats;
  // Round-robin over the families until the case target is reached.
  const std::vector<std::function<void(InvariantContext&)>> families = {
      series_invariants,   sampling_invariants,  filter_invariants,
      structure_invariants, flatness_invariants, multifractal_invariants,
      fitting_invariants};
  std::size_t f = 0;
  while (stats.cases < target_cases) {
    families[f % families.size()](ctx);
    ++f;
  }
  return stats;
}

std::string format_report(const std::vector<CriterionResult>& results) {
  std::ostringstream out;
  int passed = 0;
  for (const auto& r : results) {
    out << fmt("[%2d] %-4s %-28s (%6.2f s)  %s\n", r.id, r.pass ? "PASS" : "FAIL",
               r.name.c_str(), r.seconds, r.detail.c_str());
    if (r.pass) ++passed;
  }
  out << fmt("RESULT: %d/%zu criteria passed\n", passed, results.size());
  return out.str();
}

}  // namespace rsflat
