// rsflat: L^p norms, filters, structure functions, flatnesses and scaling
// exponents of the generalized Riemann series R_s(x) = sum n^{-2s} e^{2pi i n^2 x}.
//
// Subcommands: sample, norm, filter, structure, flatness, fit, multifractal,
// figures, verify.  Curves go to CSV, fits and reports to JSON.
// Exit codes: 0 success, 1 criterion/computation failure, 2 usage error.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "rsflat/acceptance.hpp"
#include "rsflat/filters.hpp"
#include "rsflat/fitting.hpp"
#include "rsflat/flatness.hpp"
#include "rsflat/io.hpp"
#include "rsflat/multifractal.hpp"
#include "rsflat/sampling.hpp"
#include "rsflat/series.hpp"
#include "rsflat/structure.hpp"
#include "rsflat/sweeps.hpp"

namespace fs = std::filesystem;
using namespace rsflat;

namespace {

// Parameter bundle shared by the sweep-style commands.  Everything numeric is
// validated against the owning module's preconditions before any computation.
struct RunConfig {
  std::vector<double> s_list{1.0};
  std::vector<double> p_list;
  std::string n_range = "64:262144:4";      // lo:hi:ratio, frequency or n-index
  std::string ell_range = "2^-6:2^-16:2";   // hi:lo:ratio
  int lp_a = 2;
  double truncation_ratio = 4.0;
  double margin = sf_resolution_margin;
  std::string grid_policy = "exact";
  std::string fit_window = "2:2";
  std::string out_dir = "out";
  std::string cache_dir;
  std::uint64_t seed = 0;
  int jobs = 2;

  GridPolicy grid() const {
    GridPolicy g;
    g.mode = grid_policy == "adaptive" ? GridPolicy::Mode::adaptive
                                       : GridPolicy::Mode::exact;
    return g;
  }

  FitWindow window() const {
    FitWindow w;
    if (std::sscanf(fit_window.c_str(), "%d:%d", &w.drop_small, &w.drop_large) != 2 ||
        w.drop_small < 0 || w.drop_large < 0)
      throw CLI::ValidationError("--fit-window", "expected DROP_SMALL:DROP_LARGE");
    return w;
  }

  void validate() const {
    for (double s : s_list)
      if (!std::isfinite(s)) throw CLI::ValidationError("--s", "s must be finite");
    for (double p : p_list)
      if (!(p > 0.0)) throw CLI::ValidationError("--p", "p must be > 0");
    if (!(truncation_ratio >= 1.0))
      throw CLI::ValidationError("--truncation-ratio", "must be >= 1");
    if (!(margin >= sf_resolution_margin))
      throw CLI::ValidationError("--margin", "below the resolution rule margin 4");
    if (grid_policy != "exact" && grid_policy != "adaptive")
      throw CLI::ValidationError("--grid-policy", "exact or adaptive");
    if (lp_a < 2) throw CLI::ValidationError("--lp-A", "must be >= 2");
    if (jobs < 1) throw CLI::ValidationError("--jobs", "must be >= 1");
    window();  // parse check
  }

  std::optional<ResultCache> cache() const { return ResultCache::configure(cache_dir); }
};

// Accepts "4096", "2^-6", "4^9", "0.015625".
double parse_scale(const std::string& tok) {
  const auto caret = tok.find('^');
  if (caret != std::string::npos) {
    const double base = std::stod(tok.substr(0, caret));
    const double expo = std::stod(tok.substr(caret + 1));
    return std::pow(base, expo);
  }
  return std::stod(tok);
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

struct Range {
  double lo = 0, hi = 0, ratio = 2;
};

Range parse_range(const std::string& text, double default_ratio) {
  const auto parts = split(text, ':');
  if (parts.size() < 2 || parts.size() > 3)
    throw CLI::ValidationError("--range", "expected LO:HI[:RATIO], got '" + text + "'");
  Range r;
  r.lo = parse_scale(parts[0]);
  r.hi = parse_scale(parts[1]);
  r.ratio = parts.size() == 3 ? parse_scale(parts[2]) : default_ratio;
  if (!(r.ratio > 1.0))
    throw CLI::ValidationError("--range", "ratio must exceed 1");
  return r;
}

std::vector<freq_t> cutoffs_from(const std::string& text, double default_ratio) {
  const Range r = parse_range(text, default_ratio);
  return geometric_cutoffs(static_cast<freq_t>(std::llround(std::min(r.lo, r.hi))),
                           static_cast<freq_t>(std::llround(std::max(r.lo, r.hi))),
                           r.ratio);
}

std::vector<double> ells_from(const std::string& text) {
  const Range r = parse_range(text, 2.0);
  return geometric_ells(r.lo, r.hi, r.ratio);
}

std::string tagged(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  std::string s = buf;
  for (char& c : s)
    if (c == '.') c = 'p';
  return s;
}

ordered_json fit_to_json(const ExponentFit& fit) {
  ordered_json j;
  j["slope"] = fit.slope;
  j["intercept"] = fit.intercept;
  j["r_squared"] = fit.r_squared;
  j["residual_max"] = fit.residual_max;
  if (fit.log_correction_power) j["log_correction_power"] = *fit.log_correction_power;
  return j;
}

// Power-law fit with the configured window; a weak R^2 on a pure-power claim
// triggers an automatic log-correction refit and a warning flag.
ordered_json fit_curve_record(const ScalingCurve& curve, const RunConfig& cfg,
                              const std::string& quantity) {
  const ScalingCurve windowed =
      curve.size() > static_cast<std::size_t>(cfg.window().drop_small +
                                              cfg.window().drop_large + 3)
          ? apply_window(curve, cfg.window())
          : curve;
  ordered_json j;
  j["schema_version"] = 1;
  j["quantity"] = quantity;
  j["s"] = curve.meta.s;
  j["p"] = curve.meta.p;
  j["points_used"] = windowed.size();
  if (windowed.size() < 4) {
    j["fit"] = nullptr;
    j["warning"] = "fewer than 4 points; no exponent fit";
    return j;
  }
  const ExponentFit fit = fit_power_law(windowed);
  j["fit"] = fit_to_json(fit);
  if (fit.r_squared < 0.95) {
    try {
      const ExponentFit logfit = fit_with_log_correction(windowed, fit.slope);
      j["warning"] = "low R^2 for a pure power law; possible logarithmic correction";
      j["log_refit"] = fit_to_json(logfit);
    } catch (const insufficient_range_error&) {
      j["warning"] = "low R^2 for a pure power law; range too narrow for a log refit";
    }
  }
  return j;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw io_error("cannot create " + dir.string() + ": " + ec.message());
}

void write_json_file(const fs::path& path, const ordered_json& j) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot open for writing: " + path.string());
  out << j.dump(2) << "\n";
}

// ---- sample ----

int cmd_sample(const RunConfig& cfg, std::int64_t m, int n_max_flag) {
  ensure_dir(cfg.out_dir);
  for (double s : cfg.s_list) {
    int n_max = n_max_flag;
    std::int64_t grid_m = m;
    if (n_max <= 0) {
      // Largest truncation the requested grid resolves alias-free.
      n_max = static_cast<int>(std::floor(std::sqrt((static_cast<double>(m) - 1) / 2.0)));
    } else {
      while (grid_m <= 2 * static_cast<std::int64_t>(n_max) * n_max) grid_m <<= 1;
    }
    const SeriesSpec spec{s, n_max};
    const SampleGrid grid = sample(riemann_coefficients(spec), grid_m);

    std::vector<std::vector<double>> rows;
    rows.reserve(grid.values.size());
    for (std::int64_t j = 0; j < grid.m; ++j)
      rows.push_back({static_cast<double>(j) / static_cast<double>(grid.m),
                      grid.values[static_cast<std::size_t>(j)].real(),
                      grid.values[static_cast<std::size_t>(j)].imag()});
    const fs::path curve_path = fs::path(cfg.out_dir) / ("sample_s" + tagged(s) + ".csv");
    write_csv(curve_path, {"x", "re", "im"}, rows);

    // Rescaled imaginary part Im R_s(x/2)/pi on x in [0, 2] (the classical
    // real-valued graph convention).
    std::vector<std::vector<double>> graph;
    graph.reserve(grid.values.size());
    double max_im = 0.0, max_second_diff = 0.0;
    for (std::int64_t j = 0; j < grid.m; ++j) {
      const double val = grid.values[static_cast<std::size_t>(j)].imag() / M_PI;
      graph.push_back({2.0 * static_cast<double>(j) / static_cast<double>(grid.m), val});
      max_im = std::max(max_im, std::abs(val));
      if (j >= 2) {
        const double d2 = graph[j][1] - 2.0 * graph[j - 1][1] + graph[j - 2][1];
        max_second_diff = std::max(max_second_diff, std::abs(d2));
      }
    }
    const fs::path graph_path = fs::path(cfg.out_dir) / ("imgraph_s" + tagged(s) + ".csv");
    write_csv(graph_path, {"x", "im_scaled"}, graph);

    ordered_json meta;
    meta["schema_version"] = 1;
    meta["quantity"] = "sample";
    meta["s"] = s;
    meta["n_max"] = spec.n_max;
    meta["lambda"] = spec.lambda();
    meta["m"] = grid.m;
    meta["max_abs_im_scaled"] = max_im;
    meta["max_second_difference"] = max_second_diff;
    meta["timestamp"] = iso8601_utc_now();
    write_json_file(fs::path(cfg.out_dir) / ("sample_s" + tagged(s) + ".json"), meta);
    std::cout << "wrote " << curve_path.string() << " (" << grid.m << " rows), "
              << graph_path.string() << "\n";
  }
  return 0;
}

// ---- norm (partial sums / generalized Zalcwasser) ----

int cmd_norm(const RunConfig& cfg, const std::string& n_range) {
  ensure_dir(cfg.out_dir);
  if (cfg.p_list.empty()) {
    std::cerr << "rsflat norm: empty p list, nothing to do\n";
    return 0;
  }
  const Range r = parse_range(n_range, 2.0);
  std::vector<int> n_values;
  for (double v = std::min(r.lo, r.hi); v <= std::max(r.lo, r.hi) * (1 + 1e-12);
       v *= r.ratio)
    n_values.push_back(static_cast<int>(std::llround(v)));

  PartialSumOptions opt;
  opt.grid = cfg.grid();
  opt.jobs = cfg.jobs;
  for (double s : cfg.s_list) {
    for (double p : cfg.p_list) {
      const ScalingCurve curve = partial_sum_sweep(s, p, n_values, opt);
      std::vector<std::vector<double>> rows;
      for (std::size_t i = 0; i < curve.size(); ++i) {
        const Prediction pred = predicted_partial_sum_norm(s, p, curve.scales[i]);
        rows.push_back({curve.scales[i], curve.values[i], pred.lo, pred.hi,
                        curve.values[i] / pred.value()});
      }
      const std::string stem = "norm_s" + tagged(s) + "_p" + tagged(p);
      write_csv(fs::path(cfg.out_dir) / (stem + ".csv"),
                {"n", "norm", "predicted_lo", "predicted_hi", "ratio_to_model"}, rows);
      write_json_file(fs::path(cfg.out_dir) / (stem + "_fit.json"),
                      fit_curve_record(curve, cfg, "partial_sum_norm"));
    }
  }
  std::cout << "wrote partial-sum norm curves for " << cfg.s_list.size() << " s x "
            << cfg.p_list.size() << " p into " << cfg.out_dir << "\n";
  return 0;
}

// ---- filter (high-pass norms; optional single band) ----

int cmd_filter(const RunConfig& cfg, const std::string& band_text) {
  ensure_dir(cfg.out_dir);
  const auto cache = cfg.cache();

  if (!band_text.empty()) {
    // Single band norm of the truncated series at the sweep's top truncation.
    const auto parts = split(band_text, ':');
    if (parts.size() != 2) throw CLI::ValidationError("--band", "expected LO:HI");
    const freq_t lo = static_cast<freq_t>(parse_scale(parts[0]));
    const freq_t hi = parts[1] == "inf" ? band_unbounded
                                        : static_cast<freq_t>(parse_scale(parts[1]));
    for (double s : cfg.s_list) {
      const int n_max = static_cast<int>(
          std::ceil(cfg.truncation_ratio *
                    std::sqrt(static_cast<double>(hi == band_unbounded ? lo : hi))));
      const CoefficientSet c =
          band_filter(riemann_coefficients(SeriesSpec{s, n_max}), FilterBand{lo, hi});
      for (double p : cfg.p_list) {
        const QuadratureReport rep = lp_norm(c, p, cfg.grid());
        std::cout << "s=" << s << " p=" << p << " band [" << lo << ","
                  << (hi == band_unbounded ? std::string("inf") : std::to_string(hi))
                  << "): norm = " << format_double(rep.value)
                  << (rep.certified_exact ? " (certified)" : "") << "\n";
      }
    }
    return 0;
  }

  HpSweepOptions opt;
  opt.truncation_ratio = cfg.truncation_ratio;
  opt.grid = cfg.grid();
  opt.jobs = cfg.jobs;
  if (cache) opt.cache = &*cache;
  const std::vector<freq_t> cutoffs = cutoffs_from(cfg.n_range, 4.0);
  for (double s : cfg.s_list) {
    for (double p : cfg.p_list) {
      const HpCurve hc = hp_norm_sweep(s, p, cutoffs, opt);
      std::vector<std::vector<double>> rows;
      for (const HpPoint& pt : hc.points)
        rows.push_back({pt.n_freq, pt.value, static_cast<double>(pt.n_max),
                        pt.tail.convergent ? pt.tail.sup_tail : -1.0,  // -1: divergent
                        pt.tail.convergent ? 1.0 : 0.0,
                        pt.sup_rule_met ? 1.0 : 0.0, pt.certified ? 1.0 : 0.0});
      const std::string stem = "hpnorm_s" + tagged(s) + "_p" + tagged(p);
      write_csv(fs::path(cfg.out_dir) / (stem + ".csv"),
                {"n", "norm", "n_max", "sup_tail", "tail_convergent", "sup_rule_met",
                 "certified"},
                rows);
      ordered_json j;
      if (s <= 0.5) {
        // Non-convergent truncation tail: norms depend on n_max, so an
        // exponent fit would be meaningless.  Curve stays, fit is refused.
        j["schema_version"] = 1;
        j["quantity"] = "hp_norm";
        j["s"] = s;
        j["p"] = p;
        j["fit"] = nullptr;
        j["fit_refused"] = "non-convergent tail for s <= 1/2";
      } else {
        j = fit_curve_record(hc.curve, cfg, "hp_norm");
        if (s > s_star(std::isinf(p) ? 1e9 : p)) {
          // Slope target from the high-pass norm law.
          const double e = p < 4.0 ? 0.25 - s : (p == 4.0 ? 0.25 - s : 0.5 - 1.0 / p - s);
          j["model_exponent"] = e;
        }
      }
      write_json_file(fs::path(cfg.out_dir) / (stem + "_fit.json"), j);
    }
  }
  std::cout << "wrote high-pass norm curves into " << cfg.out_dir << "\n";
  return 0;
}

// ---- structure ----

int cmd_structure(const RunConfig& cfg) {
  ensure_dir(cfg.out_dir);
  const auto cache = cfg.cache();
  SfSweepOptions opt;
  opt.margin = cfg.margin;
  opt.grid = cfg.grid();
  opt.jobs = cfg.jobs;
  if (cache) opt.cache = &*cache;
  const std::vector<double> ells = ells_from(cfg.ell_range);
  for (double s : cfg.s_list) {
    for (double p : cfg.p_list) {
      const SfCurve sc = sf_sweep(s, p, ells, opt);
      std::vector<std::vector<double>> rows;
      for (const SfPoint& pt : sc.points) {
        double pred_lo = 0.0, pred_hi = 0.0;
        if (s > s_star(p)) {
          const Prediction pred = predicted_sf_root(s, p, pt.ell);
          pred_lo = pred.lo;
          pred_hi = pred.hi;
        }
        rows.push_back({pt.ell, pt.value_root, pt.value, static_cast<double>(pt.n_max),
                        pt.certified ? 1.0 : 0.0, pred_lo, pred_hi});
      }
      const std::string stem = "sf_s" + tagged(s) + "_p" + tagged(p);
      write_csv(fs::path(cfg.out_dir) / (stem + ".csv"),
                {"ell", "sf_root", "sf_value", "n_max", "certified", "predicted_lo",
                 "predicted_hi"},
                rows);
      write_json_file(fs::path(cfg.out_dir) / (stem + "_fit.json"),
                      fit_curve_record(sc.curve, cfg, "sf_root"));
    }
  }
  std::cout << "wrote structure-function curves into " << cfg.out_dir << "\n";
  return 0;
}

// ---- flatness ----

int cmd_flatness(const RunConfig& cfg) {
  ensure_dir(cfg.out_dir);
  if (cfg.p_list.empty()) {
    std::cerr << "rsflat flatness: empty p list, nothing to do\n";
    return 0;
  }
  const auto cache = cfg.cache();
  ordered_json summary = ordered_json::array();
  const std::vector<freq_t> cutoffs = cutoffs_from(cfg.n_range, 4.0);
  const std::vector<double> ells = ells_from(cfg.ell_range);

  for (double s : cfg.s_list) {
    for (double p : cfg.p_list) {
      if (!(p > 2.0) || s <= s_star(p)) {
        ordered_json skip;
        skip["s"] = s;
        skip["p"] = p;
        skip["skipped"] = true;
        skip["reason"] = !(p > 2.0) ? "flatness needs p > 2"
                                    : "out-of-validity: s <= s_star(p)";
        summary.push_back(skip);
        std::cerr << "skip (s=" << s << ", p=" << p << "): "
                  << skip["reason"].get<std::string>() << "\n";
        continue;
      }
      HpSweepOptions fo;
      fo.truncation_ratio = cfg.truncation_ratio;
      fo.grid = cfg.grid();
      fo.jobs = cfg.jobs;
      if (cache) fo.cache = &*cache;
      const HpCurve fc = hp_flatness_sweep(s, p, cutoffs, fo);

      SfSweepOptions go;
      go.margin = cfg.margin;
      go.grid = cfg.grid();
      go.jobs = cfg.jobs;
      if (cache) go.cache = &*cache;
      const SfCurve gc = sf_flatness_sweep(s, p, ells, go);

      const std::string stem = "flatness_s" + tagged(s) + "_p" + tagged(p);
      {
        std::vector<std::vector<double>> rows;
        for (const HpPoint& pt : fc.points)
          rows.push_back({pt.n_freq, pt.value, static_cast<double>(pt.n_max),
                          pt.tail.convergent ? pt.tail.sup_tail : -1.0});
        write_csv(fs::path(cfg.out_dir) / (stem + "_hp.csv"),
                  {"n", "flatness", "n_max", "sup_tail"}, rows);
      }
      {
        std::vector<std::vector<double>> rows;
        for (const SfPoint& pt : gc.points)
          rows.push_back({pt.ell, pt.value, static_cast<double>(pt.n_max)});
        write_csv(fs::path(cfg.out_dir) / (stem + "_sf.csv"),
                  {"ell", "flatness", "n_max"}, rows);
      }

      const RegimeDescriptor reg = classify_regime(s, p);
      ordered_json j;
      j["schema_version"] = 1;
      j["quantity"] = "flatness";
      j["s"] = s;
      j["p"] = p;
      j["verdict"] = reg.verdict;
      j["region"] = reg.region;
      j["flatnesses_equivalent"] = reg.flatnesses_equivalent;
      j["hp_model_exponent"] = reg.hp.exponent;
      j["sf_model_exponent"] = reg.sf.exponent;
      if (s <= 0.5) {
        j["hp_fit"] = nullptr;
        j["sf_fit"] = nullptr;
        j["fit_refused"] = "non-convergent tail for s <= 1/2";
      } else {
        j["hp_fit"] = fit_curve_record(fc.curve, cfg, "flatness_hp")["fit"];
        j["sf_fit"] = fit_curve_record(gc.curve, cfg, "flatness_sf")["fit"];
      }
      j["timestamp"] = iso8601_utc_now();
      write_json_file(fs::path(cfg.out_dir) / (stem + ".json"), j);
      summary.push_back({{"s", s}, {"p", p}, {"skipped", false},
                         {"verdict", reg.verdict}});
      std::cout << "(s=" << s << ", p=" << p << "): " << reg.verdict << "\n";
    }
  }
  write_json_file(fs::path(cfg.out_dir) / "flatness_summary.json", summary);
  return 0;
}

// ---- fit ----

int cmd_fit(const RunConfig& cfg, const std::string& input, double log_base,
            bool with_log) {
  std::ifstream in(input);
  if (!in) throw io_error("cannot open " + input);
  std::string line;
  if (!std::getline(in, line)) throw io_error("empty csv " + input);
  ScalingCurve curve;
  curve.meta.quantity = "cli_fit";
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cols = split(line, ',');
    if (cols.size() < 2) throw io_error("need at least two csv columns in " + input);
    curve.push(std::stod(cols[0]), std::stod(cols[1]));
  }
  const ScalingCurve windowed =
      curve.size() > static_cast<std::size_t>(cfg.window().drop_small +
                                              cfg.window().drop_large + 3)
          ? apply_window(curve, cfg.window())
          : curve;
  ordered_json j;
  j["schema_version"] = 1;
  j["quantity"] = "fit";
  j["input"] = input;
  j["points_used"] = windowed.size();
  j["fit"] = fit_to_json(fit_power_law(windowed));
  if (with_log)
    j["log_correction_fit"] = fit_to_json(fit_with_log_correction(windowed, log_base));
  std::cout << j.dump(2) << "\n";
  return 0;
}

// ---- multifractal ----

int cmd_multifractal(const RunConfig& cfg, const std::string& alpha_range, bool estimate,
                     const std::string& k_range) {
  ensure_dir(cfg.out_dir);
  for (double s : cfg.s_list) {
    if (!(s > 0.5)) {
      std::cerr << "skip s=" << s << ": multifractal formalism needs s > 1/2\n";
      continue;
    }
    const EtaCurve eta = eta_curve_closed_form(s);
    {
      std::vector<std::vector<double>> rows;
      for (std::size_t i = 0; i < eta.p_grid.size(); ++i)
        rows.push_back({eta.p_grid[i], eta.eta[i]});
      write_csv(fs::path(cfg.out_dir) / ("eta_s" + tagged(s) + ".csv"), {"p", "eta"},
                rows);
    }

    const auto ar = split(alpha_range, ':');
    if (ar.size() != 3)
      throw CLI::ValidationError("--alphas", "expected LO:HI:STEP");
    const double a_lo = parse_scale(ar[0]), a_hi = parse_scale(ar[1]),
                 a_step = parse_scale(ar[2]);
    if (!(a_step > 0.0) || a_hi < a_lo)
      throw CLI::ValidationError("--alphas", "need LO <= HI and STEP > 0");
    std::vector<double> alphas;
    for (double a = a_lo; a <= a_hi + 1e-12; a += a_step) alphas.push_back(a);

    const MultifractalSpectrum closed = spectrum_closed_form(s, alphas);
    const MultifractalSpectrum numeric = legendre_transform(eta, alphas);
    {
      // -inf stays out of CSV; emit a large negative sentinel flag column.
      std::vector<std::vector<double>> rows;
      for (std::size_t i = 0; i < alphas.size(); ++i) {
        const bool fin_c = std::isfinite(closed.d_values[i]);
        const bool fin_n = std::isfinite(numeric.d_values[i]);
        rows.push_back({closed.alphas[i], fin_c ? closed.d_values[i] : 0.0,
                        fin_c ? 1.0 : 0.0, fin_n ? numeric.d_values[i] : 0.0,
                        fin_n ? 1.0 : 0.0});
      }
      write_csv(fs::path(cfg.out_dir) / ("spectrum_s" + tagged(s) + ".csv"),
                {"alpha", "d_closed", "closed_finite", "d_legendre", "legendre_finite"},
                rows);
    }

    const FormalismReport rep = formalism_check(s);
    ordered_json j;
    j["schema_version"] = 1;
    j["quantity"] = "formalism_check";
    j["s"] = s;
    j["max_abs_deviation"] = rep.max_abs_deviation;
    j["tolerance"] = rep.tolerance;
    j["pass"] = rep.pass;
    j["timestamp"] = iso8601_utc_now();

    if (estimate) {
      int k_lo = 3, k_hi = 8;
      if (!k_range.empty() &&
          std::sscanf(k_range.c_str(), "%d:%d", &k_lo, &k_hi) != 2)
        throw CLI::ValidationError("--k-range", "expected LO:HI");
      const double top_freq = std::pow(static_cast<double>(cfg.lp_a), k_hi + 1);
      const SeriesSpec spec{s, static_cast<int>(std::ceil(std::sqrt(top_freq))) + 1};
      ordered_json est = ordered_json::array();
      for (double p : cfg.p_list.empty() ? std::vector<double>{2.0, 4.0, 8.0}
                                         : cfg.p_list) {
        ordered_json e;
        e["p"] = p;
        e["zeta_closed"] = eta_closed_form(s, p);
        e["zeta_estimate"] = eta_estimate(spec, p, cfg.lp_a, k_lo, k_hi, cfg.grid());
        // Structure-function exponent xi_p from a short dyadic sweep.
        SfSweepOptions so;
        so.margin = std::max(cfg.margin, p > 4 ? 8.0 : 4.0);
        so.jobs = cfg.jobs;
        so.grid = cfg.grid();
        const SfCurve sc = sf_sweep(s, p, geometric_ells(std::ldexp(1.0, -5),
                                                         std::ldexp(1.0, -13), 2.0),
                                    so);
        e["xi_estimate"] = p * fit_power_law(sc.curve).slope;
        est.push_back(e);
      }
      j["exponents"] = est;
    }
    write_json_file(fs::path(cfg.out_dir) / ("formalism_s" + tagged(s) + ".json"), j);
    std::cout << "s=" << s << ": formalism max dev = " << rep.max_abs_deviation
              << (rep.pass ? " (pass)" : " (FAIL)") << "\n";
  }
  return 0;
}

// ---- figures ----

int cmd_figures(RunConfig cfg, std::int64_t m) {
  cfg.s_list = {0.75, 1.0, 1.4, 2.0};
  cfg.out_dir = (fs::path(cfg.out_dir) / "figures").string();
  return cmd_sample(cfg, m, 0);
}

// ---- verify ----

int cmd_verify(const RunConfig& cfg, bool quick, const std::string& report_path) {
  AcceptanceOptions opt;
  opt.quick = quick;
  opt.jobs = cfg.jobs;
  opt.seed = cfg.seed;
  const std::vector<CriterionResult> results = run_acceptance(opt);
  std::cout << format_report(results);
  bool all = true;
  for (const auto& r : results) all = all && r.pass;
  if (!report_path.empty()) {
    ordered_json j;
    j["schema_version"] = 1;
    j["quantity"] = "acceptance_report";
    j["quick"] = quick;
    j["seed"] = cfg.seed;
    j["timestamp"] = iso8601_utc_now();
    ordered_json arr = ordered_json::array();
    for (const auto& r : results)
      arr.push_back({{"id", r.id}, {"name", r.name}, {"pass", r.pass},
                     {"seconds", r.seconds}, {"detail", r.detail}});
    j["criteria"] = arr;
    j["pass"] = all;
    write_json_file(report_path, j);
  }
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"L^p norms, filters, structure functions and flatness exponents of the "
               "generalized Riemann series R_s"};
  app.require_subcommand(1);

  RunConfig cfg;
  app.add_option("--out", cfg.out_dir, "output directory")->capture_default_str();
  app.add_option("--cache-dir", cfg.cache_dir,
                 "result cache directory (or env RSFLAT_CACHE_DIR)");
  app.add_option("--seed", cfg.seed, "seed for randomized checks")->capture_default_str();
  app.add_option("--jobs", cfg.jobs, "max concurrent sweep points")->capture_default_str();
  app.add_option("--grid-policy", cfg.grid_policy, "exact|adaptive")
      ->capture_default_str();
  app.add_option("--fit-window", cfg.fit_window,
                 "scales dropped at the small:large end before fitting")
      ->capture_default_str();
  app.add_option("--lp-A", cfg.lp_a, "Littlewood-Paley block parameter")
      ->capture_default_str();

  auto* c_sample = app.add_subcommand("sample", "sample R_s on [0,1] and emit figure data");
  std::int64_t sample_m = 4096;
  int sample_nmax = 0;
  c_sample->add_option("--s", cfg.s_list, "s values")->capture_default_str();
  c_sample->add_option("--m", sample_m, "grid size")->capture_default_str();
  c_sample->add_option("--n-max", sample_nmax, "truncation (0 = derive from m)");

  auto* c_norm = app.add_subcommand("norm", "partial-sum L^p norms vs the model");
  std::string norm_n_range = "16:512:2";  // n-index, not frequency
  c_norm->add_option("--s", cfg.s_list, "s values")->capture_default_str();
  c_norm->add_option("--p", cfg.p_list, "p values")->required(false);
  c_norm->add_option("--n-range", norm_n_range, "n-index range LO:HI[:RATIO]")
      ->capture_default_str();

  auto* c_filter = app.add_subcommand("filter", "high-pass norms with tail bounds");
  std::string band_text;
  c_filter->add_option("--s", cfg.s_list, "s values")->capture_default_str();
  c_filter->add_option("--p", cfg.p_list, "p values");
  c_filter->add_option("--n-range", cfg.n_range, "frequency cutoffs LO:HI[:RATIO]")
      ->capture_default_str();
  c_filter->add_option("--truncation-ratio", cfg.truncation_ratio,
                       "n_max = ratio * sqrt(N)")
      ->capture_default_str();
  c_filter->add_option("--band", band_text, "single band LO:HI (HI may be 'inf')");

  auto* c_structure = app.add_subcommand("structure", "structure functions S_p(ell)");
  c_structure->add_option("--s", cfg.s_list, "s values")->capture_default_str();
  c_structure->add_option("--p", cfg.p_list, "p values");
  c_structure->add_option("--ell-range", cfg.ell_range, "ell range HI:LO[:RATIO]")
      ->capture_default_str();
  c_structure->add_option("--margin", cfg.margin, "resolution margin (n_max = margin/sqrt(ell))")
      ->capture_default_str();

  auto* c_flatness = app.add_subcommand("flatness", "both flatnesses with regime verdicts");
  c_flatness->add_option("--s", cfg.s_list, "s values")->capture_default_str();
  c_flatness->add_option("--p", cfg.p_list, "p values");
  c_flatness->add_option("--n-range", cfg.n_range, "F sweep cutoffs")->capture_default_str();
  c_flatness->add_option("--ell-range", cfg.ell_range, "G sweep ells")->capture_default_str();
  c_flatness->add_option("--truncation-ratio", cfg.truncation_ratio, "F truncation ratio")
      ->capture_default_str();
  c_flatness->add_option("--margin", cfg.margin, "G resolution margin")
      ->capture_default_str();

  auto* c_fit = app.add_subcommand("fit", "fit a scale,value CSV");
  std::string fit_input;
  double fit_log_base = 0.0;
  bool fit_with_log = false;
  c_fit->add_option("--input", fit_input, "input CSV (scale,value)")->required();
  c_fit->add_option("--log-correction-base", fit_log_base,
                    "also fit a log correction above this base exponent")
      ->each([&](const std::string&) { fit_with_log = true; });

  auto* c_multi = app.add_subcommand("multifractal", "eta, spectrum, Legendre, formalism");
  std::string alpha_range = "auto";
  bool mf_estimate = false;
  std::string k_range;
  c_multi->add_option("--s", cfg.s_list, "s values")->capture_default_str();
  c_multi->add_option("--p", cfg.p_list, "p values for --estimate");
  c_multi->add_option("--alphas", alpha_range, "alpha grid LO:HI:STEP (default spans the spectrum)");
  c_multi->add_flag("--estimate", mf_estimate, "estimate eta from block norms");
  c_multi->add_option("--k-range", k_range, "block range LO:HI for --estimate");

  auto* c_figures = app.add_subcommand("figures", "emit the four-row figure data set");
  std::int64_t fig_m = 8192;
  c_figures->add_option("--m", fig_m, "grid size")->capture_default_str();

  auto* c_verify = app.add_subcommand("verify", "run the acceptance suite");
  bool quick = false;
  std::string report_path;
  c_verify->add_flag("--quick", quick, "oracle + invariant subset only");
  c_verify->add_option("--report", report_path, "write a JSON report here");

  // Global options remain usable after the subcommand name.
  for (CLI::App* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    cfg.validate();
    if (c_sample->parsed()) return cmd_sample(cfg, sample_m, sample_nmax);
    if (c_norm->parsed()) return cmd_norm(cfg, norm_n_range);
    if (c_filter->parsed()) return cmd_filter(cfg, band_text);
    if (c_structure->parsed()) return cmd_structure(cfg);
    if (c_flatness->parsed()) return cmd_flatness(cfg);
    if (c_fit->parsed()) return cmd_fit(cfg, fit_input, fit_log_base, fit_with_log);
    if (c_multi->parsed()) {
      std::string ar = alpha_range;
      if (ar == "auto") {
        // Span the finite spectrum of the first s.
        const double s0 = cfg.s_list.front();
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.6f:%.6f:0.005", s0 - 0.6, 2 * s0 - 0.45);
        ar = buf;
      }
      return cmd_multifractal(cfg, ar, mf_estimate, k_range);
    }
    if (c_figures->parsed()) return cmd_figures(cfg, fig_m);
    if (c_verify->parsed()) return cmd_verify(cfg, quick, report_path);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "rsflat: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "rsflat: invalid argument: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "rsflat: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
