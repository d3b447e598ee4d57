#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "hfgate/csv.hpp"
#include "hfgate/dephasing.hpp"
#include "hfgate/dot_model.hpp"
#include "hfgate/errors.hpp"
#include "hfgate/gate_dynamics.hpp"
#include "hfgate/relativistic.hpp"
#include "hfgate/zz_budget.hpp"

namespace hfgate::cli {

namespace {

std::ofstream open_output(const RunContext& ctx, const std::string& name) {
  std::ofstream out(ctx.out_dir / name, std::ios::binary);
  if (!out) throw InputError("cannot write " + (ctx.out_dir / name).string());
  return out;
}

std::vector<DotShape> to_shapes(const std::vector<ShapeParam>& params) {
  std::vector<DotShape> shapes;
  for (const auto& p : params) {
    DotShape s;
    s.r0 = p.r0_nm / 1e9;
    s.z0 = p.z0_nm / 1e9;
    s.validate();
    shapes.push_back(s);
  }
  return shapes;
}

std::string shape_id(const DotShape& s) {
  return "r0=" + format_double(s.r0 * 1e9) + "nm_z0=" + format_double(s.z0 * 1e9) + "nm";
}

std::vector<double> scaled(std::vector<double> values, double factor) {
  for (auto& v : values) v *= factor;
  return values;
}

// Division keeps decimal inputs such as 10 us exact after rounding.
std::vector<double> from_micro(std::vector<double> values) {
  for (auto& v : values) v /= 1e6;
  return values;
}

std::string sig(double v, int digits) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

}  // namespace

CommandResult run_table1(const RunContext& ctx, const IsotopeRegistry& registry) {
  auto out = open_output(ctx, "table1.csv");
  CsvWriter csv(out, {"isotope", "spin", "abundance_pct", "gyro_ratio_rel_si",
                      "atomic_radius_rel_si", "solubility_k", "eta", "nuclear_gyro_hz_per_t"});
  for (const auto& symbol : registry.symbols()) {
    const auto& iso = registry.lookup(symbol);
    csv.cell(iso.symbol)
        .cell(iso.nuclear_spin.str())
        .cell(iso.abundance_pct)
        .cell(iso.gyro_ratio_rel_si)
        .cell(iso.atomic_radius_rel_si);
    if (iso.solubility_k) {
      csv.cell(*iso.solubility_k);
    } else {
      csv.cell("none");
    }
    if (iso.eta) {
      csv.cell(*iso.eta);
    } else {
      csv.cell("none");
    }
    csv.cell(iso.nuclear_gyro());
    csv.end_row();
  }
  return {{"table1.csv"}, Json::object()};
}

CommandResult run_fig3(const RunContext& ctx, const IsotopeRegistry& registry) {
  const Json& p = ctx.params;
  const auto& iso = registry.lookup(get_string(p, "isotope"));
  const auto shapes = to_shapes(get_shapes(p, "shapes"));
  const auto thetas = get_numbers(p, "theta_v");
  const auto thresholds = log_grid(get_number(p, "threshold_min_hz"),
                                   get_number(p, "threshold_max_hz"),
                                   get_count(p, "threshold_points"));
  const double cutoff = get_number(p, "cutoff_factor");

  auto out = open_output(ctx, "fig3.csv");
  CsvWriter csv(out, {"r0_nm", "z0_nm", "theta_v", "threshold_hz", "count", "min_gate_time_s"});
  Json peaks = Json::array();
  for (const auto& base : shapes) {
    for (const double theta : thetas) {
      const DotShape shape = base.with_theta(theta);
      const auto curve = hf_survey(shape, iso, thresholds, cutoff, ctx.workers);
      for (std::size_t t = 0; t < thresholds.size(); ++t) {
        csv.cell(shape.r0 * 1e9)
            .cell(shape.z0 * 1e9)
            .cell(shape.theta_v)
            .cell(thresholds[t])
            .cell(static_cast<unsigned long long>(curve.counts[t]))
            .cell(min_gate_time(thresholds[t]));
        csv.end_row();
      }
      peaks.push_back({{"shape", shape_id(shape)}, {"theta_v", shape.theta_v},
                       {"peak_hz", curve.peak_freq_hz}});
    }
  }
  Json notes;
  notes["isotope"] = iso.symbol;
  notes["peak_site_hyperfine"] = peaks;
  return {{"fig3.csv"}, notes};
}

CommandResult run_fig4(const RunContext& ctx, const IsotopeRegistry& registry) {
  const Json& p = ctx.params;
  const std::string mode = get_string(p, "mode");
  if (mode != "instantaneous" && mode != "ramp" && mode != "both") {
    throw InputError("fig4 mode must be instantaneous, ramp, or both");
  }
  const auto& iso = registry.lookup(get_string(p, "isotope"));
  FlipFlopConfig cfg;
  cfg.a_freqs_hz = scaled(get_numbers(p, "a_khz"), 1e3);
  if (cfg.a_freqs_hz.empty()) throw InputError("fig4 needs at least one hyperfine strength");
  cfg.nuclear_gyro = iso.nuclear_gyro();
  cfg.b0_t = get_number(p, "b0_t");
  cfg.steps_per_cycle = get_number(p, "steps_per_cycle");
  cfg.workers = ctx.workers;

  CommandResult result;
  result.notes["probability"] = "worst case over the hold duration at peak coupling";
  result.notes["isotope"] = iso.symbol;
  result.notes["hyperfine_strengths"] =
      "default strengths are the 100/200/400 kHz gate-time pairings; not stated for the plot";
  if (mode != "ramp") {
    cfg.b_grid_t = log_grid(get_number(p, "b_min_t"), get_number(p, "b_max_t"),
                            get_count(p, "b_points"));
    for (const double mark : get_numbers(p, "b_marks_t")) cfg.b_grid_t.push_back(mark);
    std::sort(cfg.b_grid_t.begin(), cfg.b_grid_t.end());
    cfg.b_grid_t.erase(std::unique(cfg.b_grid_t.begin(), cfg.b_grid_t.end()), cfg.b_grid_t.end());
    const auto points = flipflop_field_sweep(cfg);
    auto out = open_output(ctx, "fig4_field.csv");
    CsvWriter csv(out, {"a_hz", "b_t", "probability"});
    for (const auto& pt : points) {
      csv.cell(pt.a_hz).cell(pt.b_t).cell(pt.probability);
      csv.end_row();
    }
    result.files.push_back("fig4_field.csv");
  }
  if (mode != "instantaneous") {
    cfg.ramp_grid_s = log_grid(get_number(p, "ramp_min_s"), get_number(p, "ramp_max_s"),
                               get_count(p, "ramp_points"));
    const auto points = flipflop_ramp_sweep(cfg);
    auto out = open_output(ctx, "fig4_ramp.csv");
    CsvWriter csv(out, {"a_hz", "b_t", "ramp_s", "net_switch_s", "probability"});
    for (const auto& pt : points) {
      csv.cell(pt.a_hz).cell(cfg.b0_t).cell(pt.ramp_s).cell(2.0 * pt.ramp_s).cell(pt.probability);
      csv.end_row();
    }
    result.files.push_back("fig4_ramp.csv");
    result.notes["ramp_shape"] = "half-cosine on and off, hold 1/(2A) at peak";
  }
  return result;
}

CommandResult run_fig5(const RunContext& ctx, const IsotopeRegistry&) {
  const Json& p = ctx.params;
  Fig5Config cfg;
  cfg.s_grid = log_grid(get_number(p, "s_min"), get_number(p, "s_max"), get_count(p, "s_points"));
  cfg.a = get_number(p, "a");
  cfg.m = get_int(p, "m");
  cfg.kappa = get_number(p, "kappa");
  cfg.first_order_c_r0 = get_numbers(p, "c_r0");
  const auto points = fig5_curves(cfg);
  {
    auto out = open_output(ctx, "fig5.csv");
    CsvWriter csv(out, {"curve", "ratio_bound", "zz_bound"});
    for (const auto& pt : points) {
      csv.cell(pt.curve).cell(pt.x).cell(pt.y);
      csv.end_row();
    }
  }
  const double ratio = get_number(p, "headline_ratio_bound");
  {
    auto out = open_output(ctx, "fig5_headline.csv");
    CsvWriter csv(out, {"a", "m", "ratio_bound", "s_total", "zz_bound_single_axis",
                        "zz_bound_split_axes"});
    for (const double a : {cfg.a, 1.0}) {
      const auto h = headline_zz_bound(ratio, a, cfg.m);
      csv.cell(h.a).cell(h.m).cell(h.ratio_bound).cell(h.s_total).cell(h.single_axis).cell(
          h.split_axes);
      csv.end_row();
    }
  }
  Json notes;
  notes["split_convention"] =
      "zz_bound_single_axis attributes all of S to one lateral axis; zz_bound_split_axes shares "
      "it equally between both";
  notes["optimistic_axis"] =
      "the optimistic curve keeps valley terms in the ratio bound and drops them from the ZZ "
      "bound, with kappa = <dtheta_v^2> r0^2";
  notes["a_conventions"] = "headline rows are emitted with the configured a and with a = 1";
  return {{"fig5.csv", "fig5_headline.csv"}, notes};
}

CommandResult run_fig6(const RunContext& ctx, const IsotopeRegistry& registry) {
  const Json& p = ctx.params;
  const auto& iso = registry.lookup(get_string(p, "isotope"));
  const auto shapes = to_shapes(get_shapes(p, "shapes"));
  const auto ppms = get_numbers(p, "ppm");
  const std::uint64_t samples = get_count(p, "samples");
  const bool random_valley = get_bool(p, "random_valley_phase");
  const double theta = get_number(p, "theta_v");

  auto out = open_output(ctx, "fig6.csv");
  CsvWriter csv(out, {"shape_id", "ppm", "sample", "t2_star_s"});
  auto summary_out = open_output(ctx, "fig6_summary.csv");
  CsvWriter summary(summary_out,
                    {"shape_id", "ppm", "samples", "infinite_count", "median_t2_star_s"});
  std::uint64_t case_index = 0;
  for (const auto& shape : shapes) {
    for (const double ppm : ppms) {
      T2StarSampling cfg;
      cfg.shape = shape.with_theta(theta);
      cfg.isotope = iso;
      cfg.ppm = ppm;
      cfg.samples = samples;
      cfg.seed = combine_keys(ctx.seed, case_index++);
      cfg.random_valley_phase = random_valley;
      cfg.cutoff_factor = get_number(p, "cutoff_factor");
      cfg.workers = ctx.workers;
      const auto dist = t2star_cdf(cfg);
      const std::string id = shape_id(shape);
      for (std::size_t s = 0; s < dist.per_sample.size(); ++s) {
        const auto& v = dist.per_sample[s];
        csv.cell(id).cell(ppm).cell(s).cell(v ? *v : std::numeric_limits<double>::infinity());
        csv.end_row();
      }
      const auto median = dist.median();
      summary.cell(id).cell(ppm).cell(dist.samples()).cell(dist.infinite_count).cell(
          median ? *median : std::numeric_limits<double>::infinity());
      summary.end_row();
    }
  }
  Json notes;
  notes["isotope"] = iso.symbol;
  notes["valley_phase"] = random_valley ? "uniform in [0, 2 pi) per realization"
                                        : "fixed at theta_v";
  notes["infinite"] = "realizations without bath spins are written as inf";
  return {{"fig6.csv", "fig6_summary.csv"}, notes};
}

std::string format_z_error_table(const std::vector<double>& t2_stars_s,
                                 const std::vector<double>& a_hz) {
  std::ostringstream s;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%-14s", "A/h");
  s << buf;
  for (const double a : a_hz) {
    std::snprintf(buf, sizeof buf, "%12s", (sig(a * 1e-3, 6) + " kHz").c_str());
    s << buf;
  }
  s << '\n';
  std::snprintf(buf, sizeof buf, "%-14s", "T");
  s << buf;
  for (const double a : a_hz) {
    std::snprintf(buf, sizeof buf, "%12s", (sig(min_gate_time(a) * 1e6, 6) + " us").c_str());
    s << buf;
  }
  s << '\n';
  for (const double t2 : t2_stars_s) {
    std::snprintf(buf, sizeof buf, "%-14s", ("T2*=" + sig(t2 * 1e6, 6) + " us").c_str());
    s << buf;
    for (const double a : a_hz) {
      std::snprintf(buf, sizeof buf, "%12s", sig(overhauser_z_error(min_gate_time(a), t2), 2).c_str());
      s << buf;
    }
    s << '\n';
  }
  return s.str();
}

CommandResult run_table2(const RunContext& ctx, const IsotopeRegistry&) {
  const Json& p = ctx.params;
  const auto t2_stars = from_micro(get_numbers(p, "t2_star_us"));
  const auto a_hz = scaled(get_numbers(p, "a_khz"), 1e3);
  {
    auto out = open_output(ctx, "table2.csv");
    CsvWriter csv(out, {"t2_star_s", "a_hz", "gate_time_s", "probability"});
    for (const double t2 : t2_stars) {
      for (const double a : a_hz) {
        const double t = min_gate_time(a);
        csv.cell(t2).cell(a).cell(t).cell(overhauser_z_error(t, t2));
        csv.end_row();
      }
    }
  }
  {
    auto out = open_output(ctx, "table2.txt");
    out << format_z_error_table(t2_stars, a_hz);
  }
  return {{"table2.csv", "table2.txt"}, Json::object()};
}

CommandResult run_appendix(const RunContext& ctx, const IsotopeRegistry&) {
  const Json& p = ctx.params;
  auto elements = default_group_iv();
  for (auto& e : elements) {
    const std::string key = e.symbol == "C" ? "eta_ratio_c" : e.symbol == "Pb" ? "eta_ratio_pb" : "";
    if (!key.empty() && !p.at(key).is_null()) {
      e.eta_ratio = get_number(p, key);
      e.extrapolated = false;
    }
  }
  const auto rows = ratio_table(elements);
  {
    auto out = open_output(ctx, "appendix.csv");
    CsvWriter csv(out, {"element", "Z", "valence_n", "iu_factor", "eta_dft_ratio", "eta_iu_ratio",
                        "otten_ratio", "extrapolated"});
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& r = rows[i];
      csv.cell(r.symbol)
          .cell(r.z)
          .cell(elements[i].valence_n)
          .cell(iu_correction(elements[i].valence_n, r.z))
          .cell(r.eta_dft)
          .cell(r.eta_iu)
          .cell(r.otten)
          .cell(r.extrapolated ? "yes" : "no");
      csv.end_row();
    }
  }
  {
    auto out = open_output(ctx, "appendix_fits.csv");
    CsvWriter csv(out, {"column", "c0", "c1", "c2", "r2"});
    const std::pair<const char*, RatioColumn> columns[] = {
        {"eta_dft_ratio", RatioColumn::dft},
        {"eta_iu_ratio", RatioColumn::iu},
        {"otten_ratio", RatioColumn::otten}};
    for (const auto& [name, column] : columns) {
      const auto fit = quad_fit(rows, column);
      csv.cell(name).cell(fit.c0).cell(fit.c1).cell(fit.c2);
      if (fit.r2) {
        csv.cell(*fit.r2);
      } else {
        csv.cell("undefined");
      }
      csv.end_row();
    }
  }
  Json notes;
  notes["extrapolated_rows"] =
      "C and Pb bunching ratios default to the quadratic through Si, Ge and Sn and are not "
      "computed values";
  notes["sn_quoted"] =
      "the quoted relativistic Sn figures (absolute 2400, enhancement 13.5) imply a larger "
      "correction than the leading-order factor; the table keeps leading-order values";
  return {{"appendix.csv", "appendix_fits.csv"}, notes};
}

CommandResult run_a_coeff(const RunContext& ctx, const IsotopeRegistry&) {
  const Json& p = ctx.params;
  ACoefficientConfig cfg;
  cfg.shapes = to_shapes(get_shapes(p, "shapes"));
  cfg.ppms = get_numbers(p, "ppm");
  cfg.samples = get_count(p, "samples");
  cfg.seed = ctx.seed;
  cfg.cutoff_factor = get_number(p, "cutoff_factor");
  cfg.workers = ctx.workers;
  const auto result = compute_a(cfg);
  auto out = open_output(ctx, "a_coeff.csv");
  CsvWriter csv(out, {"shape_id", "ppm", "a_mean", "a_std_error", "used", "empty"});
  for (const auto& c : result.cases) {
    csv.cell(shape_id(c.shape)).cell(c.ppm).cell(c.mean).cell(c.std_error).cell(c.used).cell(
        c.empty);
    csv.end_row();
  }
  csv.cell("all").cell("all").cell(result.center()).cell(result.half_width()).cell("").cell("");
  csv.end_row();
  Json notes;
  notes["summary_row"] =
      "a_mean is the midpoint and a_std_error the half width of the union of mean +- standard "
      "error over all cases";
  return {{"a_coeff.csv"}, notes};
}

CommandResult run_sweetspot_demo(const RunContext& ctx, const IsotopeRegistry&) {
  const Json& p = ctx.params;
  DotShape shape;
  shape.r0 = get_number(p, "r0_nm") / 1e9;
  shape.z0 = get_number(p, "z0_nm") / 1e9;
  shape.validate();
  const auto site_nm = get_numbers(p, "site_nm");
  if (site_nm.size() != 3) throw InputError("site_nm must hold x, y and z");
  const LatticeSite site =
      site_from_position({site_nm[0] / 1e9, site_nm[1] / 1e9, site_nm[2] / 1e9});
  const ValleyField valley =
      ValleyField::two_component(get_number(p, "valley_base"), get_number(p, "valley_amplitude"),
                                 get_number(p, "valley_wavelength_nm") / 1e9);
  const auto sigma = get_numbers(p, "noise_sigma_nm");
  if (sigma.size() != 2) throw InputError("noise_sigma_nm must hold two axes");
  const NoiseStats noise{sigma[0] * sigma[0] / 1e18, sigma[1] * sigma[1] / 1e18};
  const auto r = sweetspot_noise_check(shape, site, valley, noise, get_count(p, "samples"),
                                       ctx.seed);
  auto out = open_output(ctx, "sweetspot.csv");
  CsvWriter csv(out, {"x0_nm", "y0_nm", "iterations", "residual_per_m", "c00_per_m2",
                      "c11_per_m2", "tan_theta", "selected", "zz_exact", "zz_exact_std_error",
                      "zz_lowest_order", "zz_bound"});
  const auto& s = r.sweet_spot;
  csv.cell(s.x0 * 1e9)
      .cell(s.y0 * 1e9)
      .cell(s.iterations)
      .cell(s.residual)
      .cell(s.coeffs.c00)
      .cell(s.coeffs.c11)
      .cell(s.coeffs.tan_theta)
      .cell(s.selected ? "yes" : "no")
      .cell(r.error.exact)
      .cell(r.error.exact_stderr)
      .cell(r.error.lowest_order)
      .cell(r.bound);
  csv.end_row();
  return {{"sweetspot.csv"}, Json::object()};
}

}  // namespace hfgate::cli
