#include "commands.hpp"

#include <spdlog/spdlog.h>

#include <cmath>
#include <fstream>

#include "equilab/error.hpp"
#include "equilab/json_io.hpp"
#include "equilab/lifted_circle.hpp"
#include "equilab/measures.hpp"
#include "equilab/parallel.hpp"
#include "equilab/translates.hpp"

namespace equilab::cli {

namespace {

const json& need(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw ValidationError(where + ": missing field '" + key + "'");
  return j.at(key);
}

const json* maybe(const json& j, const char* key) { return j.contains(key) ? &j.at(key) : nullptr; }

json fit_json(const AsymptoticFit& f) {
  return {{"slope", f.slope},
          {"intercept", f.intercept},
          {"residual_rms", f.residual_rms},
          {"window",
           {{"mode", f.window.mode},
            {"axis", f.window.axis},
            {"size", f.window.window_size},
            {"points", f.window.n_points},
            {"t_min", f.window.t_min},
            {"t_max", f.window.t_max},
            {"oscillation_detected", f.window.oscillation_detected}}}};
}

measures::FourierMethod read_method(const json* j, std::uint64_t seed, const std::string& where) {
  if (!j) return measures::Quadrature{};
  const std::string kind = string_or(*j, "type", "quadrature", where);
  if (kind == "quadrature") {
    json_io::require_keys(*j, {"type", "order", "tolerance"}, where);
    measures::Quadrature q;
    q.order = static_cast<int>(count_or(*j, "order", static_cast<std::size_t>(q.order), where));
    q.tolerance = number_or(*j, "tolerance", q.tolerance, where);
    return q;
  }
  if (kind == "monte_carlo") {
    json_io::require_keys(*j, {"type", "samples"}, where);
    return measures::MonteCarlo{count_or(*j, "samples", 100000, where), seed};
  }
  if (kind == "ifs_product") {
    json_io::require_keys(*j, {"type", "depth"}, where);
    return measures::IfsProduct{static_cast<int>(count_or(*j, "depth", 12, where))};
  }
  throw ValidationError(where + ".type: expected quadrature, monte_carlo or ifs_product");
}

// Shared tail of torus-rate and lifted-circle.
Artifacts rate_artifacts(const torus::RateFit& r, const std::vector<double>& mc_stderr, const char* command) {
  Artifacts a;
  a.results = Table({"t", "re_disc", "im_disc", "abs_disc", "mc_stderr"});
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < r.t.size(); ++i) {
    a.results.add({num(r.t[i]), num(r.discrepancy[i].real()), num(r.discrepancy[i].imag()),
                   num(std::abs(r.discrepancy[i])), num(mc_stderr[i])});
    pts.emplace_back(r.t[i], std::abs(r.discrepancy[i]));
  }
  a.plot.blocks.push_back(std::move(pts));
  a.fit = fit_json(r.fit);
  a.fit["command"] = command;
  a.fit["l1_norm"] = r.l1_norm;
  a.fit["decay_rate"] = r.decay_rate;
  a.fit["constant"] = r.constant;
  return a;
}

torus::RateFitOptions rate_options(const json& c, const RunContext& ctx, const std::string& where) {
  torus::RateFitOptions opt;
  opt.mode = read_fit_mode(c, "fit_mode", where);
  opt.window = count_or(c, "window", opt.window, where);
  if (c.contains("decay_rate")) opt.decay_rate = number_or(c, "decay_rate", 0.0, where);
  opt.jobs = ctx.jobs;
  return opt;
}

std::size_t mc_samples(const json& c, const std::string& where) {
  if (!c.contains("monte_carlo")) return 0;
  const json& m = c.at("monte_carlo");
  json_io::require_keys(m, {"samples"}, where + ".monte_carlo");
  return count_or(m, "samples", 100000, where + ".monte_carlo");
}

}  // namespace

Artifacts fourier_decay(const RunContext& ctx) {
  const json& c = ctx.config;
  const std::string w = "fourier-decay";
  require_payload_keys(c, {"measure", "direction", "t_grid", "method", "fit_mode", "window"}, w);
  const auto m = json_io::measure_from_json(need(c, "measure", w));
  const auto dir = json_io::read_vector(need(c, "direction", w), w + ".direction");
  if (dir.size() != m.dim()) throw ValidationError(w + ".direction: dimension mismatch with the measure");
  const auto t = read_grid(need(c, "t_grid", w), w + ".t_grid");
  const auto method = read_method(maybe(c, "method"), ctx.seed, w + ".method");
  const auto vals = parallel_map(t.size(), ctx.jobs, [&](std::size_t i) {
    return measures::fourier_transform(m, measures::FourierQuery{t[i] * dir, method});
  });
  Artifacts a;
  a.results = Table({"t", "re", "im", "abs", "error_estimate"});
  std::vector<double> mags;
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < t.size(); ++i) {
    mags.push_back(std::abs(vals[i].value));
    a.results.add({num(t[i]), num(vals[i].value.real()), num(vals[i].value.imag()), num(mags.back()),
                   num(vals[i].error_estimate)});
    pts.emplace_back(t[i], mags.back());
  }
  a.plot.blocks.push_back(std::move(pts));
  a.fit = fit_json(fit_decay(t, mags, FitAxis::LogLog, read_fit_mode(c, "fit_mode", w), count_or(c, "window", 5, w)));
  a.fit["command"] = "fourier-decay";
  a.fit["measure"] = m.type_name();
  return a;
}

Artifacts torus_rate(const RunContext& ctx) {
  const json& c = ctx.config;
  const std::string w = "torus-rate";
  require_payload_keys(c, {"measure", "lattice", "dilation", "observable", "t_grid", "fit_mode", "window",
                           "decay_rate", "monte_carlo"}, w);
  const auto m = json_io::measure_from_json(need(c, "measure", w));
  const auto lat = read_lattice(maybe(c, "lattice"), m.dim(), w + ".lattice");
  const auto dil = read_dilation(maybe(c, "dilation"), m.dim(), w + ".dilation");
  const auto f = read_observable(need(c, "observable", w), w + ".observable");
  if (f.dim() != m.dim()) throw ValidationError(w + ".observable: dimension mismatch with the measure");
  const auto t = read_grid(need(c, "t_grid", w), w + ".t_grid");
  const auto opt = rate_options(c, ctx, w);
  const std::size_t n = mc_samples(c, w);

  spdlog::info("torus-rate: {} grid points, {} terms", t.size(), f.terms().size());
  const auto r = torus::equidistribution_rate_fit(m, lat, dil, f, t, opt);
  std::vector<double> se(t.size(), std::nan(""));
  if (n > 0) {
    se = parallel_map(t.size(), ctx.jobs, [&](std::size_t i) {
      return torus::discrepancy_monte_carlo(m, lat, dil, f, t[i], n, ctx.seed + i).standard_error;
    });
  }
  return rate_artifacts(r, se, "torus-rate");
}

Artifacts ray_test(const RunContext& ctx) {
  const json& c = ctx.config;
  const std::string w = "ray-test";
  require_payload_keys(c, {"measure", "lattice", "rays", "t_grid", "stall_threshold", "decay_ratio", "window"}, w);
  const auto m = json_io::measure_from_json(need(c, "measure", w));
  const auto lat = read_lattice(maybe(c, "lattice"), m.dim(), w + ".lattice");
  const json& rj = need(c, "rays", w);
  if (!rj.is_array() || rj.empty()) throw ValidationError(w + ".rays: expected a nonempty array");
  std::vector<torus::IVec> rays;
  for (std::size_t i = 0; i < rj.size(); ++i) {
    rays.push_back(read_ivec(rj[i], w + ".rays[" + std::to_string(i) + "]"));
    if (rays.back().size() != m.dim()) throw ValidationError(w + ".rays: dimension mismatch with the measure");
  }
  const auto t = read_grid(need(c, "t_grid", w), w + ".t_grid");
  torus::RayTestOptions opt;
  opt.stall_threshold = number_or(c, "stall_threshold", opt.stall_threshold, w);
  opt.decay_ratio = number_or(c, "decay_ratio", opt.decay_ratio, w);
  opt.window = count_or(c, "window", opt.window, w);
  opt.jobs = ctx.jobs;
  const auto res = torus::integral_ray_decay_test(m, lat, rays, t, opt);

  Artifacts a;
  a.results = Table({"ray", "t", "abs_fourier"});
  a.fit = {{"command", "ray-test"}, {"rays", json::array()}};
  for (const auto& r : res) {
    std::string label;
    for (Eigen::Index k = 0; k < r.ray.size(); ++k) label += (k ? " " : "") + std::to_string(r.ray(k));
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < t.size(); ++i) {
      a.results.add({label, num(t[i]), num(r.magnitudes[i])});
      pts.emplace_back(t[i], r.magnitudes[i]);
    }
    a.plot.blocks.push_back(std::move(pts));
    a.fit["rays"].push_back({{"ray", std::vector<int>(r.ray.data(), r.ray.data() + r.ray.size())},
                             {"verdict", torus::to_string(r.verdict)},
                             {"first_decade_max", r.first_decade_max},
                             {"last_decade_min", r.last_decade_min},
                             {"last_decade_max", r.last_decade_max}});
  }
  return a;
}

Artifacts lifted_circle(const RunContext& ctx) {
  const json& c = ctx.config;
  const std::string w = "lifted-circle";
  require_payload_keys(c, {"observable", "t_grid", "fit_mode", "window", "decay_rate", "monte_carlo"}, w);
  const auto f = read_observable(need(c, "observable", w), w + ".observable");
  if (f.dim() != 3) throw ValidationError(w + ".observable: frequencies must be 3-dimensional");
  const auto t = read_grid(need(c, "t_grid", w), w + ".t_grid");
  const auto opt = rate_options(c, ctx, w);
  const std::size_t n = mc_samples(c, w);
  const auto r = torus::lifted_circle_rate_fit(f, t, opt);
  std::vector<double> se(t.size(), std::nan(""));
  if (n > 0) {
    se = parallel_map(t.size(), ctx.jobs, [&](std::size_t i) {
      return torus::lifted_circle_monte_carlo(f, t[i], n, ctx.seed + i).standard_error;
    });
  }
  return rate_artifacts(r, se, "lifted-circle");
}

Artifacts hyperbolic_average(const RunContext& ctx) {
  const json& c = ctx.config;
  const std::string w = "hyperbolic-average";
  require_payload_keys(c, {"W", "sigma", "p", "t_grid", "observable_id", "bumps", "group_file", "order",
                           "panel_length", "positive_time", "window", "fit_mode", "cells"}, w);
  translates::TranslateConfig cfg;
  if (c.contains("W")) cfg.W = read_lie(c.at("W"), w + ".W");
  cfg.sigma = number_or(c, "sigma", cfg.sigma, w);
  if (c.contains("p")) cfg.p = read_sl2(c.at("p"), w + ".p");
  cfg.t_grid = read_grid(need(c, "t_grid", w), w + ".t_grid");
  cfg.order = static_cast<int>(count_or(c, "order", static_cast<std::size_t>(cfg.order), w));
  cfg.panel_length = number_or(c, "panel_length", cfg.panel_length, w);
  cfg.positive_time = flag_or(c, "positive_time", false, w);
  cfg.jobs = ctx.jobs;
  cfg.group = read_group(c.contains("group_file") ? c.at("group_file") : json("builtin:bolza"), ctx.config_dir,
                         w + ".group_file");
  if (c.contains("observable_id") == c.contains("bumps"))
    throw ValidationError(w + ": give exactly one of observable_id and bumps");
  const auto bumps = c.contains("bumps") ? read_bumps(c.at("bumps"), w + ".bumps")
                                         : preset_bumps(string_or(c, "observable_id", "", w));
  cfg.validate();
  const BundleObservable f(cfg.group, bumps);
  translates::EnvelopeOptions eo;
  eo.window = count_or(c, "window", eo.window, w);
  eo.mode = read_fit_mode(c, "fit_mode", w);

  spdlog::info("hyperbolic-average: {} grid points, {} periodized terms", cfg.t_grid.size(), f.term_count());
  const auto rep = translates::run_translates(cfg, f, f.mean(), eo);

  Artifacts a;
  a.results = Table({"t", "re_k", "im_k", "abs_disc", "quad_err"});
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < rep.t.size(); ++i) {
    a.results.add({num(rep.t[i]), num(rep.k[i].real()), num(rep.k[i].imag()), num(rep.discrepancy[i]),
                   num(rep.quad_error[i])});
    pts.emplace_back(rep.t[i], rep.discrepancy[i]);
  }
  a.plot.blocks.push_back(std::move(pts));
  a.fit = fit_json(rep.fit);
  a.fit["command"] = "hyperbolic-average";
  a.fit["group"] = cfg.group->name();
  a.fit["mean"] = complex_json(rep.mean);
  a.fit["envelope_exponent"] = rep.envelope_exponent;
  a.fit["frequency"] = rep.frequency ? json(*rep.frequency) : json(nullptr);
  a.fit["stable_component"] = rep.stable_component;
  a.fit["quadrature_order"] = rep.order;
  a.fit["assumption"] = rep.assumption;

  if (c.contains("cells")) {
    const json& cj = c.at("cells");
    const std::string cw = w + ".cells";
    json_io::require_keys(cj, {"t", "points"}, cw);
    const auto ts = read_grid(need(cj, "t", cw), cw + ".t");
    const std::size_t n = count_or(cj, "points", 200000, cw);
    if (n < 1000) throw ValidationError(cw + ".points: need at least 1000");
    const fuchsian::CellPartition cells(cfg.group);
    const double sign = cfg.positive_time ? 1.0 : -1.0;
    json tv = json::array();
    std::vector<std::pair<double, double>> tv_pts;
    for (double t : ts) {
      std::vector<Sl2Element> pts_t(n);
      parallel_for(n, ctx.jobs, [&](std::size_t i) {
        const double s = cfg.sigma * static_cast<double>(i) / static_cast<double>(n);
        pts_t[i] = fuchsian::flow_reduce(*cfg.group, cfg.p * exp_lie(cfg.W, s), sign * t);
      });
      const double d = cells.total_variation(cells.histogram(pts_t));
      tv.push_back({{"t", t}, {"total_variation", d}});
      tv_pts.emplace_back(t, d);
    }
    a.fit["cells"] = tv;
    a.plot.blocks.push_back(std::move(tv_pts));
  }
  return a;
}

Artifacts report(const std::vector<std::filesystem::path>& runs) {
  if (runs.empty()) throw ValidationError("report: no run directories given");
  Artifacts a;
  a.results = Table({"run", "command", "slope", "residual_rms", "passed", "failed"});
  a.fit = {{"command", "report"}, {"runs", json::array()}};
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const auto path = runs[i] / "fit.json";
    std::ifstream in(path);
    if (!in) throw ValidationError("report: cannot open " + path.string());
    json j;
    try {
      j = json::parse(in);
    } catch (const json::parse_error& e) {
      throw ValidationError("report: invalid JSON in " + path.string());
    }
    auto field = [&](const char* k) {
      if (!j.contains(k) || !j.at(k).is_number()) return std::string("nan");
      return num(j.at(k).get<double>());
    };
    const std::string cmd = j.contains("command") && j.at("command").is_string() ? j.at("command").get<std::string>() : "";
    const std::string slope = j.contains("envelope_exponent") ? field("envelope_exponent") : field("slope");
    a.results.add({runs[i].string(), cmd, slope, field("residual_rms"), field("passed"), field("failed")});
    a.fit["runs"].push_back({{"run", runs[i].string()}, {"fit", j}});
    pts.emplace_back(static_cast<double>(i), slope == "nan" ? std::nan("") : std::stod(slope));
  }
  a.plot.blocks.push_back(std::move(pts));
  return a;
}

}  // namespace equilab::cli
