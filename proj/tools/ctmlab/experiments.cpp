#include "experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <memory>

#include "ctm/decoupling.hpp"
#include "ctm/projector.hpp"
#include "ctm/transfer.hpp"

#include "csv.hpp"
#include "stack.hpp"
#include "svg.hpp"

namespace lab {
namespace {

std::string out_path(const std::string& out_dir, const std::string& file) {
  return (std::filesystem::path(out_dir) / file).string();
}

CsvTable report_table(const ExperimentConfig& cfg) {
  CsvTable t;
  t.comments = {"ctmlab " + cfg.kind + " " + cfg.id, "seed " + std::to_string(cfg.seed)};
  return t;
}

ctm::PowerOpts seeded(const ExperimentConfig& cfg, const std::string& quantity,
                      double rtol = 1e-10) {
  ctm::PowerOpts o;
  o.rtol = rtol;
  o.seed = row_seed(cfg.seed, cfg.id + "/" + quantity);
  return o;
}

void maybe_plot(const ExperimentConfig& cfg, const std::string& out_dir, const PlotSpec& spec) {
  if (cfg.plot.empty()) return;
  write_text_file(out_path(out_dir, cfg.plot), render_plot(spec));
}

int run_green(const ExperimentConfig& cfg, const std::string& out_dir) {
  Stack st(cfg.lattice, cfg.metric, cfg.mass);
  CsvTable t = report_table(cfg);
  t.header = {"source", "site", "t", "x", "y", "value"};
  PlotSpec plot;
  plot.title = cfg.id + ": kernel columns";
  plot.xlabel = "t";
  plot.ylabel = "|column|";
  plot.log_y = true;

  for (const auto& src : cfg.sources) {
    const std::int64_t s = cfg.lattice.index_of(src);
    const Eigen::VectorXd col = st.kernel->column(s);
    for (std::int64_t i = 0; i < col.size(); ++i) {
      const auto c = cfg.lattice.coordinates(i);
      t.rows.push_back({std::to_string(s), std::to_string(i), csv_number(c[0]), csv_number(c[1]),
                        csv_number(c[2]), csv_number(col[i])});
    }
    // profile along the time axis through the source's transverse position
    PlotSeries series;
    series.label = "site " + std::to_string(s);
    for (int ti = 0; ti < cfg.lattice.slice_count(); ++ti) {
      auto idx = src;
      idx[0] = ti;
      series.x.push_back(cfg.lattice.coordinates(cfg.lattice.index_of(idx))[0]);
      series.y.push_back(std::abs(col[cfg.lattice.index_of(idx)]));
    }
    plot.series.push_back(std::move(series));
  }
  write_text_file(out_path(out_dir, cfg.id + ".csv"), t.str());
  maybe_plot(cfg, out_dir, plot);
  return 0;
}

int run_markov(const ExperimentConfig& cfg, const std::string& out_dir) {
  Stack st(cfg.lattice, cfg.metric, cfg.mass);
  const ctm::CurveChart* chart = cfg.metric.chart ? &*cfg.metric.chart : nullptr;
  const auto a = cfg.region_a->build(cfg.lattice, chart);
  const auto cut = cfg.region_cut->build(cfg.lattice, chart);
  const auto b = cfg.region_b->build(cfg.lattice, chart);

  const bool separated = ctm::separation_check(ctm::adjacency_graph(*st.op), a, b, cut);
  const double res = ctm::markov_residual(*st.space, a, cut, b, seeded(cfg, "markov_residual"));

  CsvTable t = report_table(cfg);
  t.header = {"experiment", "quantity", "value", "tolerance", "pass"};
  int failed = 0;
  auto row = [&](const std::string& q, double v, double tol, bool pass) {
    t.rows.push_back({cfg.id, q, csv_number(v), csv_number(tol), pass ? "pass" : "fail"});
    if (!pass) ++failed;
  };
  row("separated", separated ? 1.0 : 0.0, 1.0, separated);
  row("markov_residual", res, cfg.tolerance, res <= cfg.tolerance);
  write_text_file(out_path(out_dir, cfg.id + ".csv"), t.str());

  std::printf("%s: separated=%d residual=%.3e (tol %.1e) -> %s\n", cfg.id.c_str(),
              separated ? 1 : 0, res, cfg.tolerance, failed == 0 ? "pass" : "FAIL");
  return failed;
}

int run_transfer(const ExperimentConfig& cfg, const std::string& out_dir) {
  Stack st(cfg.lattice, cfg.metric, cfg.mass);
  const double omega = ctm::omega_max(*st.metric, cfg.mass);
  const auto reports =
      ctm::decay_rate(*st.space, *st.metric, cfg.taus, seeded(cfg, "decay_rate"));

  CsvTable t = report_table(cfg);
  t.header = {"tau", "norm", "rate", "omega_max", "min_re_spectrum", "symmetry_residual"};
  PlotSpec plot;
  plot.title = cfg.id + ": propagator norm decay";
  plot.xlabel = "tau";
  plot.ylabel = "norm";
  plot.log_y = true;
  PlotSeries series;
  series.label = "|U(tau)|";

  int failed = 0;
  for (const auto& r : reports) {
    t.rows.push_back({csv_number(r.tau), csv_number(r.norm), csv_number(r.rate),
                      csv_number(r.omega), csv_number(r.min_re_spectrum),
                      csv_number(r.symmetry_residual)});
    series.x.push_back(r.tau);
    series.y.push_back(r.norm);
    const bool ok = r.rate >= cfg.rate_floor * omega;
    if (!ok) ++failed;
    std::printf("%s: tau=%.4g norm=%.6e rate=%.6f (floor %.4f) -> %s\n", cfg.id.c_str(), r.tau,
                r.norm, r.rate, cfg.rate_floor * omega, ok ? "pass" : "FAIL");
  }
  plot.series.push_back(std::move(series));
  write_text_file(out_path(out_dir, cfg.id + ".csv"), t.str());
  maybe_plot(cfg, out_dir, plot);
  return failed;
}

int run_spectrum(const ExperimentConfig& cfg, const std::string& out_dir) {
  Stack st(cfg.lattice, cfg.metric, cfg.mass);
  const double omega = ctm::omega_max(*st.metric, cfg.mass);
  const auto [lo, hi] = ctm::centered_pair(cfg.lattice, cfg.step);
  const ctm::Propagator p(*st.space, lo, hi);
  const auto rep = ctm::generator_spectrum(p, *st.metric, seeded(cfg, "generator_spectrum"));

  CsvTable t = report_table(cfg);
  t.header = {"tau", "norm", "rate", "omega_max", "min_re_spectrum", "symmetry_residual"};
  t.rows.push_back({csv_number(rep.tau), csv_number(rep.norm), csv_number(rep.rate),
                    csv_number(rep.omega), csv_number(rep.min_re_spectrum),
                    csv_number(rep.symmetry_residual)});
  write_text_file(out_path(out_dir, cfg.id + ".csv"), t.str());

  auto evs = rep.eigenvalues;
  std::sort(evs.begin(), evs.end(), [](const auto& a, const auto& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  CsvTable ev = report_table(cfg);
  ev.header = {"re", "im"};
  PlotSpec plot;
  plot.title = cfg.id + ": generator spectrum";
  plot.xlabel = "index";
  plot.ylabel = "Re";
  PlotSeries series;
  series.label = "Re(spec)";
  for (std::size_t i = 0; i < evs.size(); ++i) {
    ev.rows.push_back({csv_number(evs[i].real()), csv_number(evs[i].imag())});
    series.x.push_back(double(i));
    series.y.push_back(evs[i].real());
  }
  plot.series.push_back(std::move(series));
  write_text_file(out_path(out_dir, cfg.id + "-eigenvalues.csv"), ev.str());
  maybe_plot(cfg, out_dir, plot);

  const bool ok = rep.min_re_spectrum >= cfg.rate_floor * omega;
  std::printf("%s: tau=%.4g min_re=%.6f (floor %.4f) sym_res=%.2e -> %s\n", cfg.id.c_str(),
              rep.tau, rep.min_re_spectrum, cfg.rate_floor * omega, rep.symmetry_residual,
              ok ? "pass" : "FAIL");
  return ok ? 0 : 1;
}

int run_decouple(const ExperimentConfig& cfg, const std::string& out_dir) {
  CsvTable t = report_table(cfg);
  t.header = {"rotation", "alpha", "beta", "min_cos", "bound", "direct", "margin",
              "corridor_cross", "corridor_transfer", "bound_ratio"};
  PlotSpec plot;
  plot.title = cfg.id + ": corridor bound vs direct norm";
  plot.xlabel = "rotation";
  plot.ylabel = "value";
  PlotSeries sb, sd;
  sb.label = "bound";
  sd.label = "direct";

  int failed = 0;
  for (const double phi : cfg.rotations) {
    const auto chart = ctm::build_chart(cfg.curve, phi);
    Stack st(cfg.lattice, ctm::MetricSpec::curve_induced(chart), cfg.mass);
    const auto l1 = cfg.region_l1->build(cfg.lattice, &chart);
    const auto l2 = cfg.region_l2->build(cfg.lattice, &chart);
    const auto rep = ctm::decoupling_experiment(*st.space, chart, l1, l2,
                                                seeded(cfg, "decouple", 1e-12));
    const double ratio = rep.direct / rep.bound;
    t.rows.push_back({csv_number(phi), csv_number(rep.alpha), csv_number(rep.beta),
                      csv_number(rep.min_cos), csv_number(rep.bound), csv_number(rep.direct),
                      csv_number(rep.margin), csv_number(rep.corridor_cross),
                      csv_number(rep.corridor_transfer), csv_number(ratio)});
    sb.x.push_back(phi);
    sb.y.push_back(rep.bound);
    sd.x.push_back(phi);
    sd.y.push_back(rep.direct);
    const bool ok = ratio <= cfg.bound_slack;
    if (!ok) ++failed;
    std::printf("%s: rot=%.4g bound=%.6e direct=%.6e ratio=%.4f -> %s\n", cfg.id.c_str(), phi,
                rep.bound, rep.direct, ratio, ok ? "pass" : "FAIL");
  }
  plot.series = {std::move(sb), std::move(sd)};
  write_text_file(out_path(out_dir, cfg.id + ".csv"), t.str());
  maybe_plot(cfg, out_dir, plot);
  return failed;
}

}  // namespace

int run_experiment(const ExperimentConfig& cfg, const std::string& out_dir) {
  if (cfg.kind == "green") return run_green(cfg, out_dir);
  if (cfg.kind == "markov-check") return run_markov(cfg, out_dir);
  if (cfg.kind == "transfer") return run_transfer(cfg, out_dir);
  if (cfg.kind == "spectrum") return run_spectrum(cfg, out_dir);
  if (cfg.kind == "decouple") return run_decouple(cfg, out_dir);
  throw ctm::ConfigError("experiment.run: unknown kind '" + cfg.kind + "'");
}

int run_verify_all(const VerifyOptions& opt, const std::string& out_dir) {
  const auto outcomes = run_suite(opt);

  CsvTable t;
  t.comments = {"ctmlab verify-all", "seed " + std::to_string(opt.seed),
                std::string("tier ") + (opt.tier == Tier::full ? "full" : "small")};
  t.header = {"experiment", "quantity", "value", "tolerance", "pass"};
  int failed = 0;
  for (const auto& oc : outcomes) {
    for (const auto& r : oc.rows) {
      t.rows.push_back(
          {r.experiment, r.quantity, csv_number(r.value), csv_number(r.tolerance),
           r.pass ? "pass" : "fail"});
      if (!r.pass) ++failed;
    }
  }
  write_text_file(out_path(out_dir, "verify.csv"), t.str());

  for (const auto& oc : outcomes) {
    std::printf("criterion %d: %-50s %s  (%zu rows, %.2f s)\n", oc.index, oc.name.c_str(),
                oc.pass ? "PASS" : "FAIL", oc.rows.size(), oc.seconds);
    for (const auto& r : oc.rows)
      if (!r.pass)
        std::printf("    FAIL %s %s value=%.6g tol=%.3g %s\n", r.experiment.c_str(),
                    r.quantity.c_str(), r.value, r.tolerance, r.note.c_str());
  }
  std::printf("verify-all: %d row(s) failed\n", failed);
  return failed;
}

}  // namespace lab
