// chainwave: spectrum, eigenmodes and damped dynamics of string/beam chains.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "chainwave/checks.hpp"
#include "chainwave/config.hpp"
#include "chainwave/decay.hpp"
#include "chainwave/discrete_system.hpp"
#include "chainwave/dynamics.hpp"
#include "chainwave/eigenmode.hpp"
#include "chainwave/error.hpp"
#include "chainwave/report.hpp"
#include "chainwave/resolvent.hpp"
#include "chainwave/spectrum.hpp"
#include "chainwave/transfer.hpp"

namespace fs = std::filesystem;
using namespace chainwave;

namespace {

enum Exit : int { kOk = 0, kCheckFailed = 1, kUsage = 2, kBadInput = 3, kIo = 4, kNumerical = 5 };

int exit_code_for(Errc code) {
  switch (code) {
    case Errc::ParseError:
    case Errc::ValidationError: return kUsage;
    case Errc::IoError: return kIo;
    case Errc::EmptyInput:
    case Errc::OddEdgeCount:
    case Errc::NonPositiveLength:
    case Errc::DomainError:
    case Errc::InvalidRange:
    case Errc::WindowOutOfRange: return kBadInput;
    default: return kNumerical;
  }
}

// Collects the run log and writes it next to the outputs.
class RunLog {
 public:
  void line(const std::string& s) { text_ += s + "\n"; }
  void flush(const fs::path& dir) const {
    std::ofstream out(dir / "run.log", std::ios::app);
    out << text_;
  }

 private:
  std::string text_;
};

void cmd_spectrum(const RunConfig& cfg, const fs::path& out, RunLog& log) {
  const auto& sc = cfg.spectrum;
  SpectrumScanOptions so;
  so.pole_threshold = sc.pole_threshold;
  SpectrumScan scan = find_spectrum(cfg.geometry, sc.z_min, sc.z_max, sc.scan_points, sc.tol, so);
  scan.roots = classify_roots(cfg.geometry, scan.roots, sc.k_max);
  for (const auto& w : scan.warnings) {
    std::cerr << "chainwave: warning: " << w << "\n";
    log.line("warning: " + w);
  }
  write_text(out / "spectrum.csv", spectrum_csv(scan.roots));
  std::cout << scan.roots.size() << " roots in [" << sc.z_min << ", " << sc.z_max << "] -> "
            << (out / "spectrum.csv").string() << "\n";

  if (cfg.output.emit_svg) {
    PlotSpec plot;
    plot.title = "characteristic function f(z) / (-z)^(N-1)";
    plot.x_label = "z";
    plot.y_label = "scaled f";
    PlotSeries curve;
    const int samples = 4000;
    for (int i = 0; i < samples; ++i) {
      const double z = sc.z_min + (sc.z_max - sc.z_min) * i / (samples - 1);
      try {
        const double f = char_fn(cfg.geometry, z, sc.pole_threshold) / asymptotic_scale(cfg.geometry, z);
        curve.x.push_back(z);
        curve.y.push_back(f);
      } catch (const Error&) {
      }
    }
    curve.label = "f";
    PlotSeries marks;
    marks.markers = true;
    marks.color = "#d62728";
    marks.label = "roots";
    for (const auto& r : scan.roots) {
      marks.x.push_back(r.z);
      marks.y.push_back(0.0);
    }
    plot.series = {curve, marks};
    for (const auto& fam : families(cfg.geometry)) {
      for (int k = 1; k <= sc.k_max; ++k) {
        const double z = fam.predicted_z(cfg.geometry, k);
        if (z > sc.z_max) break;
        if (z >= sc.z_min) plot.vertical_marks.push_back(z);
      }
    }
    write_text(out / "spectrum.svg", svg_plot(plot));
  }
}

void cmd_modes(const RunConfig& cfg, const fs::path& out, RunLog& log) {
  const auto roots = first_roots(cfg.geometry, cfg.modes.count, cfg.spectrum.z_min, cfg.spectrum.tol);
  std::string summary = "index,z,node_trace_sum,node_trace_sum_p2,max_residual\n";
  for (const auto& r : roots) {
    const Eigenmode m = build_eigenmode(cfg.geometry, r.z);
    write_text(out / ("mode_" + std::to_string(r.index) + ".csv"), mode_csv(m, cfg.modes.samples_per_edge));
    summary += std::to_string(r.index) + "," + format_double(r.z) + "," + format_double(node_trace_sum(m)) + "," +
               format_double(node_trace_sum_p2(m)) + "," + format_double(m.residuals.max()) + "\n";
  }
  write_text(out / "modes.csv", summary);
  log.line("modes written: " + std::to_string(roots.size()));
  std::cout << roots.size() << " modes -> " << out.string() << "\n";
}

void cmd_simulate(const RunConfig& cfg, const fs::path& out, RunLog& log) {
  const auto& sc = cfg.simulate;
  const DiscreteSystem sys = discretize(cfg.geometry, sc.h, sc.variant);
  State init;
  SimulationOptions so;
  so.t_end = sc.t_end;
  so.dt = sc.dt;
  so.sample_every = sc.sample_every;
  so.geometric_sampling = sc.geometric_sampling;
  so.samples_per_decade = sc.samples_per_decade;
  so.project_zero_modes = sc.project_zero_modes;
  if (sc.initial == InitialData::ZeroMode) {
    init = zero_state(sys);
    init.u = sys.zero_modes.col(0);
    so.project_zero_modes = false;
    log.line("zero-mode initial data: projection disabled");
  } else {
    init = bump_state(sys, sc.initial_edge);
    if (so.project_zero_modes) init = project_out_zero_modes(sys, init);
    if (sc.normalize_graph_norm) {
      const double g = std::sqrt(graph_norm_sq(sys, init));
      init.u /= g;
      init.v /= g;
    }
  }
  const EnergyTrace tr = simulate(sys, init, so);
  write_text(out / "trace.csv", energy_trace_csv(tr));
  std::ostringstream msg;
  msg << "steps " << tr.steps << ", E(0) " << tr.samples.front().energy << ", E(end) " << tr.samples.back().energy
      << ", max step residual " << tr.max_step_residual << ", max step increase " << tr.max_step_increase;
  log.line(msg.str());
  std::cout << msg.str() << "\n";

  if (cfg.output.emit_svg) {
    PlotSpec plot;
    plot.title = "energy, variant " + variant_name(sc.variant);
    plot.x_label = "t";
    plot.y_label = "E(t)";
    plot.log_x = true;
    plot.log_y = true;
    PlotSeries s;
    for (const auto& smp : tr.samples) {
      s.x.push_back(smp.t);
      s.y.push_back(smp.energy);
    }
    plot.series = {s};
    write_text(out / "energy.svg", svg_plot(plot));
  }
}

void cmd_resolvent(const RunConfig& cfg, const fs::path& out, RunLog& log) {
  const auto& rc = cfg.resolvent;
  const DiscreteSystem sys = discretize(cfg.geometry, rc.h, Variant::P2);
  const double horizon = trust_horizon(sys);
  log.line("trust horizon " + format_double(horizon));
  if (!rc.betas.empty()) {
    for (double b : rc.betas) {
      if (b > horizon) std::cerr << "chainwave: warning: beta " << b << " exceeds the trust horizon " << horizon << "\n";
    }
    const auto samples = resolvent_norm_sweep(sys, rc.betas);
    write_text(out / "resolvent.csv", resolvent_csv(samples));
    std::cout << samples.size() << " resolvent samples -> " << (out / "resolvent.csv").string() << "\n";
    return;
  }
  const double hi = rc.beta_max > 0.0 ? rc.beta_max : horizon;
  if (!(hi > rc.beta_min)) throw Error(Errc::InvalidRange, "beta_min lies above the trust horizon");
  if (!rc.refine_peaks) {
    std::vector<double> betas;
    for (int i = 0; i < rc.count; ++i) betas.push_back(rc.beta_min + (hi - rc.beta_min) * i / (rc.count - 1));
    write_text(out / "resolvent.csv", resolvent_csv(resolvent_norm_sweep(sys, betas)));
    return;
  }
  const ResolventEnvelope env = resolvent_envelope(sys, rc.beta_min, hi, rc.count);
  write_text(out / "resolvent.csv", resolvent_csv(env.grid));
  write_text(out / "resolvent_peaks.csv", resolvent_csv(env.peaks));
  std::ostringstream msg;
  msg << "beta in [" << rc.beta_min << ", " << hi << "], horizon " << horizon << ", grid max/median "
      << env.grid_max_over_median << ", sup/median " << env.sup_over_grid_median << ", peaks " << env.peaks.size() << ", peak max/median "
      << env.peak_max_over_median << ", last-window growth " << (env.last_window_monotone_growth ? "yes" : "no");
  log.line(msg.str());
  std::cout << msg.str() << "\n";
  if (cfg.output.emit_svg) {
    PlotSpec plot;
    plot.title = "resolvent norm / beta";
    plot.x_label = "beta";
    plot.y_label = "norm / beta";
    plot.log_y = true;
    PlotSeries g, p;
    for (const auto& s : env.grid) {
      g.x.push_back(s.beta);
      g.y.push_back(s.norm_over_beta);
    }
    for (const auto& s : env.peaks) {
      p.x.push_back(s.beta);
      p.y.push_back(s.norm_over_beta);
    }
    g.label = "grid";
    p.label = "refined peaks";
    p.markers = true;
    p.color = "#d62728";
    plot.series = {g, p};
    write_text(out / "resolvent.svg", svg_plot(plot));
  }
}

void cmd_decay_fit(const RunConfig& cfg, const fs::path& out, RunLog& log) {
  if (cfg.decay.trace.empty()) throw Error(Errc::IoError, "decay.trace must name an energy trace CSV");
  std::vector<double> t, e;
  read_trace_csv(cfg.decay.trace, t, e);
  const DecayFit fit = fit_polynomial_decay(t, e, cfg.decay.t_lo, cfg.decay.t_hi);
  const std::string report = decay_report(fit);
  write_text(out / "decay_fit.txt", report);
  log.line(report);
  std::cout << report;
}

int cmd_verify(const RunConfig& cfg, RunLog& log) {
  int failures = 0;
  for (const auto& r : run_verify_suite(cfg.geometry)) {
    const std::string line = std::string(r.passed ? "PASS " : "FAIL ") + r.name + ": " + r.detail;
    std::cout << line << "\n";
    log.line(line);
    failures += r.passed ? 0 : 1;
  }
  return failures == 0 ? kOk : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"chainwave: spectra and damped dynamics of serially connected string/beam chains"};
  app.set_version_flag("--version", std::string(CHAINWAVE_VERSION));
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  const std::vector<std::pair<std::string, std::string>> subs{
      {"spectrum", "roots of the characteristic function, classified by asymptotic family"},
      {"modes", "eigenfunctions of the first roots, sampled per edge"},
      {"simulate", "energy history of the discretized system"},
      {"resolvent", "resolvent norm sweep of the damped generator"},
      {"decay-fit", "polynomial decay fit of an energy trace"},
      {"verify", "property suite; nonzero exit on any failure"}};
  for (const auto& [name, help] : subs) {
    CLI::App* sub = app.add_subcommand(name, help);
    auto* opt = sub->add_option("--config", config_path, "YAML run configuration")->check(CLI::ExistingFile);
    if (name != "verify") {
      opt->required();
      sub->add_option("--out", out_dir, "output directory (overrides output.directory)");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  const std::string cmd = app.get_subcommands().front()->get_name();
  const auto started = std::chrono::steady_clock::now();
  RunLog log;
  fs::path out;
  try {
    const RunConfig cfg = config_path.empty() ? default_config() : load_config(config_path);
    out = out_dir.empty() ? fs::path(cfg.output.directory) : fs::path(out_dir);
    log.line("chainwave " + std::string(CHAINWAVE_VERSION) + " " + cmd);
    log.line(describe_config(cfg));

    int rc = kOk;
    if (cmd == "spectrum") cmd_spectrum(cfg, out, log);
    if (cmd == "modes") cmd_modes(cfg, out, log);
    if (cmd == "simulate") cmd_simulate(cfg, out, log);
    if (cmd == "resolvent") cmd_resolvent(cfg, out, log);
    if (cmd == "decay-fit") cmd_decay_fit(cfg, out, log);
    if (cmd == "verify") rc = cmd_verify(cfg, log);

    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    log.line("elapsed " + format_double(secs) + " s");
    std::error_code ec;
    fs::create_directories(out, ec);
    log.flush(out);
    return rc;
  } catch (const ConfigError& e) {
    std::cerr << "chainwave: error[" << errc_name(e.code()) << "]: " << config_path << ":" << e.line() << ": "
              << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const Error& e) {
    std::cerr << "chainwave: error[" << errc_name(e.code()) << "]: " << e.what() << "\n";
    return exit_code_for(e.code());
  }
}
