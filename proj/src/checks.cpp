#include "chainwave/checks.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "chainwave/discrete_system.hpp"
#include "chainwave/dynamics.hpp"
#include "chainwave/eigenmode.hpp"
#include "chainwave/error.hpp"
#include "chainwave/oracle.hpp"
#include "chainwave/spectrum.hpp"
#include "chainwave/transfer.hpp"

namespace chainwave {

namespace {

template <typename F>
CheckResult guarded(const std::string& name, F&& body) {
  try {
    return body();
  } catch (const Error& e) {
    return {name, false, std::string("error[") + std::string(errc_name(e.code())) + "]: " + e.what()};
  }
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

}  // namespace

std::vector<CheckResult> run_verify_suite(const ChainGeometry& geom, const VerifyOptions& opts) {
  std::vector<CheckResult> out;
  const int n = geom.n_pairs();
  std::vector<SpectralRoot> roots;

  out.push_back(guarded("root residuals", [&] {
    const SpectrumScan scan = find_spectrum(geom, 0.5, 12.0, recommended_scan_points(geom, 0.5, 12.0), 1e-12);
    roots = scan.roots;
    double worst = 0.0;
    for (const auto& r : roots) worst = std::max(worst, r.residual);
    return CheckResult{"root residuals", !roots.empty() && worst < 1e-8,
                       std::to_string(roots.size()) + " roots in (0.5, 12), max |f| = " + fmt(worst)};
  }));

  out.push_back(guarded("discrete oracle", [&] {
    const auto ref = first_roots(geom, opts.oracle_count);
    const RichardsonSpectrum rs = oracle_spectrum_richardson(geom, opts.h, opts.oracle_count);
    double worst = 0.0;
    for (std::size_t i = 0; i < ref.size(); ++i) {
      worst = std::max(worst, std::abs(rs.extrapolated[i] - ref[i].lambda_im) / ref[i].lambda_im);
    }
    return CheckResult{"discrete oracle", worst < 1e-3, "max relative deviation " + fmt(worst)};
  }));

  out.push_back(guarded("multiplicity", [&] {
    int bad = 0;
    for (const auto& r : roots) bad += multiplicity_check(geom, r.z) != 1;
    return CheckResult{"multiplicity", bad == 0, std::to_string(bad) + " roots without nullity 1"};
  }));

  out.push_back(guarded("generalized gap", [&] {
    const auto first = first_roots(geom, opts.gap_roots);
    const double g = generalized_gap(first, n);
    return CheckResult{"generalized gap", g > 0.0,
                       "gamma = " + fmt(g) + ", simple gap = " + fmt(simple_gap(first))};
  }));

  out.push_back(guarded("asymptotic remainder", [&] {
    std::vector<double> grid;
    for (int i = 0; i <= 20000; ++i) grid.push_back(10.0 + 70.0 * i / 20000.0);
    const GapReport rep = asymptotic_gap_check(geom, grid);
    std::string detail;
    for (const auto& w : rep.windows) detail += fmt(w.max_abs_g) + " ";
    return CheckResult{"asymptotic remainder", rep.windows_decreasing, "window maxima " + detail};
  }));

  out.push_back(guarded("zero eigenspace", [&] {
    const ZeroModeBasis basis = zero_eigenspace(geom);
    double exact = 0.0;
    for (const auto& m : basis.modes) exact = std::max(exact, zero_mode_residual(geom, m));
    const KernelCheck kc = kernel_check(discretize(geom, opts.h, Variant::Pc));
    const bool ok = basis.dimension() == n - 1 && kc.dimension == n - 1 && exact == 0.0 && kc.max_relative_error < 1e-6;
    return CheckResult{"zero eigenspace", ok,
                       "dimension " + std::to_string(basis.dimension()) + ", discrete kernel " +
                           std::to_string(kc.dimension) + ", interpolant error " + fmt(kc.max_relative_error)};
  }));

  for (Variant v : {Variant::P1, Variant::P2, Variant::Pc}) {
    const std::string name = "energy identity " + variant_name(v);
    out.push_back(guarded(name, [&] {
      const DiscreteSystem sys = discretize(geom, opts.h, v);
      SimulationOptions so;
      so.dt = 0.5 * opts.h;
      so.t_end = so.dt * static_cast<double>(opts.energy_steps);
      so.sample_every = 10;
      const EnergyTrace tr = simulate(sys, bump_state(sys), so);
      bool ok = tr.max_step_residual < 1e-8;
      if (v == Variant::Pc) {
        ok = ok && tr.max_energy_drift < 1e-8;
      } else {
        ok = ok && tr.max_step_increase <= 1e-12;
      }
      return CheckResult{name, ok,
                         "step residual " + fmt(tr.max_step_residual) + ", drift " + fmt(tr.max_energy_drift)};
    }));
  }

  out.push_back(guarded("node traces", [&] {
    const auto first = first_roots(geom, opts.mode_count);
    double smallest = INFINITY, worst_res = 0.0;
    for (const auto& r : first) {
      const Eigenmode m = build_eigenmode(geom, r.z);
      smallest = std::min(smallest, node_trace_sum_p2(m));
      worst_res = std::max(worst_res, m.residuals.max());
    }
    return CheckResult{"node traces", smallest > 0.0 && worst_res < 1e-8,
                       "min trace sum " + fmt(smallest) + ", max mode residual " + fmt(worst_res)};
  }));
  return out;
}

}  // namespace chainwave
