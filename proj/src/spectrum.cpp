#include "chainwave/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "chainwave/error.hpp"
#include "chainwave/parallel.hpp"

namespace chainwave {

namespace {

constexpr double kPi = std::numbers::pi;

struct Sample {
  double z;
  double f;
};

std::optional<double> try_char_fn(const ChainGeometry& geom, double z, double pole_threshold) {
  try {
    return char_fn(geom, z, pole_threshold);
  } catch (const Error& e) {
    if (e.code() == Errc::PoleEncountered) return std::nullopt;
    throw;
  }
}

std::string fmt_z(double z) {
  std::ostringstream os;
  os.precision(10);
  os << z;
  return os.str();
}

}  // namespace

double AsymptoticFamily::predicted_z(const ChainGeometry& geom, int k) const {
  switch (kind) {
    case Kind::StringEdge:
      return std::sqrt(k * kPi / geom.length(2 * edge_pair - 1));
    case Kind::InteriorBeam:
      return (kPi + 2.0 * k * kPi) / (2.0 * geom.length(2 * edge_pair));
    case Kind::LastBeam:
      return (kPi / 4.0 + k * kPi) / geom.length(2 * edge_pair);
  }
  return 0.0;
}

double AsymptoticFamily::spacing(const ChainGeometry& geom, int k) const {
  if (kind == Kind::StringEdge) {
    // dz/dk of sqrt(k pi / l)
    const double l = geom.length(2 * edge_pair - 1);
    return kPi / (2.0 * l * predicted_z(geom, k));
  }
  return kPi / geom.length(2 * edge_pair);
}

std::string AsymptoticFamily::label() const {
  switch (kind) {
    case Kind::StringEdge: return "string" + std::to_string(edge_pair);
    case Kind::InteriorBeam: return "beam" + std::to_string(edge_pair);
    case Kind::LastBeam: return "lastbeam";
  }
  return "";
}

std::vector<AsymptoticFamily> families(const ChainGeometry& geom) {
  std::vector<AsymptoticFamily> out;
  const int n = geom.n_pairs();
  for (int j = 1; j <= n; ++j) out.push_back({AsymptoticFamily::Kind::StringEdge, j});
  for (int j = 1; j < n; ++j) out.push_back({AsymptoticFamily::Kind::InteriorBeam, j});
  out.push_back({AsymptoticFamily::Kind::LastBeam, n});
  return out;
}

SpectrumScan find_spectrum(const ChainGeometry& geom, double z_min, double z_max, int scan_points,
                           double tol, const SpectrumScanOptions& options) {
  if (!(z_min > 0.0) || !(z_max > z_min) || scan_points < 2 || !(tol > 0.0)) {
    throw Error(Errc::InvalidRange, "find_spectrum needs 0 < z_min < z_max, scan_points >= 2, tol > 0");
  }
  const auto n = static_cast<std::size_t>(scan_points);
  const double step = (z_max - z_min) / static_cast<double>(n - 1);
  std::vector<std::optional<double>> values(n);
  parallel_for(n, [&](std::size_t i) {
    const double z = (i + 1 == n) ? z_max : z_min + static_cast<double>(i) * step;
    values[i] = try_char_fn(geom, z, options.pole_threshold);
  });

  SpectrumScan scan;
  std::vector<Sample> samples;
  samples.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double z = (i + 1 == n) ? z_max : z_min + static_cast<double>(i) * step;
    if (values[i]) {
      samples.push_back({z, *values[i]});
      continue;
    }
    // Pole flagged: re-scan the neighborhood at half step.
    ++scan.pole_points;
    for (double dz : {-0.5 * step, 0.5 * step}) {
      const double zz = z + dz;
      if (zz <= z_min || zz >= z_max) continue;
      if (auto f = try_char_fn(geom, zz, options.pole_threshold)) samples.push_back({zz, *f});
    }
  }
  std::sort(samples.begin(), samples.end(), [](const Sample& a, const Sample& b) { return a.z < b.z; });
  if (scan.pole_points > 0) {
    scan.warnings.push_back(std::to_string(scan.pole_points) + " scan points hit the beam pole threshold");
  }

  // Brackets, then bisection per bracket.
  std::vector<std::pair<Sample, Sample>> brackets;
  std::vector<double> exact;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (samples[i].f == 0.0) {
      exact.push_back(samples[i].z);
      continue;
    }
    if (i + 1 < samples.size() && samples[i + 1].f != 0.0 &&
        std::signbit(samples[i].f) != std::signbit(samples[i + 1].f)) {
      brackets.emplace_back(samples[i], samples[i + 1]);
    }
    // Parabola through three same-sign samples dipping past zero: a root
    // pair may hide inside one cell.
    if (i > 0 && i + 1 < samples.size()) {
      const Sample& a = samples[i - 1];
      const Sample& b = samples[i];
      const Sample& c = samples[i + 1];
      const bool same = std::signbit(a.f) == std::signbit(b.f) && std::signbit(b.f) == std::signbit(c.f);
      if (same && std::abs(b.f) < std::abs(a.f) && std::abs(b.f) < std::abs(c.f)) {
        const double h1 = b.z - a.z, h2 = c.z - b.z;
        const double d1 = (b.f - a.f) / h1, d2 = (c.f - b.f) / h2;
        const double curv = 2.0 * (d2 - d1) / (h1 + h2);
        if (curv != 0.0) {
          const double slope_b = (d1 * h2 + d2 * h1) / (h1 + h2);
          const double vertex = b.f - slope_b * slope_b / (2.0 * curv);
          if (std::signbit(vertex) != std::signbit(b.f)) {
            scan.warnings.push_back("possible missed root pair near z=" + fmt_z(b.z));
          }
        }
      }
    }
  }

  std::vector<SpectralRoot> roots(brackets.size());
  parallel_for(brackets.size(), [&](std::size_t k) {
    auto [lo, hi] = brackets[k];
    for (int iter = 0; iter < 200 && (hi.z - lo.z) > tol; ++iter) {
      const double mid = 0.5 * (lo.z + hi.z);
      if (mid <= lo.z || mid >= hi.z) break;
      auto fm = try_char_fn(geom, mid, options.pole_threshold);
      if (!fm) fm = try_char_fn(geom, std::nextafter(mid, hi.z), options.pole_threshold);
      if (!fm) break;
      if (*fm == 0.0) {
        lo = hi = {mid, 0.0};
        break;
      }
      if (std::signbit(*fm) == std::signbit(lo.f)) {
        lo = {mid, *fm};
      } else {
        hi = {mid, *fm};
      }
    }
    SpectralRoot r;
    r.z = 0.5 * (lo.z + hi.z);
    const TransferEval ev = eval_M_traced(geom, r.z, 0.0);
    r.residual = std::abs(ev.M.m12);
    r.min_denominator = ev.min_denominator;
    roots[k] = r;
  });
  for (double z : exact) {
    SpectralRoot r;
    r.z = z;
    const TransferEval ev = eval_M_traced(geom, z, 0.0);
    r.residual = std::abs(ev.M.m12);
    r.min_denominator = ev.min_denominator;
    roots.push_back(r);
  }
  std::sort(roots.begin(), roots.end(), [](const SpectralRoot& a, const SpectralRoot& b) { return a.z < b.z; });

  // Flat crossings: the slope at the root is tiny compared with f nearby.
  for (auto& r : roots) {
    const double dz = 1e-6 * r.z;
    const double fp = char_fn(geom, r.z + dz, 0.0);
    const double fm = char_fn(geom, r.z - dz, 0.0);
    const double local_scale = eval_M(geom, r.z, 0.0).max_abs();
    if (std::abs(fp - fm) < 1e-10 * local_scale) {
      scan.warnings.push_back("flat crossing at z=" + fmt_z(r.z));
    }
  }
  for (std::size_t i = 0; i < roots.size(); ++i) {
    roots[i].lambda_im = roots[i].z * roots[i].z;
    roots[i].index = static_cast<int>(i);
  }
  scan.roots = std::move(roots);
  return scan;
}

int recommended_scan_points(const ChainGeometry& geom, double z_min, double z_max, int samples_per_spacing) {
  double spacing = std::numeric_limits<double>::infinity();
  for (int j = 1; j <= geom.edge_count(); ++j) {
    const double l = geom.length(j);
    spacing = std::min(spacing, ChainGeometry::kind(j) == EdgeKind::String ? kPi / (2.0 * l * z_max) : kPi / l);
  }
  const double points = (z_max - z_min) / spacing * samples_per_spacing;
  return static_cast<int>(std::min(points, 5e7)) + 2;
}

std::vector<SpectralRoot> first_roots(const ChainGeometry& geom, int count, double z_min, double tol) {
  double z_max = std::max(2.0 * z_min, 8.0);
  for (;;) {
    SpectrumScan scan = find_spectrum(geom, z_min, z_max, recommended_scan_points(geom, z_min, z_max), tol);
    if (static_cast<int>(scan.roots.size()) >= count) {
      scan.roots.resize(static_cast<std::size_t>(count));
      return scan.roots;
    }
    if (z_max > 1e4) throw Error(Errc::InsufficientRoots, "fewer than " + std::to_string(count) + " roots below z = 1e4");
    z_max *= 1.5;
  }
}

std::vector<SpectralRoot> classify_roots(const ChainGeometry& geom, std::vector<SpectralRoot> roots,
                                         int k_max) {
  const auto fams = families(geom);
  for (auto& r : roots) {
    r.family.reset();
    r.family_k = 0;
    double best_rel = std::numeric_limits<double>::infinity();
    for (const auto& fam : fams) {
      // Invert the prediction for a real-valued k estimate, then test neighbors.
      const double l = (fam.kind == AsymptoticFamily::Kind::StringEdge) ? geom.length(2 * fam.edge_pair - 1)
                                                                        : geom.length(2 * fam.edge_pair);
      double k_est = 0.0;
      switch (fam.kind) {
        case AsymptoticFamily::Kind::StringEdge: k_est = r.z * r.z * l / kPi; break;
        case AsymptoticFamily::Kind::InteriorBeam: k_est = (2.0 * l * r.z / kPi - 1.0) / 2.0; break;
        case AsymptoticFamily::Kind::LastBeam: k_est = (l * r.z - kPi / 4.0) / kPi; break;
      }
      const auto k0 = static_cast<long>(std::llround(k_est));
      for (long k = k0 - 1; k <= k0 + 1; ++k) {
        if (k < 1 || k > k_max) continue;
        const int ki = static_cast<int>(k);
        const double rel = std::abs(r.z - fam.predicted_z(geom, ki)) / fam.spacing(geom, ki);
        if (rel < best_rel) {
          best_rel = rel;
          if (rel < kFamilyWindow) {
            r.family = fam;
            r.family_k = ki;
          } else {
            r.family.reset();
            r.family_k = 0;
          }
        }
      }
    }
  }
  return roots;
}

double generalized_gap(const std::vector<SpectralRoot>& roots, int n_pairs) {
  const auto window = static_cast<std::size_t>(2 * n_pairs);
  if (n_pairs < 1 || roots.size() < window + 1) {
    throw Error(Errc::InsufficientRoots, "generalized gap needs at least 2N+1 roots");
  }
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + window < roots.size(); ++i) {
    gap = std::min(gap, roots[i + window].lambda_im - roots[i].lambda_im);
  }
  return gap;
}

double simple_gap(const std::vector<SpectralRoot>& roots) {
  if (roots.size() < 2) throw Error(Errc::InsufficientRoots, "simple gap needs two roots");
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < roots.size(); ++i) {
    gap = std::min(gap, roots[i + 1].lambda_im - roots[i].lambda_im);
  }
  return gap;
}

}  // namespace chainwave
