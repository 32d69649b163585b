#include "chainwave/eigenmode.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "chainwave/error.hpp"
#include "chainwave/transfer.hpp"

namespace chainwave {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

// d-th derivative of sin(wx) or cos(wx).
double trig_deriv(bool is_sin, int d, double w, double x) {
  const double phase = w * x + d * kHalfPi;
  return std::pow(w, d) * (is_sin ? std::sin(phase) : std::cos(phase));
}

// d-th derivative of basis function k on a beam of length l.
double beam_basis(bool exponential, int k, int d, double z, double l, double x) {
  switch (k) {
    case 0: return trig_deriv(true, d, z, x);
    case 1: return trig_deriv(false, d, z, x);
    case 2:
      if (exponential) return std::pow(z, d) * std::exp(z * (x - l));
      return std::pow(z, d) * (d % 2 == 0 ? std::sinh(z * x) : std::cosh(z * x));
    default:
      if (exponential) return std::pow(-z, d) * std::exp(-z * x);
      return std::pow(z, d) * (d % 2 == 0 ? std::cosh(z * x) : std::sinh(z * x));
  }
}

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

GaussRule gauss_legendre(int n) {
  GaussRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.nodes[static_cast<std::size_t>(i)] = x;
    rule.weights[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

const GaussRule& gauss8() {
  static const GaussRule rule = gauss_legendre(8);
  return rule;
}

// Node vector at either end of an edge, from its coefficients.
Vec2 node_vector(const EdgeModeCoeffs& e, double x) {
  if (e.kind == EdgeKind::String) return {e.eval(0, x), e.eval(1, x) / (e.z * e.z)};
  return {e.eval(0, x), e.eval(3, x) / (e.z * e.z * e.z)};
}

}  // namespace

double EdgeModeCoeffs::eval(int d, double x) const {
  if (kind == EdgeKind::String) {
    const double w = z * z;
    return c[0] * trig_deriv(true, d, w, x) + c[1] * trig_deriv(false, d, w, x);
  }
  double v = 0.0;
  for (int k = 0; k < 4; ++k) v += c[static_cast<std::size_t>(k)] * beam_basis(exponential_basis, k, d, z, length, x);
  return v;
}

double ModeResiduals::max() const {
  return std::max({clamped_ends, beam_moments, continuity, force_balance, propagation});
}

double v_seminorm_sq(const std::vector<EdgeModeCoeffs>& edges) {
  const GaussRule& rule = gauss8();
  double total = 0.0;
  for (const auto& e : edges) {
    const int d = (e.kind == EdgeKind::String) ? 1 : 2;
    const double freq = (e.kind == EdgeKind::String) ? e.z * e.z : e.z;
    const int panels = std::max(4, static_cast<int>(std::ceil(2.0 * freq * e.length / std::numbers::pi)));
    const double w = e.length / panels;
    for (int p = 0; p < panels; ++p) {
      const double mid = (p + 0.5) * w;
      for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        const double v = e.eval(d, mid + 0.5 * w * rule.nodes[q]);
        total += 0.5 * w * rule.weights[q] * v * v;
      }
    }
  }
  return total;
}

Eigenmode build_eigenmode(const ChainGeometry& geom, double z, double root_tol) {
  if (!(z > 0.0)) throw Error(Errc::DomainError, "build_eigenmode needs z > 0");
  const double f = char_fn(geom, z, 0.0);
  if (!(std::abs(f) <= root_tol)) {
    throw Error(Errc::NotARoot, "|f(z)| = " + std::to_string(std::abs(f)) + " exceeds root tolerance");
  }

  Eigenmode mode;
  mode.z = z;
  const int edges = geom.edge_count();
  std::vector<Vec2> start(static_cast<std::size_t>(edges)), end(static_cast<std::size_t>(edges));

  Vec2 v{0.0, 1.0};
  for (int j = 1; j <= edges; ++j) {
    const double l = geom.length(j);
    EdgeModeCoeffs e;
    e.kind = ChainGeometry::kind(j);
    e.z = z;
    e.length = l;
    if (e.kind == EdgeKind::String) {
      if (j > 1) v = coupling_T_inv(z) * v;
      e.c = {v[1], v[0], 0.0, 0.0};
      start[static_cast<std::size_t>(j - 1)] = v;
      v = string_matrix(z, l) * v;
    } else {
      v = coupling_T(z) * v;
      e.exponential_basis = z * l > kExponentialBasisThreshold;
      // Rows: phi(0), phi'''(0)/z^3, phi''(0)/z^2, phi''(l)/z^2.
      Eigen::Matrix4d a;
      const std::array<std::pair<int, double>, 4> rows{{{0, 0.0}, {3, 0.0}, {2, 0.0}, {2, l}}};
      for (int r = 0; r < 4; ++r) {
        const auto [d, x] = rows[static_cast<std::size_t>(r)];
        for (int k = 0; k < 4; ++k) a(r, k) = beam_basis(e.exponential_basis, k, d, z, l, x) / std::pow(z, d);
      }
      Eigen::JacobiSVD<Eigen::Matrix4d> svd(a);
      const auto& sv = svd.singularValues();
      const double cond = sv(3) > 0.0 ? sv(0) / sv(3) : INFINITY;
      mode.worst_edge_condition = std::max(mode.worst_edge_condition, cond);
      if (!(cond <= kEdgeConditionLimit)) {
        throw Error(Errc::IllConditionedEdgeSolve,
                    "beam edge " + std::to_string(j) + " solve has condition estimate " + std::to_string(cond));
      }
      const Eigen::Vector4d coeffs = a.colPivHouseholderQr().solve(Eigen::Vector4d(v[0], v[1], 0.0, 0.0));
      e.c = {coeffs(0), coeffs(1), coeffs(2), coeffs(3)};
      start[static_cast<std::size_t>(j - 1)] = v;
      v = beam_matrix(z, l, 0.0) * v;
    }
    end[static_cast<std::size_t>(j - 1)] = v;
    mode.per_edge.push_back(e);
  }

  const double scale = 1.0 / std::sqrt(v_seminorm_sq(mode.per_edge));
  mode.seminorm_scale = scale;
  for (auto& e : mode.per_edge) {
    for (double& c : e.c) c *= scale;
  }
  for (auto& s : start) s = {s[0] * scale, s[1] * scale};
  for (auto& s : end) s = {s[0] * scale, s[1] * scale};

  ModeResiduals& res = mode.residuals;
  const auto& first = mode.per_edge.front();
  const auto& last = mode.per_edge.back();
  res.clamped_ends = std::max(std::abs(first.eval(0, 0.0)), std::abs(last.eval(0, last.length)));
  for (int j = 1; j <= edges; ++j) {
    const auto& e = mode.per_edge[static_cast<std::size_t>(j - 1)];
    const Vec2 a = node_vector(e, 0.0);
    const Vec2 b = node_vector(e, e.length);
    const Vec2& pa = start[static_cast<std::size_t>(j - 1)];
    const Vec2& pb = end[static_cast<std::size_t>(j - 1)];
    res.propagation = std::max({res.propagation, std::abs(a[0] - pa[0]), std::abs(a[1] - pa[1]),
                                std::abs(b[0] - pb[0]), std::abs(b[1] - pb[1])});
    if (e.kind == EdgeKind::Beam) {
      const double z2 = z * z;
      res.beam_moments = std::max({res.beam_moments, std::abs(e.eval(2, 0.0)) / z2, std::abs(e.eval(2, e.length)) / z2});
    }
    if (j < edges) {
      const auto& next = mode.per_edge[static_cast<std::size_t>(j)];
      res.continuity = std::max(res.continuity, std::abs(e.eval(0, e.length) - next.eval(0, 0.0)));
      // Beam shear balances the adjacent string slope at every junction.
      const double z3 = z * z * z;
      const double balance = (e.kind == EdgeKind::String) ? e.eval(1, e.length) + next.eval(3, 0.0)
                                                          : e.eval(3, e.length) + next.eval(1, 0.0);
      res.force_balance = std::max(res.force_balance, std::abs(balance) / z3);
      mode.node_values.push_back(e.eval(0, e.length));
    }
    if (e.kind == EdgeKind::Beam) {
      mode.beam_slope_start.push_back(e.eval(1, 0.0));
      mode.beam_slope_end.push_back(e.eval(1, e.length));
    }
  }
  return mode;
}

double node_trace_sum(const Eigenmode& mode) {
  double s = 0.0;
  for (double v : mode.node_values) s += v * v;
  return s;
}

double node_trace_sum_p2(const Eigenmode& mode) {
  double s = node_trace_sum(mode);
  for (double v : mode.beam_slope_start) s += v * v;
  for (std::size_t j = 0; j + 1 < mode.beam_slope_end.size(); ++j) s += mode.beam_slope_end[j] * mode.beam_slope_end[j];
  return s;
}

double ZeroMode::value(const ChainGeometry& geom, int edge, double x) const {
  const auto i = static_cast<std::size_t>(edge / 2);
  if (ChainGeometry::kind(edge) == EdgeKind::String) return levels[i];
  return levels[i - 1] + (levels[i] - levels[i - 1]) * x / geom.length(edge);
}

double ZeroMode::slope(const ChainGeometry& geom, int edge, double /*x*/) const {
  if (ChainGeometry::kind(edge) == EdgeKind::String) return 0.0;
  const auto i = static_cast<std::size_t>(edge / 2);
  return (levels[i] - levels[i - 1]) / geom.length(edge);
}

ZeroModeBasis zero_eigenspace(const ChainGeometry& geom) {
  ZeroModeBasis basis;
  basis.n_pairs = geom.n_pairs();
  for (int i = 1; i < basis.n_pairs; ++i) {
    ZeroMode m;
    m.levels.assign(static_cast<std::size_t>(basis.n_pairs + 1), 0.0);
    m.levels[static_cast<std::size_t>(i)] = 1.0;
    basis.modes.push_back(std::move(m));
  }
  return basis;
}

double zero_mode_residual(const ChainGeometry& geom, const ZeroMode& mode) {
  const int edges = geom.edge_count();
  double r = std::max(std::abs(mode.value(geom, 1, 0.0)), std::abs(mode.value(geom, edges, geom.length(edges))));
  for (int j = 1; j <= edges; ++j) {
    const double l = geom.length(j);
    if (j < edges) r = std::max(r, std::abs(mode.value(geom, j, l) - mode.value(geom, j + 1, 0.0)));
    // Strings carry no slope; beams are affine so moments and shear vanish identically.
    if (ChainGeometry::kind(j) == EdgeKind::String) {
      r = std::max({r, std::abs(mode.slope(geom, j, 0.0)), std::abs(mode.slope(geom, j, l))});
    } else {
      r = std::max(r, std::abs(mode.slope(geom, j, l) - mode.slope(geom, j, 0.0)));
    }
  }
  return r;
}

int multiplicity_check(const ChainGeometry& geom, double z, double z_tol) {
  if (!(z > 0.0) || !(z_tol > 0.0)) throw Error(Errc::DomainError, "multiplicity_check needs z > 0 and z_tol > 0");
  const Mat2 m = eval_M(geom, z, 0.0);
  Eigen::Matrix2d c;
  c << 1.0, 0.0, m.m11, m.m12;
  Eigen::JacobiSVD<Eigen::Matrix2d> svd(c);
  const auto& sv = svd.singularValues();
  const double dz = 1e-6 * z;
  const double slope = (char_fn(geom, z + dz, 0.0) - char_fn(geom, z - dz, 0.0)) / (2.0 * dz);
  const double floor = 1e-14 * m.max_abs();
  const double threshold = (3.0 * z_tol * std::abs(slope) + floor) / sv(0);
  return sv(1) <= threshold ? 1 : 0;
}

}  // namespace chainwave
