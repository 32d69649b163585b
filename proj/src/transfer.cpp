#include "chainwave/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "chainwave/error.hpp"

namespace chainwave {

double Mat2::max_abs() const {
  return std::max({std::abs(m11), std::abs(m12), std::abs(m21), std::abs(m22)});
}

Mat2 operator*(const Mat2& a, const Mat2& b) {
  return {a.m11 * b.m11 + a.m12 * b.m21, a.m11 * b.m12 + a.m12 * b.m22,
          a.m21 * b.m11 + a.m22 * b.m21, a.m21 * b.m12 + a.m22 * b.m22};
}

Vec2 operator*(const Mat2& a, const Vec2& v) {
  return {a.m11 * v[0] + a.m12 * v[1], a.m21 * v[0] + a.m22 * v[1]};
}

Mat2 string_matrix(double z, double l) {
  const double arg = l * z * z;
  const double c = std::cos(arg);
  const double s = std::sin(arg);
  return {c, s, -s, c};
}

double beam_denominator(double z, double l) {
  const double theta = l * z;
  const double e1 = std::exp(-theta);
  return 1.0 - 2.0 * e1 * std::sin(theta) - e1 * e1;
}

Mat2 beam_matrix(double z, double l, double pole_threshold) {
  const double theta = l * z;
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const double e1 = std::exp(-theta);
  const double e2 = e1 * e1;
  const double den = 1.0 - 2.0 * e1 * s - e2;
  if (!(std::abs(den) >= pole_threshold)) {
    throw Error(Errc::PoleEncountered,
                "beam matrix denominator " + std::to_string(den) + " at z*l = " + std::to_string(theta));
  }
  const double diag = ((c - s) - e2 * (c + s)) / den;
  return {diag, 2.0 * s * (e2 - 1.0) / den, (c - 2.0 * e1 + e2 * c) / den, diag};
}

Mat2 coupling_T(double z) { return {1.0, 0.0, 0.0, -1.0 / z}; }

Mat2 coupling_T_inv(double z) { return {1.0, 0.0, 0.0, -z}; }

TransferEval eval_M_traced(const ChainGeometry& geom, double z, double pole_threshold) {
  TransferEval out;
  const Mat2 t = coupling_T(z);
  const Mat2 t_inv = coupling_T_inv(z);
  for (int j = 1; j <= geom.edge_count(); ++j) {
    const double l = geom.length(j);
    if (ChainGeometry::kind(j) == EdgeKind::String) {
      if (j > 1) out.M = t_inv * out.M;
      out.M = string_matrix(z, l) * out.M;
    } else {
      out.min_denominator = std::min(out.min_denominator, std::abs(beam_denominator(z, l)));
      out.M = beam_matrix(z, l, pole_threshold) * (t * out.M);
    }
  }
  return out;
}

Mat2 eval_M(const ChainGeometry& geom, double z, double pole_threshold) {
  return eval_M_traced(geom, z, pole_threshold).M;
}

double char_fn(const ChainGeometry& geom, double z, double pole_threshold) {
  return eval_M(geom, z, pole_threshold).m12;
}

double asymptotic_char_fn(const ChainGeometry& geom, double z) {
  double prod = 1.0;
  const int edges = geom.edge_count();
  for (int j = 1; j <= edges; ++j) {
    const double l = geom.length(j);
    if (ChainGeometry::kind(j) == EdgeKind::String) {
      prod *= std::sin(l * z * z);
    } else if (j < edges) {
      prod *= std::cos(l * z);
    } else {
      prod *= std::cos(l * z) - std::sin(l * z);
    }
  }
  return prod;
}

double asymptotic_scale(const ChainGeometry& geom, double z) {
  return std::pow(-z, geom.n_pairs() - 1);
}

GapReport asymptotic_gap_check(const ChainGeometry& geom, const std::vector<double>& z_grid) {
  if (z_grid.empty() || !(z_grid.front() > 0.0) ||
      !std::is_sorted(z_grid.begin(), z_grid.end(), std::less_equal<>())) {
    throw Error(Errc::InvalidRange, "asymptotic_gap_check needs a strictly increasing positive grid");
  }
  GapReport rep;
  rep.z = z_grid;
  rep.g.reserve(z_grid.size());
  for (double z : z_grid) {
    rep.g.push_back(char_fn(geom, z) / asymptotic_scale(geom, z) - asymptotic_char_fn(geom, z));
  }

  const double z_end = z_grid.back();
  for (double lo = z_grid.front(); lo < z_end; lo *= 2.0) {
    GapWindow w{lo, std::min(2.0 * lo, z_end), 0.0, 0};
    const bool last = (2.0 * lo >= z_end);
    for (std::size_t i = 0; i < z_grid.size(); ++i) {
      const double z = z_grid[i];
      if (z >= w.lo && (z < 2.0 * lo || (last && z <= z_end))) {
        w.max_abs_g = std::max(w.max_abs_g, std::abs(rep.g[i]));
        ++w.samples;
      }
    }
    rep.windows.push_back(w);
  }
  rep.windows_decreasing = rep.windows.size() >= 2;
  for (std::size_t k = 1; k < rep.windows.size(); ++k) {
    if (!(rep.windows[k].max_abs_g < rep.windows[k - 1].max_abs_g)) rep.windows_decreasing = false;
  }
  return rep;
}

}  // namespace chainwave
