#pragma once

#include <array>
#include <vector>

#include "chainwave/chain.hpp"

namespace chainwave {

/// Real 2x2 matrix acting on node vectors (value, scaled derivative).
struct Mat2 {
  double m11 = 1.0, m12 = 0.0, m21 = 0.0, m22 = 1.0;

  static Mat2 identity() { return {}; }
  double det() const { return m11 * m22 - m12 * m21; }
  double max_abs() const;
};

Mat2 operator*(const Mat2& a, const Mat2& b);

using Vec2 = std::array<double, 2>;
Vec2 operator*(const Mat2& a, const Vec2& v);

/// Default magnitude below which the rescaled beam denominator counts as a pole.
inline constexpr double kDefaultPoleThreshold = 1e-8;

/// Transfer matrix of a string edge: [[c, s], [-s, c]] with c = cos(l z^2).
Mat2 string_matrix(double z, double l);

/// Transfer matrix of a beam edge with zero moments at both ends, mapping
/// (phi(0), phi'''(0)/z^3) to the same data at x = l. Evaluated with every
/// exponential divided out (e^{-lz} only), so entries stay bounded as z grows.
/// Throws Error(PoleEncountered) when the rescaled denominator
/// 1 - 2 e^{-lz} sin(lz) - e^{-2lz} falls below pole_threshold.
Mat2 beam_matrix(double z, double l, double pole_threshold = kDefaultPoleThreshold);

/// The rescaled beam denominator; always positive for z l > 0.
double beam_denominator(double z, double l);

Mat2 coupling_T(double z);
Mat2 coupling_T_inv(double z);

/// Ordered chain product A_{2N} T A_{2N-1} ... T^{-1} A_2 T A_1.
Mat2 eval_M(const ChainGeometry& geom, double z, double pole_threshold = kDefaultPoleThreshold);

/// eval_M plus the smallest beam denominator met along the chain.
struct TransferEval {
  Mat2 M;
  double min_denominator = 1.0;
};
TransferEval eval_M_traced(const ChainGeometry& geom, double z,
                           double pole_threshold = kDefaultPoleThreshold);

/// Characteristic function f(z) = m12(z).
double char_fn(const ChainGeometry& geom, double z, double pole_threshold = kDefaultPoleThreshold);

/// s_1 c_2 s_3 c_4 ... s_{2N-1} (c_{2N} - s_{2N}).
double asymptotic_char_fn(const ChainGeometry& geom, double z);

/// Leading-order scale of f: f(z) = (-z)^{N-1} (f_inf(z) + g(z)).
double asymptotic_scale(const ChainGeometry& geom, double z);

struct GapWindow {
  double lo = 0.0;
  double hi = 0.0;
  double max_abs_g = 0.0;
  int samples = 0;
};

struct GapReport {
  std::vector<double> z;
  std::vector<double> g;
  std::vector<GapWindow> windows;  // dyadic windows [a, 2a), a = first grid point
  bool windows_decreasing = false;
};

/// Samples the remainder g(z) = f(z)/(-z)^{N-1} - f_inf(z) and summarizes it
/// over successive dyadic windows. Grid must be strictly increasing and > 0.
GapReport asymptotic_gap_check(const ChainGeometry& geom, const std::vector<double>& z_grid);

}  // namespace chainwave
