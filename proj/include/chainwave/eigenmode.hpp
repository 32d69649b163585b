#pragma once

#include <array>
#include <vector>

#include "chainwave/chain.hpp"

namespace chainwave {

/// Closed-form solution on one edge at frequency parameter z.
///   string: phi = c[0] sin(z^2 x) + c[1] cos(z^2 x)
///   beam, hyperbolic basis:  c[0] sin(zx) + c[1] cos(zx) + c[2] sinh(zx) + c[3] cosh(zx)
///   beam, exponential basis: c[0] sin(zx) + c[1] cos(zx) + c[2] e^{z(x-l)} + c[3] e^{-zx}
struct EdgeModeCoeffs {
  EdgeKind kind = EdgeKind::String;
  bool exponential_basis = false;
  double z = 0.0;
  double length = 0.0;
  std::array<double, 4> c{};

  /// d-th derivative (0 <= d <= 3) at x in [0, length].
  double eval(int d, double x) const;
};

/// Maximum violation of each condition group, measured in node-vector units
/// (k-th derivatives divided by z^k for beams, z^{2k} for strings).
struct ModeResiduals {
  double clamped_ends = 0.0;   // phi_1(0), phi_2N(l_2N)
  double beam_moments = 0.0;   // phi'' at both ends of every beam
  double continuity = 0.0;     // phi_j(l_j) - phi_{j+1}(0)
  double force_balance = 0.0;  // beam shear against the neighbouring string slope
  double propagation = 0.0;    // edge end data against the propagated node vectors

  double max() const;
};

struct Eigenmode {
  double z = 0.0;
  std::vector<EdgeModeCoeffs> per_edge;  // 2N entries, edge j at index j-1
  std::vector<double> node_values;       // phi_j(l_j), j = 1..2N-1
  std::vector<double> beam_slope_start;  // phi'_{2j}(0), j = 1..N
  std::vector<double> beam_slope_end;    // phi'_{2j}(l_{2j}), j = 1..N
  double seminorm_scale = 1.0;           // factor applied to the unit-slope seed
  double worst_edge_condition = 0.0;
  ModeResiduals residuals;
};

/// Default bound on |f(z)| accepted as a root by build_eigenmode.
inline constexpr double kRootResidualTolerance = 1e-8;

/// Edge solves whose condition estimate exceeds this throw IllConditionedEdgeSolve.
inline constexpr double kEdgeConditionLimit = 1e12;

/// Beams with z*l above this use the exponential basis.
inline constexpr double kExponentialBasisThreshold = 1.0;

/// Reconstructs the eigenfunction at root z from the seed (phi_1(0), phi_1'(0)) = (0, z^2),
/// then rescales it to unit V-seminorm. Throws Error(NotARoot) when |f(z)| > root_tol
/// and Error(IllConditionedEdgeSolve) when an edge system is numerically singular.
Eigenmode build_eigenmode(const ChainGeometry& geom, double z, double root_tol = kRootResidualTolerance);

/// Sum of |phi_j(l_j)|^2 over the 2N-1 interior nodes.
double node_trace_sum(const Eigenmode& mode);

/// node_trace_sum plus |phi'_{2j}(0)|^2 for j = 1..N and |phi'_{2j}(l_{2j})|^2 for j = 1..N-1.
double node_trace_sum_p2(const Eigenmode& mode);

/// V-seminorm squared: strings integrate phi'^2, beams integrate phi''^2.
double v_seminorm_sq(const std::vector<EdgeModeCoeffs>& edges);

/// A kernel element of the conservative generator: constant on every string,
/// affine on every beam. levels[i] is the constant on string 2i+1, with
/// levels[0] = levels[N] = 0 standing for the clamped ends.
struct ZeroMode {
  std::vector<double> levels;

  double value(const ChainGeometry& geom, int edge, double x) const;
  double slope(const ChainGeometry& geom, int edge, double x) const;
};

struct ZeroModeBasis {
  int n_pairs = 0;
  std::vector<ZeroMode> modes;  // N-1 modes; mode i has levels[i+1] = 1, others 0

  int dimension() const { return static_cast<int>(modes.size()); }
};

ZeroModeBasis zero_eigenspace(const ChainGeometry& geom);

/// Maximum violation of the zero-frequency eigenproblem by a zero mode,
/// evaluated from its closed form.
double zero_mode_residual(const ChainGeometry& geom, const ZeroMode& mode);

/// Numerical nullity (0 or 1) of the 2x2 map V_1(0) -> (phi_1(0), phi_2N(l_2N)).
/// A singular value counts as zero when below 3 * z_tol * |d det / dz| / sigma_max,
/// i.e. when z is within a few z_tol of a simple root.
int multiplicity_check(const ChainGeometry& geom, double z, double z_tol = 1e-12);

}  // namespace chainwave
