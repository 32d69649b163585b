#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <functional>
#include <string>
#include <vector>

#include "chainwave/chain.hpp"
#include "chainwave/eigenmode.hpp"

namespace chainwave {

/// Boundary condition set: P1 damps the junction velocities, P2 additionally
/// damps beam end rotations, Pc is conservative.
enum class Variant { P1, P2, Pc };

std::string variant_name(Variant v);
Variant parse_variant(const std::string& name);

/// Degrees of freedom of one edge. disp[i] is the global index of the
/// displacement at node i (-1 where clamped); slope[i] is the rotation index
/// on beams and empty on strings.
struct EdgeMesh {
  EdgeKind kind = EdgeKind::String;
  double length = 0.0;
  int elements = 0;
  double element_size = 0.0;
  std::vector<int> disp;
  std::vector<int> slope;
};

/// A rank-one damper: D += e_dof e_dof^T.
struct DamperTerm {
  int dof = -1;
  std::string label;
};

/// Semi-discrete system M u'' + D u' + K u = 0. Strings use linear elements,
/// beams cubic Hermite elements; junction displacements are shared, u_1(0)
/// and u_2N(l_2N) are eliminated. Immutable after discretize().
struct DiscreteSystem {
  ChainGeometry geom;
  double h = 0.0;
  Variant variant = Variant::Pc;
  int n_dofs = 0;
  std::vector<EdgeMesh> edges;
  std::vector<DamperTerm> dampers;
  Eigen::SparseMatrix<double> M;
  Eigen::SparseMatrix<double> K;
  Eigen::SparseMatrix<double> D;
  Eigen::MatrixXd zero_modes;  // n_dofs x (N-1) interpolants of the exact kernel basis

  /// Nodal interpolant of a field given by its value and x-derivative per (edge, x).
  /// Shared junction DOFs take the value of the later edge.
  Eigen::VectorXd interpolate(const std::function<double(int, double)>& value,
                              const std::function<double(int, double)>& slope) const;

  /// Displacement of the discrete field on edge j at x (finite element shape functions).
  double evaluate(const Eigen::VectorXd& u, int edge, double x) const;
};

/// Minimum number of elements per edge accepted by discretize().
inline constexpr int kMinElementsPerEdge = 4;

/// Throws Error(MeshTooCoarse) when an edge gets fewer than kMinElementsPerEdge
/// elements of size <= h, Error(DomainError) when h <= 0.
DiscreteSystem discretize(const ChainGeometry& geom, double h, Variant variant);

/// Interpolant of one exact zero mode.
Eigen::VectorXd interpolate_zero_mode(const DiscreteSystem& sys, const ZeroMode& mode);

}  // namespace chainwave
