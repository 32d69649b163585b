#include "chainwave/discrete_system.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "chainwave/error.hpp"
#include "elements.hpp"

namespace chainwave {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

void scatter(Triplets& out, const std::vector<int>& dofs, const Eigen::MatrixXd& local) {
  for (std::size_t a = 0; a < dofs.size(); ++a) {
    if (dofs[a] < 0) continue;
    for (std::size_t b = 0; b < dofs.size(); ++b) {
      if (dofs[b] < 0) continue;
      out.emplace_back(dofs[a], dofs[b], local(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)));
    }
  }
}

}  // namespace

std::string variant_name(Variant v) {
  switch (v) {
    case Variant::P1: return "P1";
    case Variant::P2: return "P2";
    case Variant::Pc: return "Pc";
  }
  return "";
}

Variant parse_variant(const std::string& name) {
  if (name == "P1") return Variant::P1;
  if (name == "P2") return Variant::P2;
  if (name == "Pc") return Variant::Pc;
  throw Error(Errc::DomainError, "unknown variant '" + name + "' (expected P1, P2 or Pc)");
}

DiscreteSystem discretize(const ChainGeometry& geom, double h, Variant variant) {
  if (!(h > 0.0)) throw Error(Errc::DomainError, "mesh size h must be positive");
  DiscreteSystem sys;
  sys.geom = geom;
  sys.h = h;
  sys.variant = variant;

  const int n_edges = geom.edge_count();
  int next = 0;
  int prev_end = -1;
  for (int j = 1; j <= n_edges; ++j) {
    EdgeMesh e;
    e.kind = ChainGeometry::kind(j);
    e.length = geom.length(j);
    e.elements = static_cast<int>(std::ceil(e.length / h - 1e-9));
    if (e.elements < kMinElementsPerEdge) {
      throw Error(Errc::MeshTooCoarse, "edge " + std::to_string(j) + " gets " + std::to_string(e.elements) +
                                           " elements, need at least " + std::to_string(kMinElementsPerEdge));
    }
    e.element_size = e.length / e.elements;
    const int nodes = e.elements + 1;
    for (int i = 0; i < nodes; ++i) {
      if (i == 0) {
        e.disp.push_back(prev_end);
      } else if (j == n_edges && i == nodes - 1) {
        e.disp.push_back(-1);
      } else {
        e.disp.push_back(next++);
      }
      if (e.kind == EdgeKind::Beam) e.slope.push_back(next++);
    }
    prev_end = e.disp.back();
    sys.edges.push_back(std::move(e));
  }
  sys.n_dofs = next;

  Triplets tm, tk;
  for (const auto& e : sys.edges) {
    const double he = e.element_size;
    if (e.kind == EdgeKind::String) {
      const Eigen::MatrixXd me = elements::string_mass(he), ke = elements::string_stiffness(he);
      for (int el = 0; el < e.elements; ++el) {
        const std::vector<int> dofs{e.disp[static_cast<std::size_t>(el)], e.disp[static_cast<std::size_t>(el + 1)]};
        scatter(tm, dofs, me);
        scatter(tk, dofs, ke);
      }
    } else {
      const Eigen::MatrixXd me = elements::beam_mass(he), ke = elements::beam_stiffness(he);
      for (int el = 0; el < e.elements; ++el) {
        const auto a = static_cast<std::size_t>(el), b = static_cast<std::size_t>(el + 1);
        const std::vector<int> dofs{e.disp[a], e.slope[a], e.disp[b], e.slope[b]};
        scatter(tm, dofs, me);
        scatter(tk, dofs, ke);
      }
    }
  }
  sys.M.resize(sys.n_dofs, sys.n_dofs);
  sys.K.resize(sys.n_dofs, sys.n_dofs);
  sys.M.setFromTriplets(tm.begin(), tm.end());
  sys.K.setFromTriplets(tk.begin(), tk.end());

  if (variant != Variant::Pc) {
    for (int j = 1; j < n_edges; ++j) {
      sys.dampers.push_back({sys.edges[static_cast<std::size_t>(j - 1)].disp.back(), "v(l" + std::to_string(j) + ")"});
    }
  }
  if (variant == Variant::P2) {
    for (int j = 2; j <= n_edges; j += 2) {
      const auto& e = sys.edges[static_cast<std::size_t>(j - 1)];
      sys.dampers.push_back({e.slope.front(), "vx" + std::to_string(j) + "(0)"});
      if (j < n_edges) sys.dampers.push_back({e.slope.back(), "vx" + std::to_string(j) + "(l)"});
    }
  }
  Triplets td;
  for (const auto& d : sys.dampers) td.emplace_back(d.dof, d.dof, 1.0);
  sys.D.resize(sys.n_dofs, sys.n_dofs);
  sys.D.setFromTriplets(td.begin(), td.end());

  const ZeroModeBasis basis = zero_eigenspace(geom);
  sys.zero_modes.resize(sys.n_dofs, basis.dimension());
  for (int i = 0; i < basis.dimension(); ++i) {
    sys.zero_modes.col(i) = interpolate_zero_mode(sys, basis.modes[static_cast<std::size_t>(i)]);
  }
  return sys;
}

Eigen::VectorXd DiscreteSystem::interpolate(const std::function<double(int, double)>& value,
                                            const std::function<double(int, double)>& slope) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n_dofs);
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const auto& e = edges[k];
    const int j = static_cast<int>(k) + 1;
    for (std::size_t i = 0; i < e.disp.size(); ++i) {
      const double x = (i + 1 == e.disp.size()) ? e.length : static_cast<double>(i) * e.element_size;
      if (e.disp[i] >= 0) out(e.disp[i]) = value(j, x);
      if (e.kind == EdgeKind::Beam) out(e.slope[i]) = slope(j, x);
    }
  }
  return out;
}

double DiscreteSystem::evaluate(const Eigen::VectorXd& u, int edge, double x) const {
  const auto& e = edges.at(static_cast<std::size_t>(edge - 1));
  const int el = std::clamp(static_cast<int>(x / e.element_size), 0, e.elements - 1);
  const double H = e.element_size;
  const double s = std::clamp((x - el * H) / H, 0.0, 1.0);
  auto dof = [&](int idx) { return idx >= 0 ? u(idx) : 0.0; };
  const auto a = static_cast<std::size_t>(el), b = static_cast<std::size_t>(el + 1);
  if (e.kind == EdgeKind::String) return (1.0 - s) * dof(e.disp[a]) + s * dof(e.disp[b]);
  const double h00 = 2 * s * s * s - 3 * s * s + 1, h10 = s * s * s - 2 * s * s + s;
  const double h01 = -2 * s * s * s + 3 * s * s, h11 = s * s * s - s * s;
  return h00 * dof(e.disp[a]) + h10 * H * u(e.slope[a]) + h01 * dof(e.disp[b]) + h11 * H * u(e.slope[b]);
}

Eigen::VectorXd interpolate_zero_mode(const DiscreteSystem& sys, const ZeroMode& mode) {
  return sys.interpolate([&](int j, double x) { return mode.value(sys.geom, j, x); },
                         [&](int j, double x) { return mode.slope(sys.geom, j, x); });
}

}  // namespace chainwave
