#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCholesky>
#include <string>
#include <vector>

#include "chainwave/discrete_system.hpp"

namespace chainwave {

struct State {
  Eigen::VectorXd u;
  Eigen::VectorXd v;
  double t = 0.0;
};

State zero_state(const DiscreteSystem& sys);

/// 1/2 u^T K u summed element by element as nonnegative squares (string
/// strains, beam end curvatures), free of the cancellation in K u.
double stiffness_energy(const DiscreteSystem& sys, const Eigen::VectorXd& u);
/// K u assembled from the same element differences as stiffness_energy.
Eigen::VectorXd apply_stiffness(const DiscreteSystem& sys, const Eigen::VectorXd& u);
/// 1/2 (v^T M v + u^T K u), the stiffness part from stiffness_energy.
double energy(const DiscreteSystem& sys, const State& s);

/// energy plus 1/2 u^T M u; a norm on the full state space, unlike energy,
/// which vanishes on the zero-frequency modes.
double augmented_energy(const DiscreteSystem& sys, const State& s);

inline constexpr double kRoundingFloorFactor = 64.0;
/// Energies below this bound are indistinguishable from zero:
/// kRoundingFloorFactor * eps * (|u|^T |K| |u| + |v|^T |M| |v|).
double energy_rounding_floor(const DiscreteSystem& sys, const State& s);

struct DissipationBreakdown {
  std::vector<std::string> labels;
  std::vector<double> terms;  // squared damped velocity traces
  double total = 0.0;         // v^T D v
};

/// Instantaneous dissipation -dE/dt split by damper.
DissipationBreakdown dissipation_rate(const DiscreteSystem& sys, const State& s);

/// Implicit midpoint for M v' = -K u - D v, u' = v:
///   (M + dt^2/4 K + dt/2 D) v1 = (M - dt^2/4 K - dt/2 D) v0 - dt K u0,  u1 = u0 + dt/2 (v0 + v1).
/// Satisfies E1 - E0 = -dt v_mid^T D v_mid. The system matrix is factored once.
class Integrator {
 public:
  Integrator(const DiscreteSystem& sys, double dt);

  double dt() const noexcept { return dt_; }

  /// Advances one step. When dissipated is non-null it receives dt v_mid^T D v_mid.
  State step(const State& s, double* dissipated = nullptr) const;

 private:
  const DiscreteSystem* sys_;
  double dt_;
  Eigen::SparseMatrix<double> rhs_op_;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver_;
};

/// Single step without reusing a factorization.
State step(const DiscreteSystem& sys, const State& s, double dt);

/// Removes the component along the zero-frequency eigenspace with the
/// projection that commutes with the flow. Damped variants conserve
/// Z^T (M v + D u), so u loses Z c with (Z^T D Z) c = Z^T (M v + D u).
/// The conservative variant has a Jordan block at zero and both u and v are
/// projected M-orthogonally onto the complement of span(Z).
State project_out_zero_modes(const DiscreteSystem& sys, const State& s);

/// Kernel coordinates removed by project_out_zero_modes (zero after projection).
Eigen::VectorXd zero_mode_components(const DiscreteSystem& sys, const State& s);

struct EnergySample {
  double t = 0.0;
  double energy = 0.0;
  double dissipation_total = 0.0;
  std::vector<double> dissipation_terms;
  double cumulative_dissipated = 0.0;
  double balance_residual = 0.0;  // E(t) - E(0) + cumulative, relative to the reference energy
};

struct EnergyTrace {
  std::vector<std::string> term_labels;
  std::vector<EnergySample> samples;
  double reference_energy = 0.0;     // E(0), or the augmented energy when E(0) is at rounding level
  double max_step_residual = 0.0;    // max |E1 - E0 + dt v_mid^T D v_mid| / reference
  double max_step_increase = 0.0;    // max (E1 - E0) / reference over all steps
  double max_energy_drift = 0.0;     // max |E(t) - E(0)| / reference over all steps
  double max_augmented_drift = 0.0;  // same for the augmented energy
  long steps = 0;
  State final_state;
};

struct SimulationOptions {
  double t_end = 1.0;
  double dt = 0.0;  // 0 selects h/2
  int sample_every = 1;
  bool geometric_sampling = false;
  double geometric_start = 1.0;
  int samples_per_decade = 20;
  bool project_zero_modes = true;
};

/// Projects out the zero modes (unless disabled), then integrates to t_end,
/// recording samples and per-step balance statistics.
EnergyTrace simulate(const DiscreteSystem& sys, const State& initial, const SimulationOptions& opts);

/// sin^4(pi x / l) displacement on the given edge, zero elsewhere, at rest.
/// All traces up to the third derivative vanish at the edge ends.
State bump_state(const DiscreteSystem& sys, int edge = 1);

/// Squared graph norm |x|^2 + |A x|^2 in the energy seminorm, A the first-order generator.
double graph_norm_sq(const DiscreteSystem& sys, const State& s);

}  // namespace chainwave
