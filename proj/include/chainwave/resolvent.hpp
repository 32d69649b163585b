#pragma once

#include <cstdint>
#include <vector>

#include "chainwave/discrete_system.hpp"

namespace chainwave {

struct ResolventSample {
  double beta = 0.0;
  double norm = 0.0;            // |(i beta - A_h)^{-1}| in the energy norm
  double norm_over_beta = 0.0;
  int iterations = 0;
  bool converged = false;
};

struct ResolventOptions {
  int max_iterations = 400;
  double rel_tol = 1e-9;
  std::uint64_t seed = 20240611;
};

/// Largest resolved frequency of a single element of this edge, sqrt of the
/// top eigenvalue of the element stiffness/mass pencil.
double element_frequency_limit(const EdgeMesh& edge);

/// fraction * min over edges of element_frequency_limit: beyond it the
/// coarsest-resolved edge kind no longer represents its continuum modes.
double trust_horizon(const DiscreteSystem& sys, double fraction = 0.25);

/// Operator norm of (i beta - A_h)^{-1} on the complement of the zero modes,
/// A_h the first-order generator of the damped system, in the energy norm
/// u^* K u + v^* M v. Power iteration on R^# R with one complex LU per beta.
ResolventSample resolvent_norm(const DiscreteSystem& sys, double beta, const ResolventOptions& opts = {});

/// resolvent_norm at each beta, in parallel. Throws Error(DomainError) on beta <= 0.
std::vector<ResolventSample> resolvent_norm_sweep(const DiscreteSystem& sys, const std::vector<double>& betas,
                                                  const ResolventOptions& opts = {});

struct ResolventEnvelope {
  std::vector<ResolventSample> grid;
  std::vector<ResolventSample> peaks;  // local maxima of norm/beta, refined by golden section
  double grid_max_over_median = 0.0;
  double peak_max_over_median = 0.0;   // max / median over the refined peaks only
  double sup_over_grid_median = 0.0;   // max over grid and peaks / median over the grid
  double last_window_lo = 0.0;         // peaks with beta >= this form the last dyadic window
  double last_window_max = 0.0;
  double previous_window_max = 0.0;
  bool last_window_monotone_growth = false;  // peaks strictly increasing across the last window
};

/// Uniform grid of grid_points betas on [beta_lo, beta_hi], then each interior
/// local maximum of norm/beta refined between its grid neighbours.
ResolventEnvelope resolvent_envelope(const DiscreteSystem& sys, double beta_lo, double beta_hi, int grid_points,
                                     const ResolventOptions& opts = {});

}  // namespace chainwave
