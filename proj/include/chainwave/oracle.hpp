#pragma once

#include <vector>

#include "chainwave/discrete_system.hpp"

namespace chainwave {

/// Square roots of the smallest `count` positive eigenvalues of K x = mu M x,
/// skipping the N-1 kernel eigenvalues; comparable with z^2 of the roots of f.
/// Dense solve. Throws Error(DomainError) unless the variant is Pc and
/// Error(EigSolverFailure) when count exceeds the available eigenvalues.
std::vector<double> oracle_spectrum_discrete(const DiscreteSystem& sys, int count);

struct RichardsonSpectrum {
  std::vector<double> coarse;        // mesh h
  std::vector<double> fine;          // mesh h/2
  std::vector<double> extrapolated;  // (4 fine - coarse) / 3
};

/// Second-order Richardson step on the discrete conservative spectrum.
RichardsonSpectrum oracle_spectrum_richardson(const ChainGeometry& geom, double h, int count);

struct KernelCheck {
  int dimension = 0;              // eigenvalues below kKernelThreshold
  double largest_kernel_mu = 0.0;
  double smallest_positive_mu = 0.0;
  double max_relative_error = 0.0;  // M-norm distance of each zero-mode interpolant to the discrete kernel
};

inline constexpr double kKernelThreshold = 1e-6;

/// Dense kernel of K on the constrained space compared against the exact zero modes.
KernelCheck kernel_check(const DiscreteSystem& sys);

}  // namespace chainwave
