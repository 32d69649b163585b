#pragma once

#include <vector>

#include "chainwave/dynamics.hpp"

namespace chainwave {

struct DecayFit {
  double t_lo = 0.0;
  double t_hi = 0.0;
  int samples = 0;
  double slope = 0.0;      // least squares of log E against log t
  double intercept = 0.0;
  double c_hat = 0.0;      // running maximum of E t^2 / ln^4 t at the window end
  double c_hat_at_last_window_start = 0.0;
  double last_window_increase = 0.0;  // relative growth of c_hat over [t_hi/2, t_hi]
  bool bounded = false;               // last_window_increase < stabilization tolerance
  std::vector<double> t;
  std::vector<double> running_max;
};

inline constexpr double kStabilizationTolerance = 0.05;

/// Fits the window [t_lo, t_hi] of an energy history. Requires t_lo > 1 so that
/// ln t > 0. Throws Error(WindowOutOfRange) when the samples do not cover the
/// window or fewer than 3 fall inside it, Error(NonpositiveEnergy) when E <= 0 there.
DecayFit fit_polynomial_decay(const std::vector<double>& t, const std::vector<double>& e, double t_lo, double t_hi,
                              double tolerance = kStabilizationTolerance);

DecayFit fit_polynomial_decay(const EnergyTrace& trace, double t_lo, double t_hi,
                              double tolerance = kStabilizationTolerance);

}  // namespace chainwave
