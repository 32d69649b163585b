#include "chainwave/decay.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "chainwave/error.hpp"

namespace chainwave {

DecayFit fit_polynomial_decay(const std::vector<double>& t, const std::vector<double>& e, double t_lo, double t_hi,
                              double tolerance) {
  if (t.size() != e.size()) throw Error(Errc::WindowOutOfRange, "time and energy columns differ in length");
  if (!(t_lo > 1.0) || !(t_hi > t_lo)) throw Error(Errc::WindowOutOfRange, "decay window needs 1 < t_lo < t_hi");
  constexpr double slack = 1e-6;
  if (t.empty() || t.front() > t_lo * (1.0 + slack) || t.back() < t_hi * (1.0 - slack)) {
    throw Error(Errc::WindowOutOfRange, "trace does not cover the decay window");
  }

  DecayFit fit;
  fit.t_lo = t_lo;
  fit.t_hi = t_hi;
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  double running = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < t_lo * (1.0 - slack) || t[i] > t_hi * (1.0 + slack)) continue;
    if (!(e[i] > 0.0)) throw Error(Errc::NonpositiveEnergy, "energy " + std::to_string(e[i]) + " at t = " + std::to_string(t[i]));
    const double x = std::log(t[i]), y = std::log(e[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++fit.samples;
    const double l4 = std::pow(x, 4);
    running = std::max(running, e[i] * t[i] * t[i] / l4);
    fit.t.push_back(t[i]);
    fit.running_max.push_back(running);
  }
  if (fit.samples < 3) throw Error(Errc::WindowOutOfRange, "fewer than 3 samples inside the decay window");

  const double n = fit.samples;
  fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  fit.intercept = (sy - fit.slope * sx) / n;
  fit.c_hat = running;

  const double mid = 0.5 * t_hi;
  fit.c_hat_at_last_window_start = fit.running_max.front();
  for (std::size_t i = 0; i < fit.t.size() && fit.t[i] <= mid; ++i) fit.c_hat_at_last_window_start = fit.running_max[i];
  fit.last_window_increase = fit.c_hat / fit.c_hat_at_last_window_start - 1.0;
  fit.bounded = fit.last_window_increase < tolerance;
  return fit;
}

DecayFit fit_polynomial_decay(const EnergyTrace& trace, double t_lo, double t_hi, double tolerance) {
  std::vector<double> t, e;
  t.reserve(trace.samples.size());
  e.reserve(trace.samples.size());
  for (const auto& s : trace.samples) {
    t.push_back(s.t);
    e.push_back(s.energy);
  }
  return fit_polynomial_decay(t, e, t_lo, t_hi, tolerance);
}

}  // namespace chainwave
