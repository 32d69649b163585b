#include <gtest/gtest.h>

#include <cmath>

#include "chainwave/decay.hpp"
#include "chainwave/error.hpp"

using namespace chainwave;

namespace {

std::vector<double> geometric(double a, double b, int n) {
  std::vector<double> t;
  for (int i = 0; i < n; ++i) t.push_back(a * std::pow(b / a, static_cast<double>(i) / (n - 1)));
  return t;
}

// Ordinary least squares slope of y against x.
double ols_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= x.size();
  my /= y.size();
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

Errc code_of(const std::vector<double>& t, const std::vector<double>& e, double lo, double hi) {
  try {
    fit_polynomial_decay(t, e, lo, hi);
  } catch (const Error& err) {
    return err.code();
  }
  return Errc::IoError;
}

}  // namespace

TEST(DecayFit, LogCorrectedInverseSquareIsBounded) {
  const auto t = geometric(1.5, 2000.0, 300);
  std::vector<double> e, lx, ly;
  for (double s : t) e.push_back(3.0 * std::pow(std::log(s), 4) / (s * s));
  const DecayFit fit = fit_polynomial_decay(t, e, 10.0, 1000.0);
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] >= 10.0 && t[i] <= 1000.0) {
      lx.push_back(std::log(t[i]));
      ly.push_back(std::log(e[i]));
    }
  }
  EXPECT_EQ(fit.samples, static_cast<int>(lx.size()));
  EXPECT_NEAR(fit.slope, ols_slope(lx, ly), 1e-10);
  EXPECT_NEAR(fit.c_hat, 3.0, 1e-12);
  EXPECT_NEAR(fit.last_window_increase, 0.0, 1e-12);
  EXPECT_TRUE(fit.bounded);
  EXPECT_GT(fit.slope, -2.0);
  // The log factor flattens the slope less over longer windows.
  const auto t_long = geometric(1.5, 1e8, 600);
  std::vector<double> e_long;
  for (double s : t_long) e_long.push_back(3.0 * std::pow(std::log(s), 4) / (s * s));
  const DecayFit wide = fit_polynomial_decay(t_long, e_long, 1e4, 1e8);
  EXPECT_LT(wide.slope, fit.slope);
  EXPECT_GT(wide.slope, -2.0);
}

TEST(DecayFit, PureInverseSquareSlope) {
  const auto t = geometric(2.0, 5000.0, 200);
  std::vector<double> e;
  for (double s : t) e.push_back(7.0 / (s * s));
  const DecayFit fit = fit_polynomial_decay(t, e, 10.0, 4000.0);
  EXPECT_NEAR(fit.slope, -2.0, 1e-10);
  EXPECT_NEAR(fit.intercept, std::log(7.0), 1e-9);
  EXPECT_TRUE(fit.bounded);
}

TEST(DecayFit, ConstantEnergyIsUnbounded) {
  const auto t = geometric(2.0, 1000.0, 100);
  const std::vector<double> e(t.size(), 0.8);
  const DecayFit fit = fit_polynomial_decay(t, e, 10.0, 1000.0);
  EXPECT_NEAR(fit.slope, 0.0, 1e-12);
  EXPECT_FALSE(fit.bounded);
  EXPECT_GT(fit.last_window_increase, 1.0);
  for (std::size_t i = 1; i < fit.running_max.size(); ++i) EXPECT_GE(fit.running_max[i], fit.running_max[i - 1]);
}

TEST(DecayFit, RejectsInvalidWindows) {
  const auto t = geometric(2.0, 1000.0, 50);
  std::vector<double> e(t.size(), 1.0);
  EXPECT_EQ(code_of(t, e, 0.5, 100.0), Errc::WindowOutOfRange);
  EXPECT_EQ(code_of(t, e, 10.0, 5000.0), Errc::WindowOutOfRange);
  EXPECT_EQ(code_of(t, e, 10.0, 10.1), Errc::WindowOutOfRange);
  e[30] = 0.0;
  EXPECT_EQ(code_of(t, e, 10.0, 1000.0), Errc::NonpositiveEnergy);
}
