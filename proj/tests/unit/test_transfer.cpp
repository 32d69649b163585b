#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "chainwave/chain.hpp"
#include "chainwave/error.hpp"
#include "chainwave/transfer.hpp"

using namespace chainwave;

namespace {

struct LdMat {
  long double a11, a12, a21, a22;
};

// Beam transfer from the free sin/cos/sinh/cosh solution with zero moment at
// both ends, evaluated without any rescaling in extended precision.
LdMat beam_oracle(long double z, long double l) {
  const long double s = std::sin(z * l), c = std::cos(z * l);
  const long double sh = std::sinh(z * l), ch = std::cosh(z * l);
  auto image = [&](long double p, long double q) {
    const long double a2 = p / 2, a4 = p / 2;
    const long double a1 = ((p / 2) * (c - ch) - q * sh) / (sh - s);
    const long double a3 = a1 + q;
    const long double val = a1 * s + a2 * c + a3 * sh + a4 * ch;
    const long double third = -a1 * c + a2 * s + a3 * ch + a4 * sh;
    return std::pair{val, third};
  };
  const auto [v1, t1] = image(1, 0);
  const auto [v2, t2] = image(0, 1);
  return {v1, v2, t1, t2};
}

void expect_near(const Mat2& a, const Mat2& b, double tol) {
  EXPECT_NEAR(a.m11, b.m11, tol);
  EXPECT_NEAR(a.m12, b.m12, tol);
  EXPECT_NEAR(a.m21, b.m21, tol);
  EXPECT_NEAR(a.m22, b.m22, tol);
}

}  // namespace

TEST(StringTransfer, RotationByPhase) {
  const double z = 1.3, l = 0.7;
  const Mat2 a = string_matrix(z, l);
  const double th = l * z * z;
  expect_near(a, {std::cos(th), std::sin(th), -std::sin(th), std::cos(th)}, 1e-15);
}

TEST(StringTransfer, QuarterAndFullPhase) {
  const double l = 0.6;
  expect_near(string_matrix(std::sqrt(2.0 * std::numbers::pi / l), l), Mat2::identity(), 1e-14);
  expect_near(string_matrix(std::sqrt(0.5 * std::numbers::pi / l), l), {0.0, 1.0, -1.0, 0.0}, 1e-15);
  expect_near(string_matrix(1.0, 1.0), {std::cos(1.0), std::sin(1.0), -std::sin(1.0), std::cos(1.0)}, 0.0);
}

TEST(StringTransfer, UnitDeterminantProperty) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> zd(0.1, 60.0), ld(0.1, 3.0);
  for (int i = 0; i < 500; ++i) EXPECT_NEAR(string_matrix(zd(rng), ld(rng)).det(), 1.0, 1e-12);
}

TEST(BeamTransfer, MatchesExtendedPrecisionSolution) {
  for (double z : {0.3, 0.9, 1.0, 1.7, 3.2, 6.0}) {
    for (double l : {0.5, 0.8, 1.0, 1.3}) {
      const LdMat o = beam_oracle(z, l);
      const Mat2 a = beam_matrix(z, l);
      const double scale = std::max({1.0, std::abs(static_cast<double>(o.a11)), std::abs(static_cast<double>(o.a21))});
      expect_near(a, {static_cast<double>(o.a11), static_cast<double>(o.a12), static_cast<double>(o.a21),
                      static_cast<double>(o.a22)},
                  1e-12 * scale);
    }
  }
}

TEST(BeamTransfer, FullPeriodGivesHalfAngleTanh) {
  const double l = 1.0, z = 2.0 * std::numbers::pi;
  const Mat2 a = beam_matrix(z, l);
  expect_near(a, {1.0, 0.0, std::tanh(l * z / 2.0), 1.0}, 1e-14);
}

TEST(BeamTransfer, LargeArgumentLimit) {
  const double l = 1.0;
  for (double z : {80.0, 200.0, 1000.0}) {
    const double c = std::cos(l * z), s = std::sin(l * z);
    expect_near(beam_matrix(z, l), {c - s, -2.0 * s, c, c - s}, 1e-12);
  }
}

TEST(BeamTransfer, DenominatorPositiveAndPoleGuard) {
  for (double zl = 1e-3; zl < 50.0; zl *= 1.07) EXPECT_GT(beam_denominator(zl, 1.0), 0.0);
  try {
    beam_matrix(0.5, 1.0, 2.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::PoleEncountered);
  }
}

TEST(Coupling, Substitution) {
  expect_near(coupling_T(1.0), {1.0, 0.0, 0.0, -1.0}, 0.0);
  expect_near(coupling_T_inv(2.0), {1.0, 0.0, 0.0, -2.0}, 0.0);
}

TEST(ChainProduct, SingleCellAtFullPeriods) {
  // l1 z^2 = 2 pi and l2 z = 2 pi: the string is the identity.
  const double z = 2.0, pi = std::numbers::pi;
  const auto g = validate_chain({pi / 2.0, pi});
  expect_near(eval_M(g, z), {1.0, 0.0, std::tanh(pi), -0.5}, 1e-14);
}

TEST(Asymptotics, VanishesOnFactorZeros) {
  const auto g = validate_chain({1.0, 1.0});
  EXPECT_NEAR(asymptotic_char_fn(g, std::sqrt(std::numbers::pi)), 0.0, 1e-15);
  EXPECT_NEAR(asymptotic_char_fn(g, std::numbers::pi / 4.0), 0.0, 1e-15);
  EXPECT_NE(char_fn(g, 1.234), 0.0);
}

TEST(Coupling, InverseAndScaling) {
  for (double z : {0.5, 2.0, 17.0}) {
    const Mat2 p = coupling_T(z) * coupling_T_inv(z);
    expect_near(p, Mat2::identity(), 1e-15);
    EXPECT_NEAR(coupling_T(z).det(), -1.0 / z, 1e-15);
  }
}

TEST(ChainProduct, MatchesEdgeByEdgePropagation) {
  const auto g = validate_chain({1.0, 0.8, 1.3, 0.9, 0.6, 1.1});
  for (double z : {0.7, 2.3, 5.9, 11.1}) {
    // Propagate both basis vectors edge by edge.
    Vec2 e1{1.0, 0.0}, e2{0.0, 1.0};
    for (int j = 1; j <= g.edge_count(); ++j) {
      const bool string = ChainGeometry::kind(j) == EdgeKind::String;
      const Mat2 a = string ? string_matrix(z, g.length(j)) : beam_matrix(z, g.length(j));
      e1 = a * e1;
      e2 = a * e2;
      if (j < g.edge_count()) {
        const Mat2 t = string ? coupling_T(z) : coupling_T_inv(z);
        e1 = t * e1;
        e2 = t * e2;
      }
    }
    const Mat2 m = eval_M(g, z);
    const double tol = 1e-13 * std::max(1.0, m.max_abs());
    EXPECT_NEAR(m.m11, e1[0], tol);
    EXPECT_NEAR(m.m21, e1[1], tol);
    EXPECT_NEAR(m.m12, e2[0], tol);
    EXPECT_NEAR(m.m22, e2[1], tol);
    EXPECT_DOUBLE_EQ(char_fn(g, z), m.m12);
  }
}

TEST(Asymptotics, LeadingTermSingleCell) {
  const auto g = validate_chain({1.0, 1.0});
  const double z = 100.0;
  const double f_inf = std::sin(z * z) * (std::cos(z) - std::sin(z));
  EXPECT_NEAR(asymptotic_char_fn(g, z), f_inf, 1e-14);
  EXPECT_DOUBLE_EQ(asymptotic_scale(g, z), 1.0);
  const double rem = char_fn(g, z) / asymptotic_scale(g, z) - f_inf;
  EXPECT_LT(std::abs(rem), 0.05);
}

TEST(Asymptotics, ScaleAlternatesWithPairs) {
  const auto g = validate_chain({1.0, 0.8, 1.3, 0.9, 1.0, 1.0});
  EXPECT_DOUBLE_EQ(asymptotic_scale(g, 3.0), 9.0);
  const auto g2 = validate_chain({1.0, 0.8, 1.3, 0.9});
  EXPECT_DOUBLE_EQ(asymptotic_scale(g2, 3.0), -3.0);
}

TEST(Asymptotics, RemainderDecaysLikeInverseZ) {
  // The remainder is O(1/z): z |g| stays bounded while |g| shrinks, so
  // agreement to three digits needs z in the thousands, not hundreds.
  for (const auto& lengths : {std::vector<double>{1.0, 1.0}, std::vector<double>{1.0, 0.8, 1.3, 0.9}}) {
    const auto g = validate_chain(lengths);
    std::vector<double> grid;
    for (int i = 0; i <= 40000; ++i) grid.push_back(10.0 + 310.0 * i / 40000.0);
    const GapReport rep = asymptotic_gap_check(g, grid);
    ASSERT_EQ(rep.windows.size(), 5u);
    EXPECT_TRUE(rep.windows_decreasing);
    for (std::size_t w = 1; w < rep.windows.size(); ++w) {
      const double ratio = rep.windows[w].max_abs_g / rep.windows[w - 1].max_abs_g;
      EXPECT_LT(ratio, 0.8);
      EXPECT_GT(ratio, 0.25);
    }
  }
}
