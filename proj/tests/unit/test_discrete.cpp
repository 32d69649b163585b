#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>

#include "chainwave/discrete_system.hpp"
#include "chainwave/eigenmode.hpp"
#include "chainwave/error.hpp"

using namespace chainwave;

namespace {

int count_dampers(const DiscreteSystem& s) {
  int n = 0;
  for (int k = 0; k < s.D.outerSize(); ++k) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(s.D, k); it; ++it) n += it.value() != 0.0;
  }
  return n;
}

}  // namespace

TEST(Discretize, DamperPlacementPerVariant) {
  const auto g1 = validate_chain({1.0, 1.0});
  EXPECT_EQ(count_dampers(discretize(g1, 0.1, Variant::Pc)), 0);
  EXPECT_EQ(count_dampers(discretize(g1, 0.1, Variant::P1)), 1);
  EXPECT_EQ(count_dampers(discretize(g1, 0.1, Variant::P2)), 2);
  const auto g2 = validate_chain({1.0, 0.8, 1.3, 0.9});
  EXPECT_EQ(count_dampers(discretize(g2, 0.1, Variant::P1)), 3);
  // junctions 3, beam starts 2, interior beam end 1
  EXPECT_EQ(count_dampers(discretize(g2, 0.1, Variant::P2)), 6);
  EXPECT_EQ(discretize(g2, 0.1, Variant::P2).dampers.size(), 6u);
}

TEST(Discretize, MatricesSymmetricAndMassDefinite) {
  const auto g = validate_chain({1.0, 0.8, 1.3, 0.9});
  const auto s = discretize(g, 0.05, Variant::P2);
  const Eigen::MatrixXd m(s.M), k(s.K), d(s.D);
  EXPECT_LT((m - m.transpose()).norm(), 1e-14 * m.norm());
  EXPECT_LT((k - k.transpose()).norm(), 1e-14 * k.norm());
  EXPECT_EQ(Eigen::LLT<Eigen::MatrixXd>(m).info(), Eigen::Success);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ek(k);
  EXPECT_GT(ek.eigenvalues().minCoeff(), -1e-9 * ek.eigenvalues().maxCoeff());
  EXPECT_EQ(d, d.transpose());
}

TEST(Discretize, StiffnessNullityIsPairsMinusOne) {
  for (int n = 1; n <= 3; ++n) {
    std::vector<double> lengths;
    for (int j = 0; j < 2 * n; ++j) lengths.push_back(0.6 + 0.15 * j);
    const auto s = discretize(validate_chain(lengths), 0.1, Variant::Pc);
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(Eigen::MatrixXd(s.K), Eigen::MatrixXd(s.M),
                                                                 Eigen::EigenvaluesOnly);
    int nullity = 0;
    for (int i = 0; i < es.eigenvalues().size(); ++i) nullity += es.eigenvalues()(i) < 1e-8;
    EXPECT_EQ(nullity, n - 1);
    EXPECT_EQ(s.zero_modes.cols(), n - 1);
  }
}

TEST(Discretize, ZeroModeInterpolantIsExact) {
  const auto g = validate_chain({1.0, 0.8, 1.3, 0.9});
  const auto s = discretize(g, 0.05, Variant::P1);
  const auto mode = zero_eigenspace(g).modes.at(0);
  const Eigen::VectorXd u = interpolate_zero_mode(s, mode);
  EXPECT_LT((s.K * u).norm(), 1e-10 * Eigen::MatrixXd(s.K).norm());
  // Closed-form L2 mass: 0 on string 1, ramps on the beams, 1 on string 3.
  const double mass = 0.8 / 3.0 + 1.3 + 0.9 / 3.0;
  EXPECT_NEAR(u.dot(s.M * u), mass, 1e-12);
  for (int edge = 1; edge <= 4; ++edge) {
    for (double t : {0.13, 0.5, 0.77}) {
      const double x = t * g.length(edge);
      EXPECT_NEAR(s.evaluate(u, edge, x), mode.value(g, edge, x), 1e-12);
    }
  }
}

TEST(Discretize, CubicOnBeamReproduced) {
  const auto g = validate_chain({1.0, 1.0});
  const auto s = discretize(g, 0.1, Variant::Pc);
  auto value = [](int edge, double x) { return edge == 2 ? x * x * (1.0 - x) : 0.0; };
  auto slope = [](int edge, double x) { return edge == 2 ? 2.0 * x - 3.0 * x * x : 0.0; };
  const Eigen::VectorXd u = s.interpolate(value, slope);
  for (double x : {0.05, 0.31, 0.66, 0.95}) EXPECT_NEAR(s.evaluate(u, 2, x), value(2, x), 1e-14);
  // Bending energy of x^2 (1 - x) on [0, 1]: int (2 - 6x)^2 = 4.
  EXPECT_NEAR(u.dot(s.K * u), 4.0, 1e-11);
}

TEST(Discretize, RejectsCoarseOrInvalidMesh) {
  const auto g = validate_chain({1.0, 1.0});
  try {
    discretize(g, 0.5, Variant::P1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::MeshTooCoarse);
  }
  EXPECT_THROW(discretize(g, 0.0, Variant::P1), Error);
  EXPECT_NO_THROW(discretize(g, 0.25, Variant::P1));
}

TEST(Discretize, VariantNamesRoundTrip) {
  for (Variant v : {Variant::P1, Variant::P2, Variant::Pc}) EXPECT_EQ(parse_variant(variant_name(v)), v);
  EXPECT_THROW(parse_variant("P3"), Error);
}
