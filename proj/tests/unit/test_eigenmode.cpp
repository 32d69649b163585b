#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "chainwave/eigenmode.hpp"
#include "chainwave/error.hpp"
#include "chainwave/spectrum.hpp"
#include "chainwave/transfer.hpp"

using namespace chainwave;

namespace {

const std::vector<std::vector<double>> kGeometries = {{1.0, 1.0}, {1.0, 0.8, 1.3, 0.9}, {1.0, std::sqrt(2.0)}};

// Composite Simpson rule on [0, l].
template <typename F>
double simpson(F&& f, double l, int n = 4000) {
  const double h = l / n;
  double s = f(0.0) + f(l);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(i * h);
  return s * h / 3.0;
}

}  // namespace

TEST(Eigenmode, ResidualsVanishOnFirstRoots) {
  for (const auto& lengths : kGeometries) {
    const auto g = validate_chain(lengths);
    for (const auto& r : first_roots(g, 15)) {
      const Eigenmode m = build_eigenmode(g, r.z);
      EXPECT_LT(m.residuals.max(), 1e-8) << r.z;
      EXPECT_EQ(m.per_edge.size(), static_cast<std::size_t>(g.edge_count()));
      EXPECT_EQ(m.node_values.size(), static_cast<std::size_t>(g.edge_count() - 1));
    }
  }
}

TEST(Eigenmode, FirstStringIsPureSine) {
  const auto g = validate_chain({1.0, 1.0});
  const Eigenmode m = build_eigenmode(g, first_roots(g, 1)[0].z);
  EXPECT_EQ(m.per_edge[0].c[1], 0.0);
  EXPECT_NE(m.per_edge[0].c[0], 0.0);
}

TEST(Eigenmode, SatisfiesEdgeEquationsByFiniteDifferences) {
  const auto g = validate_chain({1.0, 0.8, 1.3, 0.9});
  for (const auto& r : first_roots(g, 6)) {
    const Eigenmode m = build_eigenmode(g, r.z);
    const double z4 = std::pow(r.z, 4);
    for (const auto& e : m.per_edge) {
      const double dx = 1e-5 * e.length;
      for (double frac : {0.2, 0.5, 0.8}) {
        const double x = frac * e.length;
        for (int d = 1; d <= 3; ++d) {
          const double fd = (e.eval(d - 1, x + dx) - e.eval(d - 1, x - dx)) / (2.0 * dx);
          EXPECT_NEAR(fd, e.eval(d, x), 1e-6 * std::pow(r.z, e.kind == EdgeKind::String ? 2 * d : d));
        }
        if (e.kind == EdgeKind::String) {
          EXPECT_NEAR(e.eval(2, x), -z4 * e.eval(0, x), 1e-8 * z4);
        } else {
          const double fourth = (e.eval(3, x + dx) - e.eval(3, x - dx)) / (2.0 * dx);
          EXPECT_NEAR(fourth, z4 * e.eval(0, x), 1e-5 * z4);
        }
      }
    }
  }
}

TEST(Eigenmode, JunctionConditionsFromEdgeData) {
  const auto g = validate_chain({1.0, 0.8, 1.3, 0.9});
  for (const auto& r : first_roots(g, 8)) {
    const Eigenmode m = build_eigenmode(g, r.z);
    const double z3 = std::pow(r.z, 3);
    for (std::size_t j = 0; j + 1 < m.per_edge.size(); ++j) {
      const auto& a = m.per_edge[j];
      const auto& b = m.per_edge[j + 1];
      EXPECT_NEAR(a.eval(0, a.length), b.eval(0, 0.0), 1e-9);
      const double shear = (a.kind == EdgeKind::String) ? b.eval(3, 0.0) : a.eval(3, a.length);
      const double slope = (a.kind == EdgeKind::String) ? a.eval(1, a.length) : b.eval(1, 0.0);
      EXPECT_NEAR(shear + slope, 0.0, 1e-9 * z3);
    }
    EXPECT_NEAR(m.per_edge.front().eval(0, 0.0), 0.0, 1e-12);
    EXPECT_NEAR(m.per_edge.back().eval(0, m.per_edge.back().length), 0.0, 1e-9);
  }
}

TEST(Eigenmode, UnitSeminormByQuadrature) {
  const auto g = validate_chain({1.0, 0.8, 1.3, 0.9});
  for (const auto& r : first_roots(g, 5)) {
    const Eigenmode m = build_eigenmode(g, r.z);
    double total = 0.0;
    for (const auto& e : m.per_edge) {
      const int d = e.kind == EdgeKind::String ? 1 : 2;
      total += simpson([&](double x) { return e.eval(d, x) * e.eval(d, x); }, e.length);
    }
    EXPECT_NEAR(total, 1.0, 1e-8);
    EXPECT_NEAR(v_seminorm_sq(m.per_edge), 1.0, 1e-12);
  }
}

TEST(Eigenmode, ExponentialBasisAtHighFrequency) {
  const auto g = validate_chain({1.0, 1.0});
  const auto scan = find_spectrum(g, 40.0, 42.0, recommended_scan_points(g, 40.0, 42.0), 1e-13);
  ASSERT_FALSE(scan.roots.empty());
  const Eigenmode m = build_eigenmode(g, scan.roots.front().z);
  EXPECT_TRUE(m.per_edge[1].exponential_basis);
  EXPECT_LT(m.residuals.max(), 1e-8);
  EXPECT_LT(m.worst_edge_condition, kEdgeConditionLimit);
}

TEST(Eigenmode, RejectsNonRoot) {
  const auto g = validate_chain({1.0, 1.0});
  const double z = first_roots(g, 1)[0].z + 0.1;
  try {
    build_eigenmode(g, z);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NotARoot);
  }
}

TEST(NodeTraces, IncommensurateLengthsKeepTracesPositive) {
  const auto g = validate_chain({1.0, std::sqrt(2.0)});
  for (const auto& r : first_roots(g, 20)) {
    const Eigenmode m = build_eigenmode(g, r.z);
    EXPECT_GT(node_trace_sum(m), 0.0);
    EXPECT_GE(node_trace_sum_p2(m), node_trace_sum(m));
  }
}

TEST(NodeTraces, JunctionNodeVanishesWhileSlopeTraceSurvives) {
  // String phase l z^2 = pi puts a node exactly at the junction.
  const double pi = std::numbers::pi;
  const auto g = validate_chain({1.0 / pi, 1.0});
  const double z = pi;
  ASSERT_LT(std::abs(char_fn(g, z)), 1e-12);
  const Eigenmode m = build_eigenmode(g, z);
  EXPECT_LT(node_trace_sum(m), 1e-24);
  EXPECT_GT(node_trace_sum_p2(m), 1e-2);
}

TEST(ZeroModes, DimensionAndClosedForm) {
  for (int n = 1; n <= 4; ++n) {
    std::vector<double> lengths;
    for (int j = 0; j < 2 * n; ++j) lengths.push_back(0.7 + 0.1 * j);
    const auto g = validate_chain(lengths);
    const auto basis = zero_eigenspace(g);
    EXPECT_EQ(basis.dimension(), n - 1);
    for (const auto& mode : basis.modes) EXPECT_EQ(zero_mode_residual(g, mode), 0.0);
  }
  const auto g = validate_chain({1.0, 0.8, 1.3, 0.9});
  const auto basis = zero_eigenspace(g);
  ASSERT_EQ(basis.dimension(), 1);
  const auto& mode = basis.modes[0];
  for (double t : {0.0, 0.25, 0.6, 1.0}) {
    EXPECT_DOUBLE_EQ(mode.value(g, 1, t * 1.0), 0.0);
    EXPECT_NEAR(mode.value(g, 2, t * 0.8), t, 1e-15);
    EXPECT_DOUBLE_EQ(mode.value(g, 3, t * 1.3), 1.0);
    EXPECT_NEAR(mode.value(g, 4, t * 0.9), 1.0 - t, 1e-15);
  }
  EXPECT_NEAR(mode.slope(g, 2, 0.3), 1.0 / 0.8, 1e-15);
  EXPECT_NEAR(mode.slope(g, 4, 0.3), -1.0 / 0.9, 1e-15);
  EXPECT_DOUBLE_EQ(mode.slope(g, 3, 0.3), 0.0);
}

TEST(Multiplicity, SimpleAtRootsZeroElsewhere) {
  for (const auto& lengths : kGeometries) {
    const auto g = validate_chain(lengths);
    for (const auto& r : first_roots(g, 12)) {
      EXPECT_EQ(multiplicity_check(g, r.z), 1) << r.z;
      EXPECT_EQ(multiplicity_check(g, r.z + 1e-6), 0) << r.z;
    }
  }
}
