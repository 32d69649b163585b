#include <gtest/gtest.h>

#include <algorithm>
#include <charconv>
#include <cstring>
#include <cstdlib>
#include <filesystem>
#include <random>

#include "chainwave/discrete_system.hpp"
#include "chainwave/dynamics.hpp"
#include "chainwave/error.hpp"
#include "chainwave/report.hpp"
#include "chainwave/spectrum.hpp"

using namespace chainwave;
namespace fs = std::filesystem;

TEST(Report, DoubleFormattingRoundTrips) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::uint64_t> bits;
  for (int i = 0; i < 2000; ++i) {
    double v;
    const std::uint64_t b = bits(rng);
    std::memcpy(&v, &b, sizeof v);
    if (!std::isfinite(v)) continue;
    const std::string s = format_double(v);
    double back = 0.0;
    std::from_chars(s.data(), s.data() + s.size(), back);
    EXPECT_EQ(back, v) << s;
  }
  EXPECT_EQ(format_double(0.5), "0.5");
}

TEST(Report, SpectrumCsvIsDeterministic) {
  const auto g = validate_chain({1.0, 0.8, 1.3, 0.9});
  const auto a = classify_roots(g, first_roots(g, 30), 1000);
  const auto b = classify_roots(g, first_roots(g, 30), 1000);
  const std::string csv = spectrum_csv(a);
  EXPECT_EQ(csv, spectrum_csv(b));
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "index,z,lambda_im,residual,family,family_k");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 31);
}

TEST(Report, TraceCsvReadsBack) {
  const auto s = discretize(validate_chain({1.0, 1.0}), 0.1, Variant::P2);
  SimulationOptions so;
  so.t_end = 1.0;
  so.sample_every = 5;
  const EnergyTrace tr = simulate(s, bump_state(s), so);
  const fs::path dir = fs::temp_directory_path() / "chainwave_report_test";
  write_text(dir / "trace.csv", energy_trace_csv(tr));
  std::vector<double> t, e;
  read_trace_csv(dir / "trace.csv", t, e);
  ASSERT_EQ(t.size(), tr.samples.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    EXPECT_EQ(t[i], tr.samples[i].t);
    EXPECT_EQ(e[i], tr.samples[i].energy);
  }
  write_text(dir / "bad.csv", "time,energy\n1,2\n");
  EXPECT_THROW(read_trace_csv(dir / "bad.csv", t, e), Error);
  fs::remove_all(dir);
}

TEST(Report, SvgSkipsInvalidPointsOnLogAxes) {
  PlotSpec spec;
  spec.title = "decay & <growth>";
  spec.log_x = spec.log_y = true;
  spec.series.push_back({{1.0, 10.0, 100.0, -1.0}, {1.0, 0.1, 0.0, 2.0}, "#000000", "E", false});
  const std::string svg = svg_plot(spec);
  EXPECT_EQ(svg.rfind("<svg", 0) == 0 || svg.find("<svg") != std::string::npos, true);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
  EXPECT_EQ(svg.find("<growth>"), std::string::npos);
  EXPECT_EQ(svg.find("nan"), std::string::npos);
}
