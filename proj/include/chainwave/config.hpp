#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "chainwave/chain.hpp"
#include "chainwave/discrete_system.hpp"

namespace chainwave {

struct SpectrumConfig {
  double z_min = 0.5;
  double z_max = 12.0;
  int scan_points = 20000;
  double tol = 1e-12;
  int k_max = 1000000;
  double pole_threshold = 1e-8;
};

struct ModesConfig {
  int count = 10;
  int samples_per_edge = 200;
};

enum class InitialData { Bump, ZeroMode };

struct SimulateConfig {
  Variant variant = Variant::P2;
  double h = 0.01;
  double dt = 0.0;  // 0 selects h/2
  double t_end = 100.0;
  int sample_every = 100;
  bool geometric_sampling = false;
  int samples_per_decade = 20;
  InitialData initial = InitialData::Bump;
  int initial_edge = 1;
  bool project_zero_modes = true;
  bool normalize_graph_norm = true;
};

struct ResolventConfig {
  std::vector<double> betas;  // explicit list; empty selects the grid below
  double beta_min = 10.0;
  double beta_max = 0.0;      // 0 selects the trust horizon
  int count = 400;
  bool refine_peaks = true;
  double h = 0.01;
};

struct DecayConfig {
  double t_lo = 10.0;
  double t_hi = 1000.0;
  std::string trace;  // CSV path for decay-fit
};

struct OutputConfig {
  std::string directory = "out";
  bool emit_svg = true;
};

struct RunConfig {
  ChainGeometry geometry;
  SpectrumConfig spectrum;
  ModesConfig modes;
  SimulateConfig simulate;
  ResolventConfig resolvent;
  DecayConfig decay;
  OutputConfig output;
};

/// Defaults with the chain l = (1, 1).
RunConfig default_config();

/// Parses YAML text. Throws ConfigError(ParseError) with the offending line on
/// malformed input and ConfigError(ValidationError) naming the field (dotted
/// path) for unknown keys, wrong types or out-of-range values.
RunConfig parse_config(const std::string& text);

/// parse_config on a file; Error(IoError) when it cannot be read.
RunConfig load_config(const std::filesystem::path& path);

/// Resolved configuration as YAML, for the run log.
std::string describe_config(const RunConfig& cfg);

}  // namespace chainwave
