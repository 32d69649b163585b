#pragma once

#include <string>
#include <vector>

#include "chainwave/chain.hpp"

namespace chainwave {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct VerifyOptions {
  double h = 0.01;          // mesh for the discrete checks
  int oracle_count = 10;    // eigenvalues compared against the spectral oracle
  int gap_roots = 100;
  int mode_count = 20;
  long energy_steps = 2000;
};

/// Property suite behind `chainwave verify`: root residuals, oracle
/// agreement, multiplicity, gap, asymptotic remainder, zero eigenspace,
/// discrete energy identities and the node-trace positivity.
std::vector<CheckResult> run_verify_suite(const ChainGeometry& geom, const VerifyOptions& opts = {});

}  // namespace chainwave
