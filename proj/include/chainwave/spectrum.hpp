#pragma once

#include <optional>
#include <string>
#include <vector>

#include "chainwave/chain.hpp"
#include "chainwave/transfer.hpp"

namespace chainwave {

/// One of the 2N closed-form sequences the large roots approach.
struct AsymptoticFamily {
  enum class Kind { StringEdge, InteriorBeam, LastBeam };
  Kind kind = Kind::StringEdge;
  int edge_pair = 0;  // j in l_{2j-1} (StringEdge) or l_{2j} (InteriorBeam); N for LastBeam

  /// Predicted z for the k-th member (k >= 1).
  double predicted_z(const ChainGeometry& geom, int k) const;
  /// Distance in z between members k and k+1.
  double spacing(const ChainGeometry& geom, int k) const;
  std::string label() const;

  friend bool operator==(const AsymptoticFamily&, const AsymptoticFamily&) = default;
};

/// All 2N families of a geometry: strings first, then interior beams, then the last beam.
std::vector<AsymptoticFamily> families(const ChainGeometry& geom);

struct SpectralRoot {
  double z = 0.0;
  double lambda_im = 0.0;  // z^2
  double residual = 0.0;   // |f(z)| at the refined point
  double min_denominator = 1.0;
  std::optional<AsymptoticFamily> family;
  int family_k = 0;
  int index = 0;
};

struct SpectrumScanOptions {
  double pole_threshold = kDefaultPoleThreshold;
};

struct SpectrumScan {
  std::vector<SpectralRoot> roots;
  std::vector<std::string> warnings;
  int pole_points = 0;
};

/// Uniform scan of f on [z_min, z_max] with scan_points samples, sign-change
/// bracketing, then bisection until the bracket is narrower than tol.
/// Throws Error(InvalidRange) on a bad range, point count or tolerance.
SpectrumScan find_spectrum(const ChainGeometry& geom, double z_min, double z_max, int scan_points,
                           double tol, const SpectrumScanOptions& options = {});

/// Grid size giving about samples_per_spacing points per root spacing at z_max,
/// the densest point of the string families.
int recommended_scan_points(const ChainGeometry& geom, double z_min, double z_max, int samples_per_spacing = 32);

/// The first `count` roots above z_min, widening the scan range until enough are found.
std::vector<SpectralRoot> first_roots(const ChainGeometry& geom, int count, double z_min = 0.5, double tol = 1e-12);

/// Fraction of the local family spacing inside which a root is assigned to a family.
inline constexpr double kFamilyWindow = 0.25;

/// Tags each root with the nearest family member (k <= k_max) when it lies
/// within kFamilyWindow of that family's local spacing; leaves others untagged.
std::vector<SpectralRoot> classify_roots(const ChainGeometry& geom, std::vector<SpectralRoot> roots,
                                         int k_max);

/// min_n (lambda_{n+2N} - lambda_n) over the list, lambda = z^2.
/// Throws Error(InsufficientRoots) with fewer than 2N+1 roots.
double generalized_gap(const std::vector<SpectralRoot>& roots, int n_pairs);

/// min_n (lambda_{n+1} - lambda_n).
double simple_gap(const std::vector<SpectralRoot>& roots);

}  // namespace chainwave
