#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace chainwave {

enum class EdgeKind { String, Beam };

/// A chain of 2N edges alternating string, beam, string, ..., beam.
/// Edge indices are 1-based throughout the public interface so that edge j
/// is a string exactly when j is odd.
class ChainGeometry {
 public:
  int n_pairs() const noexcept { return static_cast<int>(lengths_.size() / 2); }
  int edge_count() const noexcept { return static_cast<int>(lengths_.size()); }
  const std::vector<double>& lengths() const noexcept { return lengths_; }

  /// Length of edge j, 1 <= j <= 2N.
  double length(int j) const { return lengths_.at(static_cast<std::size_t>(j - 1)); }
  static EdgeKind kind(int j) noexcept { return (j % 2 == 1) ? EdgeKind::String : EdgeKind::Beam; }

  double total_length() const noexcept;

  friend bool operator==(const ChainGeometry&, const ChainGeometry&) = default;

 private:
  friend ChainGeometry validate_chain(std::span<const double> raw_lengths);
  std::vector<double> lengths_;
};

/// Throws ChainError with EmptyInput, OddEdgeCount or NonPositiveLength(index).
ChainGeometry validate_chain(std::span<const double> raw_lengths);

inline ChainGeometry validate_chain(const std::vector<double>& raw_lengths) {
  return validate_chain(std::span<const double>(raw_lengths));
}

struct RationalityReport {
  // Best rational approximation p/q of a/b with q <= max_denominator.
  double ratio = 0.0;
  std::int64_t p = 0;
  std::int64_t q = 1;
  double error = 0.0;
  bool plausibly_rational = false;

  // Closest p^2/q to a^2/(b*pi) with q <= max_denominator. A hit means the
  // squared-length condition on (beam a, string b) plausibly fails.
  double square_ratio = 0.0;
  std::int64_t square_p = 0;
  std::int64_t square_q = 1;
  double square_error = 0.0;
  bool square_plausibly_matches = false;
};

/// Continued-fraction witness for the length-ratio conditions. A float can
/// never certify irrationality, so the report only measures how well small
/// rationals fit. Throws Error(DomainError) on non-positive arguments.
RationalityReport rationality_witness(double a, double b, std::int64_t max_denominator, double tol);

}  // namespace chainwave
