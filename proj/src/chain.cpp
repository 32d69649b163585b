#include "chainwave/chain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include "chainwave/error.hpp"

namespace chainwave {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::EmptyInput: return "EmptyInput";
    case Errc::OddEdgeCount: return "OddEdgeCount";
    case Errc::NonPositiveLength: return "NonPositiveLength";
    case Errc::DomainError: return "DomainError";
    case Errc::PoleEncountered: return "PoleEncountered";
    case Errc::InvalidRange: return "InvalidRange";
    case Errc::InsufficientRoots: return "InsufficientRoots";
    case Errc::NotARoot: return "NotARoot";
    case Errc::IllConditionedEdgeSolve: return "IllConditionedEdgeSolve";
    case Errc::MeshTooCoarse: return "MeshTooCoarse";
    case Errc::SolverFailure: return "SolverFailure";
    case Errc::EigSolverFailure: return "EigSolverFailure";
    case Errc::WindowOutOfRange: return "WindowOutOfRange";
    case Errc::NonpositiveEnergy: return "NonpositiveEnergy";
    case Errc::ParseError: return "ParseError";
    case Errc::ValidationError: return "ValidationError";
    case Errc::IoError: return "IoError";
  }
  return "Unknown";
}

double ChainGeometry::total_length() const noexcept {
  return std::accumulate(lengths_.begin(), lengths_.end(), 0.0);
}

ChainGeometry validate_chain(std::span<const double> raw_lengths) {
  if (raw_lengths.empty()) {
    throw ChainError(Errc::EmptyInput, "chain has no edges");
  }
  if (raw_lengths.size() % 2 != 0) {
    throw ChainError(Errc::OddEdgeCount,
                     "chain needs an even number of edges, got " + std::to_string(raw_lengths.size()));
  }
  for (std::size_t i = 0; i < raw_lengths.size(); ++i) {
    const double l = raw_lengths[i];
    if (!(l > 0.0) || !std::isfinite(l)) {
      const int index = static_cast<int>(i) + 1;
      throw ChainError(Errc::NonPositiveLength,
                       "edge " + std::to_string(index) + " has non-positive length", index);
    }
  }
  ChainGeometry geom;
  geom.lengths_.assign(raw_lengths.begin(), raw_lengths.end());
  return geom;
}

namespace {

struct Fraction {
  std::int64_t p;
  std::int64_t q;
};

// Best approximation with bounded denominator: last convergent within the
// bound versus the largest admissible semiconvergent, whichever is closer.
Fraction best_rational(double x, std::int64_t max_den) {
  std::int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double rem = x;
  for (int iter = 0; iter < 64; ++iter) {
    const double a_real = std::floor(rem);
    if (a_real > 1e15) break;
    const auto a = static_cast<std::int64_t>(a_real);
    const std::int64_t q2 = q0 + a * q1;
    if (q2 > max_den) {
      const std::int64_t k = (max_den - q0) / q1;
      const Fraction semi{p0 + k * p1, q0 + k * q1};
      const Fraction conv{p1, q1};
      const double e_semi = std::abs(x - static_cast<double>(semi.p) / static_cast<double>(semi.q));
      const double e_conv = std::abs(x - static_cast<double>(conv.p) / static_cast<double>(conv.q));
      return (e_semi < e_conv) ? semi : conv;
    }
    const std::int64_t p2 = p0 + a * p1;
    p0 = p1; q0 = q1;
    p1 = p2; q1 = q2;
    const double frac = rem - a_real;
    if (frac < 1e-15 * std::max(1.0, rem)) break;
    rem = 1.0 / frac;
  }
  return {p1, q1};
}

}  // namespace

RationalityReport rationality_witness(double a, double b, std::int64_t max_denominator, double tol) {
  if (!(a > 0.0) || !(b > 0.0) || max_denominator < 1 || !(tol > 0.0)) {
    throw Error(Errc::DomainError, "rationality_witness needs a, b, tol > 0 and max_denominator >= 1");
  }
  RationalityReport r;
  r.ratio = a / b;
  const Fraction best = best_rational(r.ratio, max_denominator);
  r.p = best.p;
  r.q = best.q;
  r.error = std::abs(r.ratio - static_cast<double>(best.p) / static_cast<double>(best.q));
  r.plausibly_rational = r.error < tol;

  // Squared-length test: search q <= max_denominator, p^2 <= q x (1 + tol).
  const double x = a * a / (b * std::numbers::pi);
  r.square_ratio = x;
  r.square_error = std::numeric_limits<double>::infinity();
  for (std::int64_t q = 1; q <= max_denominator; ++q) {
    const double target = x * static_cast<double>(q);
    const auto p_hi = static_cast<std::int64_t>(std::floor(std::sqrt(target * (1.0 + tol))));
    for (std::int64_t p = std::max<std::int64_t>(0, p_hi - 1); p <= p_hi; ++p) {
      const double err = std::abs(static_cast<double>(p * p) / static_cast<double>(q) - x);
      if (err < r.square_error) {
        r.square_error = err;
        r.square_p = p;
        r.square_q = q;
      }
    }
  }
  r.square_plausibly_matches = r.square_error < tol;
  return r;
}

}  // namespace chainwave
