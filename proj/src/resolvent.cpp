#include "chainwave/resolvent.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <random>

#include "chainwave/error.hpp"
#include "chainwave/parallel.hpp"
#include "elements.hpp"

namespace chainwave {

namespace {

using cd = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CSparse = Eigen::SparseMatrix<cd>;

struct PairVec {
  CVec u;
  CVec v;
};

class ResolventOperator {
 public:
  ResolventOperator(const DiscreteSystem& sys, double beta) : sys_(sys), beta_(beta) {
    const CSparse k = sys.K.cast<cd>(), m = sys.M.cast<cd>(), d = sys.D.cast<cd>();
    CSparse s = k - (beta * beta) * m + cd(0.0, beta) * d;
    s.makeCompressed();
    lu_.compute(s);
    if (lu_.info() != Eigen::Success) throw Error(Errc::SolverFailure, "resolvent factorization failed");
    if (sys.zero_modes.cols() > 0) {
      const Eigen::MatrixXd dz = sys.D * sys.zero_modes;
      gram_ = (sys.zero_modes.transpose() * dz).ldlt();
      has_kernel_ = true;
    }
  }

  // (i beta - A)^{-1} (f, g).
  PairVec apply(const PairVec& x) const {
    const cd ib(0.0, beta_);
    const CVec rhs = sys_.M * x.v + ib * (sys_.M * x.u) + sys_.D * x.u;
    PairVec y;
    y.u = lu_.solve(rhs);
    y.v = ib * y.u - x.u;
    return y;
  }

  // Adjoint of apply in the energy inner product. Uses conj(S) = K - beta^2 M - i beta D.
  PairVec apply_adjoint(const PairVec& x) const {
    const cd ib(0.0, beta_);
    const CVec rhs = -(sys_.M * x.v) - ib * (sys_.M * x.u) + sys_.D * x.u;
    PairVec y;
    y.u = lu_.solve(rhs.conjugate()).conjugate();
    y.v = x.u + ib * y.u;
    return y;
  }

  // Spectral projection onto the complement of the zero modes: Z^T (M v + D u) = 0.
  void project(PairVec& x) const {
    if (!has_kernel_) return;
    const Eigen::MatrixXd& z = sys_.zero_modes;
    const CVec w = z.transpose() * (sys_.M * x.v + sys_.D * x.u);
    const Eigen::VectorXd re = gram_.solve(w.real()), im = gram_.solve(w.imag());
    const CVec c = re.cast<cd>() + cd(0.0, 1.0) * im.cast<cd>();
    x.u -= z.cast<cd>() * c;
  }

  double norm_sq(const PairVec& x) const {
    return (x.u.dot(sys_.K * x.u) + x.v.dot(sys_.M * x.v)).real();
  }

 private:
  const DiscreteSystem& sys_;
  double beta_;
  Eigen::SparseLU<CSparse> lu_;
  Eigen::LDLT<Eigen::MatrixXd> gram_;
  bool has_kernel_ = false;
};

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  if (v.size() % 2 == 1) return *mid;
  const double hi = *mid;
  const double lo = *std::max_element(v.begin(), mid);
  return 0.5 * (lo + hi);
}

double max_over_median(const std::vector<ResolventSample>& s) {
  std::vector<double> vals;
  for (const auto& x : s) vals.push_back(x.norm_over_beta);
  if (vals.empty()) return 0.0;
  const double med = median(vals);
  return med > 0.0 ? *std::max_element(vals.begin(), vals.end()) / med : std::numeric_limits<double>::infinity();
}

}  // namespace

double element_frequency_limit(const EdgeMesh& edge) {
  const double h = edge.element_size;
  Eigen::MatrixXd k, m;
  if (edge.kind == EdgeKind::String) {
    k = elements::string_stiffness(h);
    m = elements::string_mass(h);
  } else {
    k = elements::beam_stiffness(h);
    m = elements::beam_mass(h);
  }
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(k, m, Eigen::EigenvaluesOnly);
  return std::sqrt(es.eigenvalues().maxCoeff());
}

double trust_horizon(const DiscreteSystem& sys, double fraction) {
  double lim = std::numeric_limits<double>::infinity();
  for (const auto& e : sys.edges) lim = std::min(lim, element_frequency_limit(e));
  return fraction * lim;
}

ResolventSample resolvent_norm(const DiscreteSystem& sys, double beta, const ResolventOptions& opts) {
  if (!(beta > 0.0)) throw Error(Errc::DomainError, "resolvent frequency must be positive");
  const ResolventOperator r(sys, beta);

  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> gauss;
  PairVec x{CVec(sys.n_dofs), CVec(sys.n_dofs)};
  for (Eigen::Index i = 0; i < sys.n_dofs; ++i) {
    x.u(i) = cd(gauss(rng), gauss(rng));
    x.v(i) = cd(gauss(rng), gauss(rng));
  }
  r.project(x);

  ResolventSample out;
  out.beta = beta;
  double prev = 0.0;
  for (int it = 1; it <= opts.max_iterations; ++it) {
    const double nx = std::sqrt(r.norm_sq(x));
    if (!(nx > 0.0)) throw Error(Errc::SolverFailure, "power iteration collapsed to the zero vector");
    x.u /= nx;
    x.v /= nx;
    const PairVec y = r.apply(x);
    const double est = std::sqrt(r.norm_sq(y));
    out.iterations = it;
    out.norm = est;
    if (!std::isfinite(est)) throw Error(Errc::SolverFailure, "non-finite resolvent estimate");
    if (it > 1 && std::abs(est - prev) <= opts.rel_tol * est) {
      out.converged = true;
      break;
    }
    prev = est;
    x = r.apply_adjoint(y);
    r.project(x);
  }
  out.norm_over_beta = out.norm / beta;
  return out;
}

std::vector<ResolventSample> resolvent_norm_sweep(const DiscreteSystem& sys, const std::vector<double>& betas,
                                                  const ResolventOptions& opts) {
  for (double b : betas) {
    if (!(b > 0.0)) throw Error(Errc::DomainError, "resolvent frequencies must be positive");
  }
  std::vector<ResolventSample> out(betas.size());
  parallel_for(betas.size(), [&](std::size_t i) { out[i] = resolvent_norm(sys, betas[i], opts); });
  return out;
}

ResolventEnvelope resolvent_envelope(const DiscreteSystem& sys, double beta_lo, double beta_hi, int grid_points,
                                     const ResolventOptions& opts) {
  if (!(beta_lo > 0.0) || !(beta_hi > beta_lo) || grid_points < 3) {
    throw Error(Errc::InvalidRange, "resolvent envelope needs 0 < beta_lo < beta_hi and at least 3 grid points");
  }
  std::vector<double> betas(static_cast<std::size_t>(grid_points));
  for (int i = 0; i < grid_points; ++i) betas[static_cast<std::size_t>(i)] = beta_lo + (beta_hi - beta_lo) * i / (grid_points - 1);
  ResolventEnvelope env;
  env.grid = resolvent_norm_sweep(sys, betas, opts);

  std::vector<std::size_t> maxima;
  for (std::size_t i = 1; i + 1 < env.grid.size(); ++i) {
    const double c = env.grid[i].norm_over_beta;
    if (c >= env.grid[i - 1].norm_over_beta && c > env.grid[i + 1].norm_over_beta) maxima.push_back(i);
  }
  env.peaks.resize(maxima.size());
  parallel_for(maxima.size(), [&](std::size_t k) {
    const std::size_t i = maxima[k];
    // Golden-section search for the maximum of norm/beta inside the neighbour bracket.
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = env.grid[i - 1].beta, b = env.grid[i + 1].beta;
    double x1 = b - g * (b - a), x2 = a + g * (b - a);
    ResolventSample s1 = resolvent_norm(sys, x1, opts), s2 = resolvent_norm(sys, x2, opts);
    ResolventSample best = env.grid[i];
    for (int it = 0; it < 40 && (b - a) > 1e-10 * b; ++it) {
      if (s1.norm_over_beta > s2.norm_over_beta) {
        b = x2;
        x2 = x1;
        s2 = s1;
        x1 = b - g * (b - a);
        s1 = resolvent_norm(sys, x1, opts);
      } else {
        a = x1;
        x1 = x2;
        s1 = s2;
        x2 = a + g * (b - a);
        s2 = resolvent_norm(sys, x2, opts);
      }
      for (const auto* s : {&s1, &s2}) {
        if (s->norm_over_beta > best.norm_over_beta) best = *s;
      }
    }
    env.peaks[k] = best;
  });

  env.grid_max_over_median = max_over_median(env.grid);
  env.peak_max_over_median = max_over_median(env.peaks);
  std::vector<double> grid_vals;
  double sup = 0.0;
  for (const auto& x : env.grid) {
    grid_vals.push_back(x.norm_over_beta);
    sup = std::max(sup, x.norm_over_beta);
  }
  for (const auto& x : env.peaks) sup = std::max(sup, x.norm_over_beta);
  const double grid_median = median(grid_vals);
  env.sup_over_grid_median = grid_median > 0.0 ? sup / grid_median : std::numeric_limits<double>::infinity();
  env.last_window_lo = 0.5 * beta_hi;
  std::vector<double> last;
  for (const auto& p : env.peaks) {
    if (p.beta >= env.last_window_lo) {
      last.push_back(p.norm_over_beta);
      env.last_window_max = std::max(env.last_window_max, p.norm_over_beta);
    } else if (p.beta >= 0.5 * env.last_window_lo) {
      env.previous_window_max = std::max(env.previous_window_max, p.norm_over_beta);
    }
  }
  env.last_window_monotone_growth =
      last.size() >= 2 && std::adjacent_find(last.begin(), last.end(), std::greater_equal<>()) == last.end();
  return env;
}

}  // namespace chainwave
