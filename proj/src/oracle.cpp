#include "chainwave/oracle.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <string>

#include "chainwave/error.hpp"

namespace chainwave {

namespace {

Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> dense_pencil(const DiscreteSystem& sys, bool vectors) {
  const Eigen::MatrixXd k(sys.K), m(sys.M);
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(
      k, m, vectors ? Eigen::ComputeEigenvectors | Eigen::Ax_lBx : Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
  if (es.info() != Eigen::Success) throw Error(Errc::EigSolverFailure, "dense generalized eigensolver failed");
  return es;
}

}  // namespace

std::vector<double> oracle_spectrum_discrete(const DiscreteSystem& sys, int count) {
  if (sys.variant != Variant::Pc) throw Error(Errc::DomainError, "spectral oracle needs the conservative variant");
  const int kernel = sys.geom.n_pairs() - 1;
  if (count < 1 || count > sys.n_dofs - kernel) {
    throw Error(Errc::EigSolverFailure, "requested " + std::to_string(count) + " eigenvalues from a pencil with " +
                                            std::to_string(sys.n_dofs - kernel) + " positive ones");
  }
  const auto es = dense_pencil(sys, false);
  const Eigen::VectorXd& mu = es.eigenvalues();
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = kernel; i < kernel + count; ++i) out.push_back(std::sqrt(std::max(mu(i), 0.0)));
  return out;
}

RichardsonSpectrum oracle_spectrum_richardson(const ChainGeometry& geom, double h, int count) {
  RichardsonSpectrum r;
  r.coarse = oracle_spectrum_discrete(discretize(geom, h, Variant::Pc), count);
  r.fine = oracle_spectrum_discrete(discretize(geom, 0.5 * h, Variant::Pc), count);
  for (std::size_t i = 0; i < r.fine.size(); ++i) r.extrapolated.push_back((4.0 * r.fine[i] - r.coarse[i]) / 3.0);
  return r;
}

KernelCheck kernel_check(const DiscreteSystem& sys) {
  const auto es = dense_pencil(sys, true);
  const Eigen::VectorXd& mu = es.eigenvalues();
  KernelCheck out;
  while (out.dimension < mu.size() && mu(out.dimension) < kKernelThreshold) ++out.dimension;
  out.largest_kernel_mu = out.dimension > 0 ? mu(out.dimension - 1) : 0.0;
  out.smallest_positive_mu = out.dimension < mu.size() ? mu(out.dimension) : 0.0;

  // The dense solver resolves the kernel only to about eps |K| / mu_1; a few
  // shift-invert sweeps with shift well below mu_1 polish it to rounding level.
  Eigen::MatrixXd q = es.eigenvectors().leftCols(out.dimension);
  if (out.dimension > 0) {
    const double shift = out.smallest_positive_mu > 0.0 ? 1e-2 * out.smallest_positive_mu : 1e-6;
    const Eigen::SparseMatrix<double> shifted = sys.K + shift * sys.M;
    const Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(shifted);
    if (solver.info() != Eigen::Success) throw Error(Errc::EigSolverFailure, "shifted kernel factorization failed");
    for (int sweep = 0; sweep < 4; ++sweep) {
      q = solver.solve(sys.M * q);
      const Eigen::MatrixXd gram = q.transpose() * (sys.M * q);
      const Eigen::LLT<Eigen::MatrixXd> llt(gram);
      q = llt.matrixU().solve<Eigen::OnTheRight>(q);
    }
  }
  for (Eigen::Index c = 0; c < sys.zero_modes.cols(); ++c) {
    const Eigen::VectorXd z = sys.zero_modes.col(c);
    const Eigen::VectorXd mz = sys.M * z;
    const Eigen::VectorXd r = z - q * (q.transpose() * mz);
    const double err = std::sqrt(std::max(r.dot(sys.M * r), 0.0) / z.dot(mz));
    out.max_relative_error = std::max(out.max_relative_error, err);
  }
  return out;
}

}  // namespace chainwave
