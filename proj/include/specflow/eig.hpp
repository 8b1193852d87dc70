#pragma once

#include <functional>

#include "specflow/algebra.hpp"

namespace specflow {

/// Per-block Hermitian eigendecomposition x = U diag(lambda) U*.
/// Eigenvalues are ascending within each block; cluster_tol is the grouping
/// tolerance used downstream when extracting spectral projections.
struct SpectralDecomposition {
  AlgebraPtr algebra;
  std::vector<Eigen::VectorXd> eigenvalues;
  std::vector<Matrix> vectors;
  double cluster_tol = 0.0;

  /// Rebuild U f(lambda) U* as an element; f must be finite on the spectrum.
  AlgebraElement apply(const std::function<double(double)>& f) const;

  double min_abs_eigenvalue() const;
  double max_abs_eigenvalue() const;
  double min_eigenvalue() const;
  double max_eigenvalue() const;
};

/// Cyclic Jacobi diagonalization of a certified-Hermitian element.
/// cluster_tol < 0 selects the default 1e-8 * (1 + operator norm).
SpectralDecomposition eig_hermitian(const AlgebraElement& x, double cluster_tol = -1.0);

AlgebraElement func_calc(const AlgebraElement& x, const std::function<double(double)>& f);

/// |x| = (x*x)^{1/2}; Hermitian inputs take the |eigenvalue| fast path.
AlgebraElement abs_op(const AlgebraElement& x);

/// phi(x) = x (1 + x^2)^{-1/2}, the smooth sign surrogate.
AlgebraElement phi_map(const AlgebraElement& x);

/// z = (1 + x^2)^{-1/2}.
AlgebraElement resolvent_half(const AlgebraElement& x);

/// sgn(x); requires min |eigenvalue| > zero_tol (no kernel convention).
AlgebraElement sgn_op(const AlgebraElement& x, double zero_tol);

namespace detail {

/// Jacobi kernel for one dense Hermitian block.  Eigenvalues come back
/// ascending with matching eigenvector columns.  Throws NoConvergence with
/// the offending block index after 100 sweeps.
void jacobi_hermitian(const Matrix& a, Eigen::VectorXd& evals, Matrix& vecs, int block_index);

}  // namespace detail

}  // namespace specflow
