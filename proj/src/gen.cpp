#include "specflow/gen.hpp"

#include <cmath>

namespace specflow {

namespace {

Matrix gaussian_block(Rng& rng, int n, double scale) {
  Matrix g(n, n);
  const double factor = scale / std::sqrt(static_cast<double>(n));
  // Row-major fill order so the stream layout is part of the format.
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = factor * rng.gaussian_complex();
  return g;
}

}  // namespace

AlgebraElement gen_gaussian(const AlgebraPtr& algebra, double scale, uint64_t seed) {
  if (!(scale > 0.0)) throw Error(Errc::BadConfig, "scale must be positive");
  Rng rng(seed);
  std::vector<Matrix> blocks;
  blocks.reserve(static_cast<size_t>(algebra->num_blocks()));
  for (int k = 0; k < algebra->num_blocks(); ++k)
    blocks.push_back(gaussian_block(rng, algebra->block(k).size, scale));
  return AlgebraElement(algebra, std::move(blocks));
}

AlgebraElement gen_hermitian(const AlgebraPtr& algebra, double scale, uint64_t seed) {
  if (!(scale > 0.0)) throw Error(Errc::BadConfig, "scale must be positive");
  Rng rng(seed);
  std::vector<Matrix> blocks;
  blocks.reserve(static_cast<size_t>(algebra->num_blocks()));
  for (int k = 0; k < algebra->num_blocks(); ++k) {
    const Matrix g = gaussian_block(rng, algebra->block(k).size, scale);
    blocks.push_back(0.5 * (g + g.adjoint().eval()));
  }
  AlgebraElement out(algebra, std::move(blocks));
  out.certify_hermitian();
  return out;
}

AlgebraElement gen_unitary(const AlgebraPtr& algebra, uint64_t seed) {
  Rng rng(seed);
  std::vector<Matrix> blocks;
  blocks.reserve(static_cast<size_t>(algebra->num_blocks()));
  for (int k = 0; k < algebra->num_blocks(); ++k) {
    const int n = algebra->block(k).size;
    Matrix g = gaussian_block(rng, n, 1.0);
    // Modified Gram-Schmidt with two orthogonalization passes.
    for (int j = 0; j < n; ++j) {
      for (int pass = 0; pass < 2; ++pass)
        for (int i = 0; i < j; ++i) g.col(j) -= g.col(i).dot(g.col(j)) * g.col(i);
      const double nrm = g.col(j).norm();
      if (nrm < 1e-12) throw Error(Errc::DomainError, "degenerate Gaussian draw in gen_unitary");
      g.col(j) /= nrm;
    }
    blocks.push_back(g);
  }
  return AlgebraElement(algebra, std::move(blocks));
}

AlgebraElement gen_psd(const AlgebraPtr& algebra, double scale, uint64_t seed) {
  const AlgebraElement g = gen_gaussian(algebra, scale, seed);
  AlgebraElement out = g.adjoint() * g;
  out.certify_hermitian();
  return out;
}

}  // namespace specflow
