#pragma once

#include "specflow/algebra.hpp"
#include "specflow/rng.hpp"

namespace specflow {

/// General (non-Hermitian) element with i.i.d. complex Gaussian entries
/// scaled by scale/sqrt(block size).
AlgebraElement gen_gaussian(const AlgebraPtr& algebra, double scale, uint64_t seed);

/// GUE-style Hermitian ensemble: (G + G*)/2 per block; spectral radius
/// concentrates near 2*scale for large blocks.
AlgebraElement gen_hermitian(const AlgebraPtr& algebra, double scale, uint64_t seed);

/// Block unitary via Gram-Schmidt orthonormalization of a Gaussian matrix.
AlgebraElement gen_unitary(const AlgebraPtr& algebra, uint64_t seed);

/// Positive semidefinite g*g.
AlgebraElement gen_psd(const AlgebraPtr& algebra, double scale, uint64_t seed);

}  // namespace specflow
