#pragma once

#include "qmlab/relative_state.hpp"
#include "qmlab/rng.hpp"

namespace qmlab {

// Matrix with independent standard complex Gaussian entries.
Mat random_gaussian_matrix(Rng& rng, int dim);

// Haar-distributed unitary via QR of a Gaussian matrix with the phase
// convention that makes the factorization unique.
Mat random_unitary(Rng& rng, int dim);

// Full-rank random density matrix G G* / Trace(G G*).
DensityMatrix random_density(Rng& rng, int dim);

// Random Hermitian matrix with O(1) entries.
ComplexMatrix random_hermitian(Rng& rng, int dim);

// Resolution of the identity with `blocks` branches of random dimensions
// (each at least 1) in a random orthonormal basis. Also returns the basis and
// the block sizes so callers can build operators adapted to the resolution.
struct SampledResolution {
  ResolutionOfUnity resolution;
  Mat basis;               // columns: the adapted orthonormal basis
  std::vector<int> sizes;  // branch dimensions, summing to dim
};
SampledResolution random_resolution(Rng& rng, int dim, int blocks);

// Random Hermitian element of the commutant of the sampled resolution:
// block-diagonal in the adapted basis.
ComplexMatrix random_commutant_element(Rng& rng, const SampledResolution& r);

}  // namespace qmlab
