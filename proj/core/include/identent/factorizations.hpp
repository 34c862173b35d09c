#pragma once

#include "identent/types.hpp"

namespace identent {

/// Takagi factorization of a complex symmetric matrix: M = U^T diag(d) U with
/// U unitary and d real, nonnegative, descending. d are the singular values
/// of M.
struct TakagiResult {
  ComplexMatrix U;
  RealVector d;
};

/// Canonical congruence form of a complex antisymmetric matrix:
/// M = U^T D U with U unitary and D block-diagonal, blocks
/// [[0, z_j], [-z_j, 0]] with z descending, followed by an explicit zero
/// block of dimension null_dim. 2 * z.size() + null_dim == n.
struct AntisymCanonical {
  ComplexMatrix U;
  RealVector z;
  int null_dim = 0;
};

/// Factorize a complex symmetric matrix (symmetry defect up to
/// kSymmetryTol * ||M||_F is symmetrised away). Throws ValidationError on
/// non-square input or a symmetry defect beyond tolerance.
TakagiResult takagi(const ComplexMatrix& m);

/// Factorize a complex antisymmetric matrix. Singular values of an
/// antisymmetric matrix come in equal pairs; each pair yields one block.
/// For odd n the null space is never empty. Error behaviour as takagi.
AntisymCanonical antisym_canonical(const ComplexMatrix& m);

/// Eigenvalues of M†M, descending, clamped to [0, inf). For a state matrix
/// with Tr(M†M) = 1 these are the Schmidt probabilities; no factorization is
/// performed. The input must be symmetric (boson) or antisymmetric (fermion)
/// within tolerance.
RealVector canonical_spectrum(const ComplexMatrix& m, Species species);

}  // namespace identent
