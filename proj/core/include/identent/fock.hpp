#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "identent/types.hpp"

namespace identent {

/// Normalized wavefunction of two identical particles over a one-particle
/// site basis of dimension N, stored as the coefficient matrix Lambda with
/// psi = sum_{mn} Lambda_{mn} w_m (x) w_n. Lambda is symmetric for bosons,
/// antisymmetric for fermions, with Tr(Lambda† Lambda) = 1.
class TwoParticleState {
 public:
  /// Validates shape, finiteness and (anti)symmetry, then stores the exactly
  /// (anti)symmetrised, exactly renormalized matrix. A normalization defect
  /// beyond `norm_tol` is rejected rather than silently repaired.
  TwoParticleState(Species species, ComplexMatrix lambda, double norm_tol = 1e-6);

  Species species() const { return species_; }
  int dim() const { return static_cast<int>(lambda_.rows()); }
  const ComplexMatrix& lambda() const { return lambda_; }

 private:
  Species species_;
  ComplexMatrix lambda_;
};

/// One term of an occupation-number expansion: amplitude on |1_a, 1_b> for
/// a < b, or on |2_a> when a == b (bosons only). Sites are 1-based.
struct OccupationAmplitude {
  int site_a = 0;
  int site_b = 0;
  Complex amplitude;
};

/// Build a state from occupation-number amplitudes. The amplitudes must be
/// normalized within 1e-8; the resulting Lambda carries 1/sqrt(2) on each
/// (a, b) pair with a != b so that Tr(Lambda† Lambda) = 1.
TwoParticleState state_from_occupation(Species species, int dim,
                                       const std::vector<OccupationAmplitude>& amplitudes);

/// Generalized Schmidt decomposition. Row r of `modes` defines the
/// one-particle mode phi_r = sum_m modes(r, m) w_m. For bosons,
/// Lambda_{mn} = sum_r sqrt(p_r) modes(r,m) modes(r,n); for fermions the
/// probabilities come in equal consecutive pairs p_{2j} = p_{2j+1} realised
/// on the mode pair (phi_{2j}, phi_{2j+1}).
struct SchmidtDecomposition {
  Species species;
  ComplexMatrix modes;
  RealVector probabilities;
};

SchmidtDecomposition schmidt_decompose(const TwoParticleState& state);

/// Trace-one positive semidefinite reduced density operator.
struct ReducedDensity {
  ComplexMatrix rho;
};

/// Reduced density operators built from the Schmidt modes. Bosons give
/// sigma == tau; for fermions sigma collects the even modes with weight
/// 2 p_{2m} and tau the odd ones (the assignment per pair is conventional,
/// only the entropies are stable).
std::pair<ReducedDensity, ReducedDensity> reduced_densities(const TwoParticleState& state);

/// -sum p ln p in nats, with 0 ln 0 = 0. Probabilities may dip to -1e-12
/// (clamped); anything more negative, or a sum away from 1 beyond 1e-8,
/// is rejected.
double von_neumann_entropy(const RealVector& probabilities);

/// Linear entropy 1 - sum p^2 of a probability list.
double linear_entropy(const RealVector& probabilities);

/// Linear entropy 1 - Tr[(Lambda† Lambda)^2], computed without any
/// factorization.
double linear_entropy(const TwoParticleState& state);

// ---------------------------------------------------------------------------
// State file format: a "species dim" header line followed by Lambda in the
// matrix text format. '#' comments are allowed throughout.
// ---------------------------------------------------------------------------

TwoParticleState read_state(std::istream& in, const std::string& source,
                            double norm_tol = 1e-6);
TwoParticleState read_state_file(const std::string& path, double norm_tol = 1e-6);

void write_state(std::ostream& out, const TwoParticleState& state);
void write_state_file(const std::string& path, const TwoParticleState& state);

}  // namespace identent
