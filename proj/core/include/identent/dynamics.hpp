#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "identent/fock.hpp"
#include "identent/types.hpp"

namespace identent {

/// Quadratic hopping Hamiltonian H = sign * sum_{jk} t_{jk} b†_j b_k with
/// Hermitian t. sign = -1 matches the electron convention, +1 the boson one.
class HoppingModel {
 public:
  HoppingModel(ComplexMatrix t, int sign);

  const ComplexMatrix& hopping() const { return t_; }
  int sign() const { return sign_; }
  int dim() const { return static_cast<int>(t_.rows()); }

 private:
  ComplexMatrix t_;
  int sign_;
};

struct SpectrumOptions {
  /// Treat every product of one-particle eigenvectors as its own level even
  /// when energies coincide. The result then depends on the eigenbasis
  /// supplied for degenerate one-particle levels.
  bool nondegenerate = false;
  /// Degeneracy grouping threshold, relative to the two-particle spectral
  /// range. Defaults to 1e-8.
  std::optional<double> group_tol;
  /// Explicit one-particle eigenbasis (columns). Must be unitary and must
  /// diagonalise the hopping matrix; validated on construction.
  std::optional<ComplexMatrix> one_particle_basis;
};

/// One energy level of the two-particle spectrum: the (a, b) mode pairs
/// whose product states span its eigenspace.
struct SpectralLevel {
  double energy = 0.0;
  std::vector<std::pair<int, int>> pairs;
};

/// Two-particle spectrum of a hopping model in one symmetry sector. Level
/// energies are sign * (eps_a + eps_b) over mode pairs a <= b (bosons) or
/// a < b (fermions), grouped by degeneracy unless nondegenerate mode is on.
class SpectralDecomposition {
 public:
  Species species() const { return species_; }
  int dim() const { return dim_; }
  int sign() const { return sign_; }
  const ComplexMatrix& one_particle_modes() const { return modes_; }
  const RealVector& one_particle_energies() const { return energies_; }
  const std::vector<SpectralLevel>& levels() const { return levels_; }

  /// Normalized coefficient matrix of the product state for mode pair (a, b).
  ComplexMatrix basis_matrix(std::pair<int, int> pair) const;

  /// Dense projector onto the level's eigenspace, acting on column-major
  /// vec(Lambda). Intended for inspection and tests at small dimension; the
  /// library itself never materialises it.
  ComplexMatrix projector_matrix(int level) const;

 private:
  friend SpectralDecomposition two_particle_spectrum(const HoppingModel&, Species,
                                                     const SpectrumOptions&);
  Species species_ = Species::Boson;
  int dim_ = 0;
  int sign_ = 1;
  ComplexMatrix modes_;       // columns are one-particle eigenvectors
  RealVector energies_;       // matching eigenvalues of t
  std::vector<SpectralLevel> levels_;
  Eigen::MatrixXi pair_level_;  // (a, b) -> level index, symmetric
};

SpectralDecomposition two_particle_spectrum(const HoppingModel& model, Species species,
                                            const SpectrumOptions& options = {});

struct ProjectedComponent {
  double energy = 0.0;
  double weight = 0.0;
  TwoParticleState state;
};

struct Projection {
  std::vector<ProjectedComponent> components;  // ascending level energy
  double discarded_weight = 0.0;
};

/// Split a state into its normalized components psi'_n = F_n psi / ||F_n psi||
/// with weights ||F_n psi||^2. Components below `weight_floor` are dropped and
/// the remaining weights rescaled to sum 1; the dropped mass is reported.
Projection project_state(const TwoParticleState& state, const SpectralDecomposition& spectrum,
                         double weight_floor = 1e-14);

/// Eigenbasis time evolution: each level's component picks up exp(-i E_n t).
TwoParticleState evolve(const TwoParticleState& state, const SpectralDecomposition& spectrum,
                        double time);

/// Linear entropy along a trajectory: (t, E1(evolve(state, t))) per time.
std::vector<std::pair<double, double>> e1_trajectory(const TwoParticleState& state,
                                                     const SpectralDecomposition& spectrum,
                                                     const std::vector<double>& times);

/// Phase-ensemble average of the linear entropy and its constituents:
/// avg_e1 = s1_sigma + s1_tau - delta with sigma = sum_n p_n L_n† L_n,
/// tau = sum_n p_n L_n L_n†, delta = 1 - sum_n p_n^2 Tr[(L_n† L_n)^2],
/// where L_n are the normalized projected coefficient matrices.
struct AverageReport {
  double avg_e1 = 0.0;
  double s1_sigma = 0.0;
  double s1_tau = 0.0;
  double delta = 0.0;
  std::vector<std::pair<double, double>> level_weights;  // (E_n, p_n)
  double discarded_weight = 0.0;
};

AverageReport average_entanglement(const TwoParticleState& state,
                                   const SpectralDecomposition& spectrum,
                                   double weight_floor = 1e-14);

/// Monte-Carlo estimate of the phase-ensemble average: draws independent
/// uniform phases per level, assembles sum_n sqrt(p_n) e^{i chi_n} psi'_n and
/// averages the linear entropy. Deterministic for a fixed seed.
struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

McEstimate monte_carlo_phase_average(const TwoParticleState& state,
                                     const SpectralDecomposition& spectrum, long samples,
                                     std::uint64_t seed);

}  // namespace identent
