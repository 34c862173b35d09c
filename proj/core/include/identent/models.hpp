#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <utility>

#include "identent/dynamics.hpp"
#include "identent/fock.hpp"
#include "identent/types.hpp"

namespace identent {

/// Spin-polarized one-dimensional Hubbard ring: nearest-neighbour hopping of
/// unit amplitude on N sites with periodic boundary conditions, electron sign
/// convention H = -sum t_{jk} b†_j b_k.
class HubbardRing {
 public:
  explicit HubbardRing(int sites);

  int sites() const { return sites_; }
  HoppingModel model() const;

  /// Plane-wave eigenbasis of the hopping matrix: column r-1 holds the
  /// momentum mode theta(m r)/sqrt(N) with theta(m) = exp(2 pi i m / N).
  /// This is the basis in which the nondegenerate-mode average reproduces
  /// the restricted-sum closed form.
  ComplexMatrix momentum_basis() const;

  /// Two fermions on sites 1 and 2.
  TwoParticleState default_initial_state() const;

 private:
  int sites_;
};

/// Two-particle eigenstate psi^(rs) of the ring, with momentum labels
/// 1 <= r, s <= N, r != s:
/// lambda_{mn} = [theta(mr + ns) - theta(nr + ms)] / (N sqrt(2)).
TwoParticleState hubbard_eigenstate(int sites, int r, int s);

/// Eigenvalue of psi^(rs): -2 Re theta(r) - 2 Re theta(s).
double hubbard_pair_energy(int sites, int r, int s);

/// Tr[(Lambda^(rs)† Lambda^(rs)) (Lambda^(r's')† Lambda^(r's'))], both as the
/// closed form (delta_ss' + delta_rr' + delta_rs' + delta_sr') / 4 and by
/// direct evaluation.
struct CrossTrace {
  double closed_form = 0.0;
  double direct = 0.0;
};

CrossTrace hubbard_cross_trace(int sites, std::pair<int, int> first,
                               std::pair<int, int> second);

/// Ensemble-averaged linear entropy of sum sqrt(p_rs) psi^(rs) when every
/// eigenstate counts as its own level: 1/2 plus the sum of p_A p_B over
/// unordered pairs of disjoint momentum-label sets, each counted once.
/// Weights are keyed by unordered label pairs and must sum to 1.
double hubbard_average_closed_form(int sites,
                                   const std::map<std::pair<int, int>, double>& weights);

/// Bose-Hubbard model with infinite-range hopping:
/// t_{jk} = [1 - (N-1) eps] delta_{jk} + eps (1 - delta_{jk}), boson sign
/// convention H = +sum t_{jk} b†_j b_k. Requires eps > 0, which makes the
/// one-particle ground level (N-1)-fold degenerate.
class InfiniteRangeBoseModel {
 public:
  InfiniteRangeBoseModel(int sites, double eps);

  int sites() const { return sites_; }
  double eps() const { return eps_; }
  HoppingModel model() const;

  /// Two bosons on sites 1 and 2.
  TwoParticleState default_initial_state() const;

 private:
  int sites_;
  double eps_;
};

/// Numerically verified spectral structure of the infinite-range model:
/// one-particle eigenvalue 1 - N eps with multiplicity N-1 plus eigenvalue 1
/// on the uniform mode, and exactly three two-particle levels. Throws
/// ValidationError if the computed spectrum deviates beyond 1e-10.
struct BoseSpectrumFacts {
  double ground_energy = 0.0;      // 1 - N eps
  int ground_multiplicity = 0;     // N - 1
  double top_energy = 0.0;         // 1
  double uniform_mode_overlap = 0.0;  // |<phi0|uniform>| for the top mode
  std::array<double, 3> two_particle_energies{};  // ascending
  double max_deviation = 0.0;      // worst defect against the closed forms
};

BoseSpectrumFacts bose_model_spectrum_facts(int sites, double eps);

/// Closed forms for the initial state |1,1,0,...,0> of the infinite-range
/// model: projection weights onto the three levels, the averaged reduced
/// purity deficit S1(sigma) = 1/2 + 1/N - 2/N^2, delta, and the ensemble
/// average 1/2 + (4/N^2)(1 - 2/N)^2.
struct BoseClosedForm {
  double p00 = 0.0;  // weight on the non-degenerate top level (energy 2)
  double p11 = 0.0;  // weight on the doubly-degenerate ground level
  double p01 = 0.0;  // weight on the mixed level
  double s1_sigma = 0.0;
  double delta = 0.0;
  double avg_e1 = 0.0;
};

BoseClosedForm bose_average_closed_form(int sites);

/// A model selected on the command line, with everything the analysis needs.
struct ModelDescription {
  std::string name;
  Species species = Species::Boson;
  int sites = 0;
  double eps = 0.0;  // bose only
  HoppingModel model;
  TwoParticleState initial_state;
  std::optional<ComplexMatrix> preferred_basis;  // hubbard momentum basis
};

/// Parse "hubbard:N=<n>" or "bose:N=<n>[,eps=<e>]" (eps defaults to 0.1).
ModelDescription parse_model_spec(const std::string& spec);

}  // namespace identent
