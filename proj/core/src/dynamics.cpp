#include "identent/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>

#include "identent/matrix.hpp"

namespace identent {

namespace {

constexpr double kDefaultGroupTol = 1e-8;

void require_compatible(const TwoParticleState& state, const SpectralDecomposition& spectrum,
                        const std::string& context) {
  if (state.species() != spectrum.species()) {
    throw ValidationError(context + ": state and spectrum species differ");
  }
  if (state.dim() != spectrum.dim()) {
    std::ostringstream os;
    os << context << ": state dimension " << state.dim() << " does not match spectrum dimension "
       << spectrum.dim();
    throw ValidationError(os.str());
  }
}

// Eigen-coordinates of a coefficient matrix: Lambda = V C V^T.
ComplexMatrix to_eigen_coordinates(const ComplexMatrix& lambda, const ComplexMatrix& modes) {
  return modes.adjoint() * lambda * modes.conjugate();
}

ComplexMatrix from_eigen_coordinates(const ComplexMatrix& c, const ComplexMatrix& modes) {
  return modes * c * modes.transpose();
}

double uniform_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

HoppingModel::HoppingModel(ComplexMatrix t, int sign) : t_(std::move(t)), sign_(sign) {
  require_square(t_, "HoppingModel");
  require_finite(t_, "HoppingModel");
  if (sign_ != 1 && sign_ != -1) {
    throw ValidationError("HoppingModel: sign must be +1 or -1");
  }
  if ((t_ - t_.adjoint()).norm() > kSymmetryTol * t_.norm()) {
    throw ValidationError("HoppingModel: hopping matrix is not Hermitian within tolerance");
  }
  t_ = 0.5 * (t_ + t_.adjoint());
}

ComplexMatrix SpectralDecomposition::basis_matrix(std::pair<int, int> pair) const {
  const auto [a, b] = pair;
  const ComplexVector va = modes_.col(a);
  const ComplexVector vb = modes_.col(b);
  if (species_ == Species::Boson) {
    if (a == b) return va * va.transpose();
    return (va * vb.transpose() + vb * va.transpose()) / std::numbers::sqrt2;
  }
  return (va * vb.transpose() - vb * va.transpose()) / std::numbers::sqrt2;
}

ComplexMatrix SpectralDecomposition::projector_matrix(int level) const {
  const auto& lv = levels_.at(level);
  const Eigen::Index nn = static_cast<Eigen::Index>(dim_) * dim_;
  ComplexMatrix f = ComplexMatrix::Zero(nn, nn);
  for (const auto& pair : lv.pairs) {
    const ComplexMatrix b = basis_matrix(pair);
    const Eigen::Map<const ComplexVector> vec(b.data(), nn);
    f += vec * vec.adjoint();
  }
  return f;
}

SpectralDecomposition two_particle_spectrum(const HoppingModel& model, Species species,
                                            const SpectrumOptions& options) {
  const int n = model.dim();
  if (species == Species::Fermion && n < 2) {
    throw ValidationError("two_particle_spectrum: fermions need dimension >= 2");
  }

  SpectralDecomposition spec;
  spec.species_ = species;
  spec.dim_ = n;
  spec.sign_ = model.sign();

  if (options.one_particle_basis) {
    const ComplexMatrix& v = *options.one_particle_basis;
    if (v.rows() != n || v.cols() != n) {
      throw ValidationError("two_particle_spectrum: basis dimension mismatch");
    }
    if (!is_unitary(v, kOrthoTol)) {
      throw ValidationError("two_particle_spectrum: supplied basis is not unitary");
    }
    const ComplexMatrix diag = v.adjoint() * model.hopping() * v;
    spec.modes_ = v;
    spec.energies_ = diag.diagonal().real();
    const double resid =
        (model.hopping() * v - v * spec.energies_.cast<Complex>().asDiagonal()).norm();
    if (resid > kResidualTol * std::max(model.hopping().norm(), 1.0)) {
      throw ValidationError(
          "two_particle_spectrum: supplied basis does not diagonalise the hopping matrix");
    }
  } else {
    HermitianEig eig = hermitian_eig(model.hopping());
    spec.modes_ = std::move(eig.eigenvectors);
    spec.energies_ = std::move(eig.eigenvalues);
  }

  // Pair energies. Together with the one-particle residual checked above this
  // bounds the two-particle eigen-relation residual t B + B t^T - sign E B
  // for every basis matrix B of a level by twice the one-particle residual
  // plus the grouping width.
  struct PairEnergy {
    double energy;
    int a, b;
  };
  std::vector<PairEnergy> pairs;
  for (int a = 0; a < n; ++a) {
    const int b0 = species == Species::Boson ? a : a + 1;
    for (int b = b0; b < n; ++b) {
      pairs.push_back({model.sign() * (spec.energies_(a) + spec.energies_(b)), a, b});
    }
  }
  std::sort(pairs.begin(), pairs.end(), [](const PairEnergy& x, const PairEnergy& y) {
    if (x.energy != y.energy) return x.energy < y.energy;
    if (x.a != y.a) return x.a < y.a;
    return x.b < y.b;
  });

  spec.pair_level_ = Eigen::MatrixXi::Constant(n, n, -1);
  auto open_level = [&spec](const PairEnergy& p) {
    spec.levels_.push_back(SpectralLevel{p.energy, {{p.a, p.b}}});
  };
  auto join_level = [&spec](const PairEnergy& p) {
    spec.levels_.back().pairs.emplace_back(p.a, p.b);
  };
  if (options.nondegenerate) {
    for (const PairEnergy& p : pairs) open_level(p);
  } else {
    const double range = pairs.back().energy - pairs.front().energy;
    const double gap = options.group_tol.value_or(kDefaultGroupTol) * range;
    double previous = 0.0;
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      if (k == 0 || pairs[k].energy - previous > gap) {
        open_level(pairs[k]);
      } else {
        join_level(pairs[k]);
      }
      previous = pairs[k].energy;
    }
  }
  for (std::size_t l = 0; l < spec.levels_.size(); ++l) {
    SpectralLevel& lv = spec.levels_[l];
    double sum = 0.0;
    for (const auto& [a, b] : lv.pairs) {
      sum += spec.sign_ * (spec.energies_(a) + spec.energies_(b));
      spec.pair_level_(a, b) = static_cast<int>(l);
      spec.pair_level_(b, a) = static_cast<int>(l);
    }
    lv.energy = sum / static_cast<double>(lv.pairs.size());
  }
  return spec;
}

Projection project_state(const TwoParticleState& state, const SpectralDecomposition& spectrum,
                         double weight_floor) {
  require_compatible(state, spectrum, "project_state");
  const int n = state.dim();
  const ComplexMatrix c = to_eigen_coordinates(state.lambda(), spectrum.one_particle_modes());

  Projection out;
  double total = 0.0;
  std::vector<std::pair<double, ComplexMatrix>> raw;  // (weight, component matrix)
  raw.reserve(spectrum.levels().size());
  for (const SpectralLevel& lv : spectrum.levels()) {
    ComplexMatrix masked = ComplexMatrix::Zero(n, n);
    for (const auto& [a, b] : lv.pairs) {
      masked(a, b) = c(a, b);
      masked(b, a) = c(b, a);
    }
    const double w = masked.squaredNorm();
    total += w;
    raw.emplace_back(w, std::move(masked));
  }
  if (std::abs(total - 1.0) > 1e-8) {
    throw std::runtime_error("project_state: projected weights do not sum to 1");
  }

  double kept = 0.0;
  for (std::size_t l = 0; l < raw.size(); ++l) {
    const double w = raw[l].first;
    if (w < weight_floor) {
      out.discarded_weight += w;
      continue;
    }
    kept += w;
    ComplexMatrix lambda =
        from_eigen_coordinates(raw[l].second, spectrum.one_particle_modes()) / std::sqrt(w);
    out.components.push_back(ProjectedComponent{
        spectrum.levels()[l].energy, w, TwoParticleState(state.species(), std::move(lambda))});
  }
  if (kept > 0.0) {
    for (ProjectedComponent& comp : out.components) comp.weight /= kept;
  }
  return out;
}

TwoParticleState evolve(const TwoParticleState& state, const SpectralDecomposition& spectrum,
                        double time) {
  require_compatible(state, spectrum, "evolve");
  ComplexMatrix c = to_eigen_coordinates(state.lambda(), spectrum.one_particle_modes());
  for (const SpectralLevel& lv : spectrum.levels()) {
    const Complex phase = std::exp(Complex(0.0, -lv.energy * time));
    for (const auto& [a, b] : lv.pairs) {
      c(a, b) *= phase;
      if (a != b) c(b, a) *= phase;
    }
  }
  ComplexMatrix lambda = from_eigen_coordinates(c, spectrum.one_particle_modes());
  if (std::abs(lambda.norm() - 1.0) > 1e-10) {
    throw std::runtime_error("evolve: norm not preserved");
  }
  return TwoParticleState(state.species(), std::move(lambda));
}

std::vector<std::pair<double, double>> e1_trajectory(const TwoParticleState& state,
                                                     const SpectralDecomposition& spectrum,
                                                     const std::vector<double>& times) {
  std::vector<std::pair<double, double>> out;
  out.reserve(times.size());
  for (const double t : times) {
    out.emplace_back(t, linear_entropy(evolve(state, spectrum, t)));
  }
  return out;
}

AverageReport average_entanglement(const TwoParticleState& state,
                                   const SpectralDecomposition& spectrum, double weight_floor) {
  const Projection projection = project_state(state, spectrum, weight_floor);
  if (projection.components.empty()) {
    throw ValidationError("average_entanglement: projection left no components");
  }
  const int n = state.dim();
  ComplexMatrix sigma = ComplexMatrix::Zero(n, n);
  ComplexMatrix tau = ComplexMatrix::Zero(n, n);
  double purity_sum = 0.0;
  AverageReport report;
  report.discarded_weight = projection.discarded_weight;
  for (const ProjectedComponent& comp : projection.components) {
    const ComplexMatrix& l = comp.state.lambda();
    const ComplexMatrix gram = l.adjoint() * l;
    sigma += comp.weight * gram;
    tau += comp.weight * (l * l.adjoint());
    purity_sum += comp.weight * comp.weight * gram.squaredNorm();
    report.level_weights.emplace_back(comp.energy, comp.weight);
  }
  report.s1_sigma = 1.0 - sigma.squaredNorm();
  report.s1_tau = 1.0 - tau.squaredNorm();
  report.delta = 1.0 - purity_sum;
  report.avg_e1 = report.s1_sigma + report.s1_tau - report.delta;
  return report;
}

McEstimate monte_carlo_phase_average(const TwoParticleState& state,
                                     const SpectralDecomposition& spectrum, long samples,
                                     std::uint64_t seed) {
  if (samples < 1) throw ValidationError("monte_carlo_phase_average: samples must be >= 1");
  const Projection projection = project_state(state, spectrum);
  const int n = state.dim();
  const Eigen::Index nn = static_cast<Eigen::Index>(n) * n;
  const Eigen::Index k = static_cast<Eigen::Index>(projection.components.size());

  ComplexMatrix stacked(nn, k);
  for (Eigen::Index j = 0; j < k; ++j) {
    const ProjectedComponent& comp = projection.components[j];
    const ComplexMatrix scaled = std::sqrt(comp.weight) * comp.state.lambda();
    stacked.col(j) = Eigen::Map<const ComplexVector>(scaled.data(), nn);
  }

  std::mt19937_64 rng(seed);
  ComplexVector phases(k);
  ComplexVector assembled(nn);
  ComplexMatrix gram(n, n);
  double mean = 0.0;
  double m2 = 0.0;
  for (long i = 0; i < samples; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) {
      const double chi = 2.0 * std::numbers::pi * uniform_unit(rng);
      phases(j) = Complex(std::cos(chi), std::sin(chi));
    }
    assembled.noalias() = stacked * phases;
    const Eigen::Map<const ComplexMatrix> lambda(assembled.data(), n, n);
    gram.noalias() = lambda.adjoint() * lambda;
    const double value = 1.0 - gram.squaredNorm();
    const double delta = value - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (value - mean);
  }
  McEstimate estimate;
  estimate.mean = mean;
  estimate.std_error =
      samples > 1 ? std::sqrt(m2 / (static_cast<double>(samples - 1) * samples)) : 0.0;
  return estimate;
}

}  // namespace identent
