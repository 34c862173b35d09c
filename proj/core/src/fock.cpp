#include "identent/fock.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>
#include <utility>

#include "identent/factorizations.hpp"
#include "identent/matrix.hpp"

namespace identent {

namespace {

constexpr double kProbabilitySumTol = 1e-8;

// Validates and cleans a probability list: clamps roundoff negatives,
// rejects genuine negatives and normalization defects.
RealVector checked_probabilities(const RealVector& p, const std::string& context) {
  RealVector out = p;
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    if (out(i) < kProbabilityFloor) {
      std::ostringstream os;
      os << context << ": negative probability " << out(i);
      throw ValidationError(os.str());
    }
    if (out(i) < 0.0) out(i) = 0.0;
  }
  if (std::abs(out.sum() - 1.0) > kProbabilitySumTol) {
    std::ostringstream os;
    os << context << ": probabilities sum to " << out.sum() << ", expected 1";
    throw ValidationError(os.str());
  }
  return out;
}

}  // namespace

TwoParticleState::TwoParticleState(Species species, ComplexMatrix lambda, double norm_tol)
    : species_(species), lambda_(std::move(lambda)) {
  require_square(lambda_, "TwoParticleState");
  require_finite(lambda_, "TwoParticleState");
  if (species_ == Species::Fermion && lambda_.rows() < 2) {
    throw ValidationError("TwoParticleState: no antisymmetric state exists in dimension 1");
  }
  const double scale = lambda_.norm();
  const double defect = species_ == Species::Boson ? (lambda_ - lambda_.transpose()).norm()
                                                   : (lambda_ + lambda_.transpose()).norm();
  if (defect > kSymmetryTol * scale) {
    throw ValidationError(std::string("TwoParticleState: coefficient matrix is not ") +
                          (species_ == Species::Boson ? "symmetric" : "antisymmetric") +
                          " within tolerance");
  }
  lambda_ = species_ == Species::Boson ? (0.5 * (lambda_ + lambda_.transpose())).eval()
                                       : (0.5 * (lambda_ - lambda_.transpose())).eval();
  const double norm = lambda_.norm();
  if (std::abs(norm * norm - 1.0) > norm_tol) {
    std::ostringstream os;
    os << "TwoParticleState: squared norm " << norm * norm << " deviates from 1 beyond "
       << norm_tol;
    throw ValidationError(os.str());
  }
  lambda_ /= norm;
}

TwoParticleState state_from_occupation(Species species, int dim,
                                       const std::vector<OccupationAmplitude>& amplitudes) {
  if (dim < 1) throw ValidationError("state_from_occupation: dimension must be >= 1");
  if (amplitudes.empty()) {
    throw ValidationError("state_from_occupation: no amplitudes given");
  }
  ComplexMatrix lambda = ComplexMatrix::Zero(dim, dim);
  std::set<std::pair<int, int>> seen;
  double total = 0.0;
  const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
  for (const OccupationAmplitude& occ : amplitudes) {
    if (occ.site_a < 1 || occ.site_b < 1 || occ.site_a > dim || occ.site_b > dim) {
      std::ostringstream os;
      os << "state_from_occupation: sites (" << occ.site_a << ", " << occ.site_b
         << ") outside 1.." << dim;
      throw ValidationError(os.str());
    }
    if (occ.site_a > occ.site_b) {
      std::ostringstream os;
      os << "state_from_occupation: pattern (" << occ.site_a << ", " << occ.site_b
         << ") must be ordered a <= b";
      throw ValidationError(os.str());
    }
    if (occ.site_a == occ.site_b && species == Species::Fermion) {
      std::ostringstream os;
      os << "state_from_occupation: fermions cannot doubly occupy site " << occ.site_a;
      throw ValidationError(os.str());
    }
    if (!seen.insert({occ.site_a, occ.site_b}).second) {
      std::ostringstream os;
      os << "state_from_occupation: duplicate pattern (" << occ.site_a << ", " << occ.site_b
         << ")";
      throw ValidationError(os.str());
    }
    const int a = occ.site_a - 1;
    const int b = occ.site_b - 1;
    if (a == b) {
      lambda(a, a) = occ.amplitude;
    } else if (species == Species::Boson) {
      lambda(a, b) = occ.amplitude * inv_sqrt2;
      lambda(b, a) = occ.amplitude * inv_sqrt2;
    } else {
      lambda(a, b) = occ.amplitude * inv_sqrt2;
      lambda(b, a) = -occ.amplitude * inv_sqrt2;
    }
    total += std::norm(occ.amplitude);
  }
  if (total == 0.0) throw ValidationError("state_from_occupation: zero state vector");
  if (std::abs(total - 1.0) > 1e-8) {
    std::ostringstream os;
    os << "state_from_occupation: squared amplitudes sum to " << total << ", expected 1";
    throw ValidationError(os.str());
  }
  return TwoParticleState(species, std::move(lambda), 1e-8);
}

SchmidtDecomposition schmidt_decompose(const TwoParticleState& state) {
  SchmidtDecomposition out;
  out.species = state.species();
  const int n = state.dim();
  if (state.species() == Species::Boson) {
    TakagiResult takagi_result = takagi(state.lambda());
    out.modes = std::move(takagi_result.U);
    out.probabilities = takagi_result.d.array().square();
  } else {
    AntisymCanonical canonical = antisym_canonical(state.lambda());
    out.modes = std::move(canonical.U);
    out.probabilities = RealVector::Zero(n);
    for (Eigen::Index j = 0; j < canonical.z.size(); ++j) {
      const double p = canonical.z(j) * canonical.z(j);
      out.probabilities(2 * j) = p;
      out.probabilities(2 * j + 1) = p;
    }
  }
  return out;
}

std::pair<ReducedDensity, ReducedDensity> reduced_densities(const TwoParticleState& state) {
  const SchmidtDecomposition schmidt = schmidt_decompose(state);
  const int n = state.dim();
  ComplexMatrix sigma = ComplexMatrix::Zero(n, n);
  ComplexMatrix tau = ComplexMatrix::Zero(n, n);
  if (state.species() == Species::Boson) {
    for (int r = 0; r < n; ++r) {
      sigma += schmidt.probabilities(r) *
               (schmidt.modes.row(r).transpose() * schmidt.modes.row(r).conjugate());
    }
    tau = sigma;
  } else {
    for (int j = 0; 2 * j + 1 < n; ++j) {
      const double w = 2.0 * schmidt.probabilities(2 * j);
      sigma += w * (schmidt.modes.row(2 * j).transpose() *
                    schmidt.modes.row(2 * j).conjugate());
      tau += w * (schmidt.modes.row(2 * j + 1).transpose() *
                  schmidt.modes.row(2 * j + 1).conjugate());
    }
  }
  return {ReducedDensity{std::move(sigma)}, ReducedDensity{std::move(tau)}};
}

double von_neumann_entropy(const RealVector& probabilities) {
  const RealVector p = checked_probabilities(probabilities, "von_neumann_entropy");
  double entropy = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (p(i) > 0.0) entropy -= p(i) * std::log(p(i));
  }
  return entropy;
}

double linear_entropy(const RealVector& probabilities) {
  const RealVector p = checked_probabilities(probabilities, "linear_entropy");
  return 1.0 - p.squaredNorm();
}

double linear_entropy(const TwoParticleState& state) {
  const ComplexMatrix gram = state.lambda().adjoint() * state.lambda();
  return 1.0 - gram.squaredNorm();  // Tr[(L†L)^2] = ||L†L||_F^2 for Hermitian L†L
}

TwoParticleState read_state(std::istream& in, const std::string& source, double norm_tol) {
  std::string line;
  int lineno = 0;
  Species species = Species::Boson;
  int dim = 0;
  bool have_header = false;
  while (!have_header && std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string species_tok;
    if (!(ls >> species_tok)) continue;  // blank or comment-only line
    if (species_tok == "boson") {
      species = Species::Boson;
    } else if (species_tok == "fermion") {
      species = Species::Fermion;
    } else {
      std::ostringstream os;
      os << source << ":" << lineno << ": expected species 'boson' or 'fermion', got '"
         << species_tok << "'";
      throw ValidationError(os.str());
    }
    if (!(ls >> dim) || dim < 1) {
      std::ostringstream os;
      os << source << ":" << lineno << ": expected a positive dimension after the species";
      throw ValidationError(os.str());
    }
    std::string extra;
    if (ls >> extra) {
      std::ostringstream os;
      os << source << ":" << lineno << ": unexpected token '" << extra
         << "' after the state header";
      throw ValidationError(os.str());
    }
    have_header = true;
  }
  if (!have_header) {
    throw ValidationError(source + ": missing 'species dim' header");
  }
  const ComplexMatrix lambda = read_matrix(in, source, lineno);
  if (lambda.rows() != dim || lambda.cols() != dim) {
    std::ostringstream os;
    os << source << ": matrix is " << lambda.rows() << "x" << lambda.cols()
       << " but the header declares dimension " << dim;
    throw ValidationError(os.str());
  }
  return TwoParticleState(species, lambda, norm_tol);
}

TwoParticleState read_state_file(const std::string& path, double norm_tol) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  return read_state(in, path, norm_tol);
}

void write_state(std::ostream& out, const TwoParticleState& state) {
  out << to_string(state.species()) << ' ' << state.dim() << '\n';
  write_matrix(out, state.lambda());
}

void write_state_file(const std::string& path, const TwoParticleState& state) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  write_state(out, state);
  if (!out.good()) throw IoError("failed while writing '" + path + "'");
}

}  // namespace identent
