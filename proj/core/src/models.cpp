#include "identent/models.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "identent/matrix.hpp"

namespace identent {

namespace {

Complex theta(int m, int sites) {
  const double angle = 2.0 * std::numbers::pi * m / sites;
  return {std::cos(angle), std::sin(angle)};
}

void check_momentum_label(int sites, int label, const char* name) {
  if (label < 1 || label > sites) {
    std::ostringstream os;
    os << "hubbard: momentum label " << name << "=" << label << " outside 1.." << sites;
    throw ValidationError(os.str());
  }
}

ComplexMatrix gram(const TwoParticleState& state) {
  return state.lambda().adjoint() * state.lambda();
}

}  // namespace

HubbardRing::HubbardRing(int sites) : sites_(sites) {
  if (sites_ < 3) throw ValidationError("HubbardRing: need at least 3 sites");
}

HoppingModel HubbardRing::model() const {
  ComplexMatrix t = ComplexMatrix::Zero(sites_, sites_);
  for (int j = 0; j < sites_; ++j) {
    t(j, (j + 1) % sites_) = 1.0;
    t((j + 1) % sites_, j) = 1.0;
  }
  return HoppingModel(std::move(t), -1);
}

ComplexMatrix HubbardRing::momentum_basis() const {
  ComplexMatrix v(sites_, sites_);
  const double norm = 1.0 / std::sqrt(static_cast<double>(sites_));
  for (int m = 0; m < sites_; ++m) {
    for (int r = 0; r < sites_; ++r) {
      v(m, r) = norm * theta((m + 1) * (r + 1), sites_);
    }
  }
  return v;
}

TwoParticleState HubbardRing::default_initial_state() const {
  return state_from_occupation(Species::Fermion, sites_, {{1, 2, Complex(1.0, 0.0)}});
}

TwoParticleState hubbard_eigenstate(int sites, int r, int s) {
  if (sites < 3) throw ValidationError("hubbard_eigenstate: need at least 3 sites");
  check_momentum_label(sites, r, "r");
  check_momentum_label(sites, s, "s");
  if (r == s) throw ValidationError("hubbard_eigenstate: labels r and s must differ");
  ComplexMatrix lambda(sites, sites);
  const double norm = 1.0 / (sites * std::numbers::sqrt2);
  for (int m = 1; m <= sites; ++m) {
    for (int n = 1; n <= sites; ++n) {
      lambda(m - 1, n - 1) = norm * (theta(m * r + n * s, sites) - theta(n * r + m * s, sites));
    }
  }
  return TwoParticleState(Species::Fermion, std::move(lambda), 1e-8);
}

double hubbard_pair_energy(int sites, int r, int s) {
  check_momentum_label(sites, r, "r");
  check_momentum_label(sites, s, "s");
  return -2.0 * theta(r, sites).real() - 2.0 * theta(s, sites).real();
}

CrossTrace hubbard_cross_trace(int sites, std::pair<int, int> first,
                               std::pair<int, int> second) {
  const auto [r, s] = first;
  const auto [rp, sp] = second;
  const TwoParticleState a = hubbard_eigenstate(sites, r, s);
  const TwoParticleState b = hubbard_eigenstate(sites, rp, sp);
  CrossTrace out;
  out.closed_form = 0.25 * ((s == sp) + (r == rp) + (r == sp) + (s == rp));
  out.direct = (gram(a) * gram(b)).trace().real();
  return out;
}

double hubbard_average_closed_form(int sites,
                                   const std::map<std::pair<int, int>, double>& weights) {
  double total = 0.0;
  std::vector<std::pair<std::array<int, 2>, double>> entries;
  for (const auto& [labels, weight] : weights) {
    const auto [r, s] = labels;
    check_momentum_label(sites, r, "r");
    check_momentum_label(sites, s, "s");
    if (r == s) throw ValidationError("hubbard_average_closed_form: labels must differ");
    if (weight < kProbabilityFloor) {
      throw ValidationError("hubbard_average_closed_form: negative weight");
    }
    entries.push_back({{std::min(r, s), std::max(r, s)}, std::max(weight, 0.0)});
    total += weight;
  }
  for (std::size_t i = 0; i < entries.size(); ++i) {
    for (std::size_t j = i + 1; j < entries.size(); ++j) {
      if (entries[i].first == entries[j].first) {
        throw ValidationError("hubbard_average_closed_form: duplicate label pair");
      }
    }
  }
  if (std::abs(total - 1.0) > 1e-8) {
    std::ostringstream os;
    os << "hubbard_average_closed_form: weights sum to " << total << ", expected 1";
    throw ValidationError(os.str());
  }
  double restricted = 0.0;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    for (std::size_t j = i + 1; j < entries.size(); ++j) {
      const auto& a = entries[i].first;
      const auto& b = entries[j].first;
      const bool disjoint =
          a[0] != b[0] && a[0] != b[1] && a[1] != b[0] && a[1] != b[1];
      if (disjoint) restricted += entries[i].second * entries[j].second;
    }
  }
  return 0.5 + restricted;
}

InfiniteRangeBoseModel::InfiniteRangeBoseModel(int sites, double eps)
    : sites_(sites), eps_(eps) {
  if (sites_ < 3) throw ValidationError("InfiniteRangeBoseModel: need at least 3 sites");
  if (!(eps_ > 0.0)) {
    throw ValidationError("InfiniteRangeBoseModel: eps must be positive");
  }
}

HoppingModel InfiniteRangeBoseModel::model() const {
  ComplexMatrix t = ComplexMatrix::Constant(sites_, sites_, Complex(eps_, 0.0));
  t.diagonal().setConstant(Complex(1.0 - (sites_ - 1) * eps_, 0.0));
  return HoppingModel(std::move(t), +1);
}

TwoParticleState InfiniteRangeBoseModel::default_initial_state() const {
  return state_from_occupation(Species::Boson, sites_, {{1, 2, Complex(1.0, 0.0)}});
}

BoseSpectrumFacts bose_model_spectrum_facts(int sites, double eps) {
  const InfiniteRangeBoseModel bose(sites, eps);
  const HoppingModel model = bose.model();
  const HermitianEig eig = hermitian_eig(model.hopping());

  BoseSpectrumFacts facts;
  facts.ground_energy = 1.0 - sites * eps;
  facts.top_energy = 1.0;
  facts.ground_multiplicity = sites - 1;

  double worst = 0.0;
  for (int j = 0; j + 1 < sites; ++j) {
    worst = std::max(worst, std::abs(eig.eigenvalues(j) - facts.ground_energy));
  }
  worst = std::max(worst, std::abs(eig.eigenvalues(sites - 1) - 1.0));

  const ComplexVector uniform =
      ComplexVector::Constant(sites, Complex(1.0 / std::sqrt(static_cast<double>(sites)), 0.0));
  facts.uniform_mode_overlap = std::abs(uniform.dot(eig.eigenvectors.col(sites - 1)));
  worst = std::max(worst, std::abs(facts.uniform_mode_overlap - 1.0));

  const SpectralDecomposition spectrum = two_particle_spectrum(model, Species::Boson);
  if (spectrum.levels().size() != 3) {
    std::ostringstream os;
    os << "bose_model_spectrum_facts: expected 3 two-particle levels, found "
       << spectrum.levels().size();
    throw ValidationError(os.str());
  }
  const std::array<double, 3> expected = {2.0 * (1.0 - sites * eps), (1.0 - sites * eps) + 1.0,
                                          2.0};
  for (int l = 0; l < 3; ++l) {
    facts.two_particle_energies[l] = spectrum.levels()[l].energy;
    worst = std::max(worst, std::abs(facts.two_particle_energies[l] - expected[l]));
  }
  facts.max_deviation = worst;
  if (worst > 1e-10) {
    throw ValidationError("bose_model_spectrum_facts: spectrum deviates from the closed form");
  }
  return facts;
}

BoseClosedForm bose_average_closed_form(int sites) {
  if (sites < 3) throw ValidationError("bose_average_closed_form: need at least 3 sites");
  const double n = sites;
  BoseClosedForm out;
  out.p00 = 2.0 / (n * n);
  out.p11 = (1.0 - 1.0 / n) * (1.0 - 1.0 / n) + 1.0 / (n * n);
  out.p01 = (2.0 / n) * (1.0 - 2.0 / n);
  out.s1_sigma = 0.5 + 1.0 / n - 2.0 / (n * n);
  out.delta = 0.5 + 2.0 / n - 8.0 / (n * n) + 16.0 / (n * n * n) - 16.0 / (n * n * n * n);
  const double q = 1.0 - 2.0 / n;
  out.avg_e1 = 0.5 + (4.0 / (n * n)) * q * q;
  return out;
}

namespace {

double parse_double_field(const std::string& value, const std::string& spec) {
  double out = 0.0;
  const char* first = value.data();
  const char* last = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last) {
    throw ValidationError("model spec '" + spec + "': invalid number '" + value + "'");
  }
  return out;
}

int parse_int_field(const std::string& value, const std::string& spec) {
  int out = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw ValidationError("model spec '" + spec + "': invalid integer '" + value + "'");
  }
  return out;
}

}  // namespace

ModelDescription parse_model_spec(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) {
    throw ValidationError("model spec '" + spec + "': expected '<name>:N=<n>[,...]'");
  }
  const std::string name = spec.substr(0, colon);
  if (name != "hubbard" && name != "bose") {
    throw ValidationError("model spec '" + spec + "': unknown model '" + name + "'");
  }

  int sites = 0;
  bool have_sites = false;
  double eps = 0.1;
  std::istringstream fields(spec.substr(colon + 1));
  std::string field;
  while (std::getline(fields, field, ',')) {
    const auto equals = field.find('=');
    if (equals == std::string::npos) {
      throw ValidationError("model spec '" + spec + "': expected key=value, got '" + field + "'");
    }
    const std::string key = field.substr(0, equals);
    const std::string value = field.substr(equals + 1);
    if (key == "N") {
      sites = parse_int_field(value, spec);
      have_sites = true;
    } else if (key == "eps" && name == "bose") {
      eps = parse_double_field(value, spec);
    } else {
      throw ValidationError("model spec '" + spec + "': unknown key '" + key + "'");
    }
  }
  if (!have_sites) {
    throw ValidationError("model spec '" + spec + "': missing N=<sites>");
  }

  if (name == "hubbard") {
    HubbardRing ring(sites);
    return ModelDescription{name,          Species::Fermion,
                            sites,         0.0,
                            ring.model(),  ring.default_initial_state(),
                            ring.momentum_basis()};
  }
  InfiniteRangeBoseModel bose(sites, eps);
  return ModelDescription{name,         Species::Boson,
                          sites,        eps,
                          bose.model(), bose.default_initial_state(),
                          std::nullopt};
}

}  // namespace identent
