// identent — generalized Schmidt decomposition and averaged entanglement of
// two-identical-particle states.
//
// Commands (via --command):
//   decompose     Schmidt probabilities and entropies of a state
//   evolve        E1 trajectory under a hopping model, CSV output
//   average       phase-ensemble averaged linear entropy report
//   model-report  closed-form vs engine comparison for a reference model
//   mc-check      Monte-Carlo phase average vs the closed expression
//
// Exit codes: 0 success, 1 I/O failure, 2 validation failure.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "identent/dynamics.hpp"
#include "identent/fock.hpp"
#include "identent/matrix.hpp"
#include "identent/models.hpp"

namespace {

using namespace identent;

constexpr double kStateNormTol = 1e-6;

struct RunConfig {
  std::string command;
  std::string state_path;
  std::string model_spec;
  double t0 = 0.0;
  double t1 = 10.0;
  long steps = 101;
  long samples = 100000;
  std::uint64_t seed = 12345;
  bool nondegenerate = false;
  std::string out_path;
};

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

double report_tolerance() {
  if (const char* env = std::getenv("IDENT_ENTANGLE_TOL")) {
    try {
      return std::stod(env);
    } catch (...) {
      throw ValidationError(std::string("IDENT_ENTANGLE_TOL is not a number: '") + env + "'");
    }
  }
  return 1e-10;
}

std::ostream& open_output(std::ofstream& file, const std::string& path) {
  if (path.empty()) return std::cout;
  file.open(path);
  if (!file) throw IoError("cannot open '" + path + "' for writing");
  return file;
}

// Key-value config file; '#' comments. Flags win on conflict, so values here
// only fill options the command line left untouched.
void apply_config_file(const std::string& path, const CLI::App& app, RunConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string entry;
    if (!(ls >> entry)) continue;
    const auto eq = entry.find('=');
    if (eq == std::string::npos || eq == 0) {
      std::ostringstream os;
      os << path << ":" << lineno << ": expected key=value, got '" << entry << "'";
      throw ValidationError(os.str());
    }
    kv[entry.substr(0, eq)] = entry.substr(eq + 1);
  }
  auto unset = [&app](const std::string& flag) { return app.count(flag) == 0; };
  auto take = [&kv](const char* key) -> std::optional<std::string> {
    auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    return it->second;
  };
  try {
    if (auto v = take("command"); v && unset("--command")) cfg.command = *v;
    if (auto v = take("state"); v && unset("--state")) cfg.state_path = *v;
    if (auto v = take("model"); v && unset("--model")) cfg.model_spec = *v;
    if (auto v = take("t0"); v && unset("--t0")) cfg.t0 = std::stod(*v);
    if (auto v = take("t1"); v && unset("--t1")) cfg.t1 = std::stod(*v);
    if (auto v = take("steps"); v && unset("--steps")) cfg.steps = std::stol(*v);
    if (auto v = take("samples"); v && unset("--samples")) cfg.samples = std::stol(*v);
    if (auto v = take("seed"); v && unset("--seed")) cfg.seed = std::stoull(*v);
    if (auto v = take("nondegenerate"); v && unset("--nondegenerate")) {
      cfg.nondegenerate = (*v == "1" || *v == "true" || *v == "yes");
    }
    if (auto v = take("out"); v && unset("--out")) cfg.out_path = *v;
  } catch (const std::invalid_argument&) {
    throw ValidationError("config file '" + path + "': malformed numeric value");
  } catch (const std::out_of_range&) {
    throw ValidationError("config file '" + path + "': numeric value out of range");
  }
}

std::optional<ModelDescription> load_model(const RunConfig& cfg) {
  if (cfg.model_spec.empty()) return std::nullopt;
  return parse_model_spec(cfg.model_spec);
}

TwoParticleState load_state(const RunConfig& cfg, const std::optional<ModelDescription>& model) {
  if (!cfg.state_path.empty()) {
    return read_state_file(cfg.state_path, kStateNormTol);
  }
  if (model) return model->initial_state;
  throw ValidationError("no state source: pass --state <file> or --model <spec>");
}

SpectralDecomposition make_spectrum(const RunConfig& cfg, const ModelDescription& model,
                                    const TwoParticleState& state) {
  SpectrumOptions options;
  options.nondegenerate = cfg.nondegenerate;
  options.one_particle_basis = model.preferred_basis;
  return two_particle_spectrum(model.model, state.species(), options);
}

const ModelDescription& require_model(const std::optional<ModelDescription>& model,
                                      const char* command) {
  if (!model) {
    throw ValidationError(std::string(command) + " requires --model <spec>");
  }
  return *model;
}

int run_decompose(const RunConfig& cfg, const std::optional<ModelDescription>& model) {
  const TwoParticleState state = load_state(cfg, model);
  const SchmidtDecomposition schmidt = schmidt_decompose(state);
  const double vn = von_neumann_entropy(schmidt.probabilities);
  const double e1 = linear_entropy(state);

  std::cout << "species = " << to_string(state.species()) << "\n";
  std::cout << "dim = " << state.dim() << "\n";
  std::cout << "p =";
  for (Eigen::Index i = 0; i < schmidt.probabilities.size(); ++i) {
    std::cout << (i ? ", " : " ") << fmt(schmidt.probabilities(i));
  }
  std::cout << "\nE = " << fmt(vn) << "\n";
  std::cout << "E1 = " << fmt(e1) << "\n";

  if (!cfg.out_path.empty()) {
    write_matrix_file(cfg.out_path, schmidt.modes);
    // Reconstruction from the decomposition, re-readable as a state file.
    const int n = state.dim();
    ComplexMatrix rec = ComplexMatrix::Zero(n, n);
    if (state.species() == Species::Boson) {
      rec = schmidt.modes.transpose() *
            schmidt.probabilities.cwiseSqrt().cast<Complex>().asDiagonal() * schmidt.modes;
    } else {
      for (int j = 0; 2 * j + 1 < n; ++j) {
        const ComplexVector u = schmidt.modes.row(2 * j).transpose();
        const ComplexVector v = schmidt.modes.row(2 * j + 1).transpose();
        rec += std::sqrt(schmidt.probabilities(2 * j)) *
               (u * v.transpose() - v * u.transpose());
      }
    }
    std::ofstream recon;
    const std::string recon_path = cfg.out_path + ".state";
    open_output(recon, recon_path);
    recon << "# reconstruction from the generalized Schmidt decomposition\n";
    write_state(recon, TwoParticleState(state.species(), rec));
    if (!recon.good()) throw IoError("failed while writing '" + recon_path + "'");
  }
  return 0;
}

int run_evolve(const RunConfig& cfg, const std::optional<ModelDescription>& model) {
  const ModelDescription& m = require_model(model, "evolve");
  const TwoParticleState state = load_state(cfg, model);
  if (cfg.steps < 1) throw ValidationError("evolve requires --steps >= 1");
  const SpectralDecomposition spectrum = make_spectrum(cfg, m, state);

  std::vector<double> times(cfg.steps);
  for (long k = 0; k < cfg.steps; ++k) {
    times[k] = cfg.steps == 1
                   ? cfg.t0
                   : cfg.t0 + (cfg.t1 - cfg.t0) * static_cast<double>(k) / (cfg.steps - 1);
  }
  const auto trajectory = e1_trajectory(state, spectrum, times);

  std::ofstream file;
  std::ostream& out = open_output(file, cfg.out_path);
  out << "t,E1\n";
  for (const auto& [t, e1] : trajectory) {
    out << fmt(t) << ',' << fmt(e1) << '\n';
  }
  if (!out.good()) throw IoError("failed while writing the trajectory");
  return 0;
}

void print_average_report(std::ostream& out, const AverageReport& report) {
  out << "avg_E1=" << fmt(report.avg_e1) << "\n";
  out << "S1_sigma=" << fmt(report.s1_sigma) << "\n";
  out << "S1_tau=" << fmt(report.s1_tau) << "\n";
  out << "delta=" << fmt(report.delta) << "\n";
  for (const auto& [energy, weight] : report.level_weights) {
    out << "level " << fmt(energy) << ' ' << fmt(weight) << "\n";
  }
}

int run_average(const RunConfig& cfg, const std::optional<ModelDescription>& model) {
  const ModelDescription& m = require_model(model, "average");
  const TwoParticleState state = load_state(cfg, model);
  const SpectralDecomposition spectrum = make_spectrum(cfg, m, state);
  const AverageReport report = average_entanglement(state, spectrum);
  std::ofstream file;
  std::ostream& out = open_output(file, cfg.out_path);
  print_average_report(out, report);
  if (!out.good()) throw IoError("failed while writing the report");
  return 0;
}

void comparison_row(std::ostream& out, const char* name, double expected, double got,
                    double tol, bool& all_ok) {
  const double diff = std::abs(expected - got);
  const bool ok = diff <= tol;
  all_ok = all_ok && ok;
  out << name << " expected=" << fmt(expected) << " engine=" << fmt(got)
      << " diff=" << fmt(diff) << (ok ? " ok" : " FAIL") << "\n";
}

int run_model_report(const RunConfig& cfg, const std::optional<ModelDescription>& model) {
  const ModelDescription& m = require_model(model, "model-report");
  const double tol = report_tolerance();
  std::ofstream file;
  std::ostream& out = open_output(file, cfg.out_path);
  bool all_ok = true;

  if (m.name == "bose") {
    const BoseClosedForm closed = bose_average_closed_form(m.sites);
    const BoseSpectrumFacts facts = bose_model_spectrum_facts(m.sites, m.eps);
    const SpectralDecomposition spectrum =
        two_particle_spectrum(m.model, Species::Boson, {});
    const AverageReport report = average_entanglement(m.initial_state, spectrum);
    out << "model bose N=" << m.sites << " eps=" << fmt(m.eps) << "\n";
    out << "spectrum_deviation=" << fmt(facts.max_deviation) << "\n";
    comparison_row(out, "p11", closed.p11, report.level_weights.at(0).second, tol, all_ok);
    comparison_row(out, "p01", closed.p01, report.level_weights.at(1).second, tol, all_ok);
    comparison_row(out, "p00", closed.p00, report.level_weights.at(2).second, tol, all_ok);
    comparison_row(out, "S1_sigma", closed.s1_sigma, report.s1_sigma, tol, all_ok);
    comparison_row(out, "delta", closed.delta, report.delta, tol, all_ok);
    comparison_row(out, "avg_E1", closed.avg_e1, report.avg_e1, tol, all_ok);
  } else {
    out << "model hubbard N=" << m.sites << "\n";
    const HoppingModel ring = m.model;
    double worst_residual = 0.0;
    double worst_e1 = 0.0;
    double worst_entropy = 0.0;
    for (int r = 1; r <= m.sites; ++r) {
      for (int s = 1; s <= m.sites; ++s) {
        if (r == s) continue;
        const TwoParticleState psi = hubbard_eigenstate(m.sites, r, s);
        const double energy = hubbard_pair_energy(m.sites, r, s);
        const ComplexMatrix& t = ring.hopping();
        const ComplexMatrix& lam = psi.lambda();
        worst_residual =
            std::max(worst_residual, (t * lam + lam * t + energy * lam).norm());
        worst_e1 = std::max(worst_e1, std::abs(linear_entropy(psi) - 0.5));
        const double vn = von_neumann_entropy(schmidt_decompose(psi).probabilities);
        worst_entropy = std::max(worst_entropy, std::abs(vn - std::numbers::ln2));
      }
    }
    comparison_row(out, "eigenrelation_residual", 0.0, worst_residual, tol, all_ok);
    comparison_row(out, "E1_minus_half", 0.0, worst_e1, tol, all_ok);
    comparison_row(out, "entropy_minus_ln2", 0.0, worst_entropy, tol, all_ok);

    double worst_cross = 0.0;
    if (m.sites <= 10) {
      for (int r = 1; r <= m.sites; ++r) {
        for (int s = r + 1; s <= m.sites; ++s) {
          for (int rp = 1; rp <= m.sites; ++rp) {
            for (int sp = rp + 1; sp <= m.sites; ++sp) {
              const CrossTrace cross = hubbard_cross_trace(m.sites, {r, s}, {rp, sp});
              worst_cross = std::max(worst_cross,
                                     std::abs(cross.closed_form - cross.direct));
            }
          }
        }
      }
      comparison_row(out, "cross_trace", 0.0, worst_cross, tol, all_ok);
    }

    // Uniform weights over all momentum pairs vs the engine in
    // nondegenerate mode.
    std::map<std::pair<int, int>, double> weights;
    const int pair_count = m.sites * (m.sites - 1) / 2;
    ComplexMatrix lambda = ComplexMatrix::Zero(m.sites, m.sites);
    for (int r = 1; r <= m.sites; ++r) {
      for (int s = r + 1; s <= m.sites; ++s) {
        weights[{r, s}] = 1.0 / pair_count;
        lambda += std::sqrt(1.0 / pair_count) * hubbard_eigenstate(m.sites, r, s).lambda();
      }
    }
    const TwoParticleState mixed(Species::Fermion, lambda);
    SpectrumOptions options;
    options.nondegenerate = true;
    options.one_particle_basis = m.preferred_basis;
    const SpectralDecomposition spectrum =
        two_particle_spectrum(ring, Species::Fermion, options);
    const AverageReport engine = average_entanglement(mixed, spectrum);
    const double closed = hubbard_average_closed_form(m.sites, weights);
    comparison_row(out, "avg_E1_uniform_weights", closed, engine.avg_e1, tol, all_ok);
  }
  out << (all_ok ? "RESULT ok" : "RESULT FAIL") << "\n";
  if (!out.good()) throw IoError("failed while writing the report");
  return 0;
}

int run_mc_check(const RunConfig& cfg, const std::optional<ModelDescription>& model) {
  const ModelDescription& m = require_model(model, "mc-check");
  if (cfg.samples < 1) throw ValidationError("mc-check requires --samples >= 1");
  const TwoParticleState state = load_state(cfg, model);
  const SpectralDecomposition spectrum = make_spectrum(cfg, m, state);
  const AverageReport report = average_entanglement(state, spectrum);
  const McEstimate mc = monte_carlo_phase_average(state, spectrum, cfg.samples, cfg.seed);

  std::ofstream file;
  std::ostream& out = open_output(file, cfg.out_path);
  const double diff = std::abs(mc.mean - report.avg_e1);
  out << "mc_mean=" << fmt(mc.mean) << "\n";
  out << "mc_stderr=" << fmt(mc.std_error) << "\n";
  out << "avg_E1=" << fmt(report.avg_e1) << "\n";
  out << "diff=" << fmt(diff) << "\n";
  out << "within_3_stderr=" << (diff <= 3.0 * mc.std_error ? "yes" : "no") << "\n";
  if (!out.good()) throw IoError("failed while writing the report");
  return 0;
}

int dispatch(const RunConfig& cfg) {
  const std::optional<ModelDescription> model = load_model(cfg);
  if (cfg.command == "decompose") return run_decompose(cfg, model);
  if (cfg.command == "evolve") return run_evolve(cfg, model);
  if (cfg.command == "average") return run_average(cfg, model);
  if (cfg.command == "model-report") return run_model_report(cfg, model);
  if (cfg.command == "mc-check") return run_mc_check(cfg, model);
  throw ValidationError("unknown command '" + cfg.command +
                        "' (expected decompose|evolve|average|model-report|mc-check)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Schmidt decomposition and averaged entanglement of two identical particles"};
  RunConfig cfg;
  std::string config_path;

  app.add_option("--command", cfg.command,
                 "decompose|evolve|average|model-report|mc-check");
  app.add_option("--state", cfg.state_path, "state file (species dim header + matrix)");
  app.add_option("--model", cfg.model_spec, "hubbard:N=<n> or bose:N=<n>[,eps=<e>]");
  app.add_option("--t0", cfg.t0, "trajectory start time");
  app.add_option("--t1", cfg.t1, "trajectory stop time");
  app.add_option("--steps", cfg.steps, "number of trajectory samples");
  app.add_option("--samples", cfg.samples, "Monte-Carlo sample count");
  app.add_option("--seed", cfg.seed, "Monte-Carlo RNG seed");
  app.add_flag("--nondegenerate", cfg.nondegenerate,
               "treat every product eigenvector as its own level");
  app.add_option("--out", cfg.out_path, "output file (stdout when omitted)");
  app.add_option("--config", config_path, "key=value config file; flags win on conflict");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (!config_path.empty()) apply_config_file(config_path, app, cfg);
    if (cfg.command.empty()) {
      throw ValidationError("missing --command (decompose|evolve|average|model-report|mc-check)");
    }
    return dispatch(cfg);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}
