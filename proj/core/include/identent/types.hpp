#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace identent {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Input violated a documented precondition (bad shape, broken symmetry,
/// unnormalized state, malformed text, ...).
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// A file could not be opened, read or written.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

enum class Species { Boson, Fermion };

inline const char* to_string(Species s) {
  return s == Species::Boson ? "boson" : "fermion";
}

// Relative tolerances shared across the library.
inline constexpr double kSymmetryTol = 1e-10;   // accepted (anti)symmetry defect
inline constexpr double kOrthoTol = 1e-10;      // unitarity of eigen/mode bases
inline constexpr double kResidualTol = 1e-10;   // eigen and factorization residuals
inline constexpr double kFactorTol = 1e-10;     // reconstruction of factorizations
inline constexpr double kNullTruncation = 1e-12;  // singular values zeroed below this * max
inline constexpr double kProbabilityFloor = -1e-12;  // most negative admissible probability

void require_finite(const ComplexMatrix& m, const std::string& context);
void require_square(const ComplexMatrix& m, const std::string& context);

}  // namespace identent
