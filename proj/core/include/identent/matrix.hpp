#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "identent/types.hpp"

namespace identent {

/// Result of diagonalising a Hermitian matrix: H = V diag(lambda) V†,
/// eigenvalues ascending, eigenvector columns orthonormal.
struct HermitianEig {
  RealVector eigenvalues;
  ComplexMatrix eigenvectors;
};

/// Diagonalise a Hermitian matrix. The input may deviate from exact
/// Hermiticity by at most kSymmetryTol * ||H||_F; it is symmetrised as
/// (H + H†)/2 before solving. Throws ValidationError on non-square input
/// or a Hermiticity defect beyond tolerance.
HermitianEig hermitian_eig(const ComplexMatrix& h);

/// ||A - B||_F. Throws ValidationError on shape mismatch.
double frobenius_distance(const ComplexMatrix& a, const ComplexMatrix& b);

/// True iff ||U†U - I||_F <= tol. Throws ValidationError on non-square input.
bool is_unitary(const ComplexMatrix& u, double tol);

// ---------------------------------------------------------------------------
// Text format: first line "rows cols", then rows*cols whitespace-separated
// complex entries of the form "a+bi" (e.g. "0.5-0.5i"). '#' starts a comment.
// ---------------------------------------------------------------------------

/// Parse one complex token ("1", "-2.5i", "0.5-0.5i", "i", "1e-3+2e4i").
Complex parse_complex(std::string_view token);

/// Format a complex number as "a+bi" with 12 significant digits.
std::string format_complex(Complex z);

/// Read a matrix in text format. `source` names the stream in error messages;
/// errors carry the offending line number, counted from line_offset + 1 (for
/// embedding the format inside a larger file).
ComplexMatrix read_matrix(std::istream& in, const std::string& source, int line_offset = 0);
ComplexMatrix read_matrix_file(const std::string& path);

void write_matrix(std::ostream& out, const ComplexMatrix& m);
void write_matrix_file(const std::string& path, const ComplexMatrix& m);

}  // namespace identent
