#include "identent/matrix.hpp"

#include <Eigen/Eigenvalues>

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

namespace identent {

void require_finite(const ComplexMatrix& m, const std::string& context) {
  if (!m.allFinite()) {
    throw ValidationError(context + ": matrix contains NaN or Inf entries");
  }
}

void require_square(const ComplexMatrix& m, const std::string& context) {
  if (m.rows() == 0 || m.cols() == 0) {
    throw ValidationError(context + ": empty matrix");
  }
  if (m.rows() != m.cols()) {
    std::ostringstream os;
    os << context << ": expected a square matrix, got " << m.rows() << "x" << m.cols();
    throw ValidationError(os.str());
  }
}

HermitianEig hermitian_eig(const ComplexMatrix& h) {
  require_square(h, "hermitian_eig");
  require_finite(h, "hermitian_eig");
  const double scale = h.norm();
  if ((h - h.adjoint()).norm() > kSymmetryTol * scale) {
    throw ValidationError("hermitian_eig: matrix is not Hermitian within tolerance");
  }
  const ComplexMatrix hs = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hs);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("hermitian_eig: eigensolver failed to converge");
  }
  HermitianEig out{solver.eigenvalues(), solver.eigenvectors()};
  const double resid =
      (hs * out.eigenvectors - out.eigenvectors * out.eigenvalues.asDiagonal()).norm();
  if (resid > kResidualTol * std::max(scale, 1.0)) {
    throw std::runtime_error("hermitian_eig: residual exceeds tolerance");
  }
  return out;
}

double frobenius_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    std::ostringstream os;
    os << "frobenius_distance: shape mismatch " << a.rows() << "x" << a.cols() << " vs "
       << b.rows() << "x" << b.cols();
    throw ValidationError(os.str());
  }
  return (a - b).norm();
}

bool is_unitary(const ComplexMatrix& u, double tol) {
  require_square(u, "is_unitary");
  const ComplexMatrix gram = u.adjoint() * u;
  return (gram - ComplexMatrix::Identity(u.rows(), u.cols())).norm() <= tol;
}

namespace {

double parse_real_part(std::string_view text, std::string_view token) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);  // from_chars rejects '+'
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || !std::isfinite(value)) {
    throw ValidationError("invalid complex number '" + std::string(token) + "'");
  }
  return value;
}

std::string format_real(double x) {
  if (x == 0.0) x = 0.0;  // normalise -0
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

struct Token {
  std::string text;
  int line = 0;
};

// Strips comments and splits into whitespace-separated tokens with line numbers.
std::vector<Token> tokenize(std::istream& in, int line_offset) {
  std::vector<Token> tokens;
  std::string line;
  int lineno = line_offset;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) tokens.push_back({tok, lineno});
  }
  return tokens;
}

int parse_count(const Token& tok, const std::string& source, const char* what) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(tok.text.data(), tok.text.data() + tok.text.size(), value);
  if (ec != std::errc() || ptr != tok.text.data() + tok.text.size() || value < 1) {
    std::ostringstream os;
    os << source << ":" << tok.line << ": expected a positive " << what << ", got '"
       << tok.text << "'";
    throw ValidationError(os.str());
  }
  return value;
}

}  // namespace

Complex parse_complex(std::string_view token) {
  if (token.empty()) throw ValidationError("invalid complex number ''");
  if (token == "i" || token == "+i") return {0.0, 1.0};
  if (token == "-i") return {0.0, -1.0};

  if (token.back() == 'i') {
    std::string_view body = token.substr(0, token.size() - 1);
    // Locate the sign separating real and imaginary parts; signs that belong
    // to an exponent (preceded by e/E) or lead the token do not count.
    std::size_t split = std::string_view::npos;
    for (std::size_t k = body.size(); k-- > 1;) {
      const char c = body[k];
      if ((c == '+' || c == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
        split = k;
        break;
      }
    }
    if (split == std::string_view::npos) {
      return {0.0, parse_real_part(body, token)};
    }
    const double re = parse_real_part(body.substr(0, split), token);
    std::string_view imag = body.substr(split);
    if (imag == "+") return {re, 1.0};
    if (imag == "-") return {re, -1.0};
    return {re, parse_real_part(imag, token)};
  }
  return {parse_real_part(token, token), 0.0};
}

std::string format_complex(Complex z) {
  double im = z.imag();
  if (im == 0.0) im = 0.0;
  std::string out = format_real(z.real());
  if (im >= 0.0) out += '+';
  out += format_real(im);
  out += 'i';
  return out;
}

ComplexMatrix read_matrix(std::istream& in, const std::string& source, int line_offset) {
  const std::vector<Token> tokens = tokenize(in, line_offset);
  if (tokens.size() < 2) {
    throw ValidationError(source + ": missing 'rows cols' header");
  }
  const int rows = parse_count(tokens[0], source, "row count");
  const int cols = parse_count(tokens[1], source, "column count");
  const std::size_t expected = 2 + static_cast<std::size_t>(rows) * cols;
  if (tokens.size() < expected) {
    std::ostringstream os;
    os << source << ":" << tokens.back().line << ": expected " << rows * cols
       << " entries, got " << tokens.size() - 2;
    throw ValidationError(os.str());
  }
  if (tokens.size() > expected) {
    std::ostringstream os;
    os << source << ":" << tokens[expected].line << ": unexpected trailing token '"
       << tokens[expected].text << "'";
    throw ValidationError(os.str());
  }
  ComplexMatrix m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const Token& tok = tokens[2 + static_cast<std::size_t>(r) * cols + c];
      try {
        m(r, c) = parse_complex(tok.text);
      } catch (const ValidationError& e) {
        std::ostringstream os;
        os << source << ":" << tok.line << ": " << e.what();
        throw ValidationError(os.str());
      }
    }
  }
  require_finite(m, source);
  return m;
}

ComplexMatrix read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  return read_matrix(in, path);
}

void write_matrix(std::ostream& out, const ComplexMatrix& m) {
  out << m.rows() << ' ' << m.cols() << '\n';
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) out << ' ';
      out << format_complex(m(r, c));
    }
    out << '\n';
  }
}

void write_matrix_file(const std::string& path, const ComplexMatrix& m) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  write_matrix(out, m);
  if (!out.good()) throw IoError("failed while writing '" + path + "'");
}

}  // namespace identent
