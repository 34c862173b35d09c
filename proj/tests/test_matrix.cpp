#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <sstream>

#include "identent/matrix.hpp"
#include "support/test_support.hpp"

using namespace identent;
using test_support::random_complex;
using test_support::random_hermitian;
using test_support::random_unitary;

namespace {

// Closed-form eigenvalues of a 2x2 Hermitian matrix [[a, b], [conj(b), d]].
std::pair<double, double> eig2_hermitian(double a, Complex b, double d) {
  const double mid = 0.5 * (a + d);
  const double w = std::sqrt(0.25 * (a - d) * (a - d) + std::norm(b));
  return {mid - w, mid + w};
}

}  // namespace

TEST_CASE("hermitian_eig identity") {
  const HermitianEig eig = hermitian_eig(ComplexMatrix::Identity(2, 2));
  CHECK(eig.eigenvalues(0) == Catch::Approx(1.0));
  CHECK(eig.eigenvalues(1) == Catch::Approx(1.0));
  CHECK(is_unitary(eig.eigenvectors, 1e-10));
}

TEST_CASE("hermitian_eig pauli x") {
  ComplexMatrix h(2, 2);
  h << 0, 1, 1, 0;
  const HermitianEig eig = hermitian_eig(h);
  CHECK(eig.eigenvalues(0) == Catch::Approx(-1.0).margin(1e-14));
  CHECK(eig.eigenvalues(1) == Catch::Approx(1.0).margin(1e-14));
}

TEST_CASE("hermitian_eig of M†M for M = [[i,i],[i,1]]") {
  ComplexMatrix m(2, 2);
  m << Complex(0, 1), Complex(0, 1), Complex(0, 1), Complex(1, 0);
  const ComplexMatrix h = m.adjoint() * m;
  // Independent 2x2 oracle on the product [[2, 1-i], [1+i, 2]].
  REQUIRE((h(0, 0) - Complex(2, 0)).real() == Catch::Approx(0.0).margin(1e-15));
  REQUIRE(std::abs(h(0, 1) - Complex(1, -1)) == Catch::Approx(0.0).margin(1e-15));
  const auto [lo, hi] = eig2_hermitian(h(0, 0).real(), h(0, 1), h(1, 1).real());
  CHECK(lo == Catch::Approx(2.0 - std::numbers::sqrt2).margin(1e-13));
  CHECK(hi == Catch::Approx(2.0 + std::numbers::sqrt2).margin(1e-13));

  const HermitianEig eig = hermitian_eig(h);
  CHECK(eig.eigenvalues(0) == Catch::Approx(lo).margin(1e-12));
  CHECK(eig.eigenvalues(1) == Catch::Approx(hi).margin(1e-12));
}

TEST_CASE("hermitian_eig rejects bad input") {
  CHECK_THROWS_AS(hermitian_eig(ComplexMatrix::Zero(2, 3)), ValidationError);
  ComplexMatrix h(2, 2);
  h << 1, Complex(0, 1), Complex(0, 1), 1;  // symmetric, not Hermitian
  CHECK_THROWS_AS(hermitian_eig(h), ValidationError);
  ComplexMatrix bad = ComplexMatrix::Identity(2, 2);
  bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(hermitian_eig(bad), ValidationError);
}

TEST_CASE("hermitian_eig properties on random matrices") {
  std::mt19937_64 rng(202401);
  for (const int n : {2, 3, 8, 17, 64}) {
    const ComplexMatrix h = random_hermitian(n, rng);
    const HermitianEig eig = hermitian_eig(h);
    for (int i = 1; i < n; ++i) REQUIRE(eig.eigenvalues(i) >= eig.eigenvalues(i - 1));
    REQUIRE(is_unitary(eig.eigenvectors, 1e-10));
    const ComplexMatrix rec = eig.eigenvectors *
                              eig.eigenvalues.asDiagonal().toDenseMatrix().cast<Complex>() *
                              eig.eigenvectors.adjoint();
    REQUIRE((h - rec).norm() <= 1e-10 * h.norm());
    REQUIRE(std::abs(h.trace().real() - eig.eigenvalues.sum()) <= 1e-10 * h.norm());

    // Spectrum is invariant under a unitary change of basis.
    const ComplexMatrix w = random_unitary(n, rng);
    const HermitianEig rotated = hermitian_eig(w.adjoint() * h * w);
    REQUIRE((rotated.eigenvalues - eig.eigenvalues).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("frobenius_distance") {
  CHECK(frobenius_distance(ComplexMatrix::Identity(2, 2), ComplexMatrix::Identity(2, 2)) == 0.0);
  CHECK(frobenius_distance(ComplexMatrix::Identity(2, 2), ComplexMatrix::Zero(2, 2)) ==
        Catch::Approx(std::numbers::sqrt2));
  ComplexMatrix a(1, 1), b(1, 1);
  a << Complex(0, 1);
  b << Complex(0, -1);
  CHECK(frobenius_distance(a, b) == Catch::Approx(2.0));
  CHECK_THROWS_AS(frobenius_distance(a, ComplexMatrix::Zero(2, 2)), ValidationError);
}

TEST_CASE("is_unitary") {
  CHECK(is_unitary(ComplexMatrix::Identity(3, 3), 1e-12));
  CHECK_FALSE(is_unitary(2.0 * ComplexMatrix::Identity(2, 2), 1e-12));
  CHECK_THROWS_AS(is_unitary(ComplexMatrix::Zero(2, 3), 1e-12), ValidationError);

  ComplexMatrix u(2, 2);  // the unitary Takagi factor of [[i,i],[i,1]]
  u << Complex(0.5, 0.5), Complex(-std::numbers::sqrt2 / 2, 0), Complex(0.5, 0.5),
      Complex(std::numbers::sqrt2 / 2, 0);
  CHECK(is_unitary(u, 1e-12));
}

TEST_CASE("complex token parsing") {
  CHECK(parse_complex("1") == Complex(1, 0));
  CHECK(parse_complex("-2.5") == Complex(-2.5, 0));
  CHECK(parse_complex("i") == Complex(0, 1));
  CHECK(parse_complex("-i") == Complex(0, -1));
  CHECK(parse_complex("+3i") == Complex(0, 3));
  CHECK(parse_complex("0.5-0.5i") == Complex(0.5, -0.5));
  CHECK(parse_complex("1e-3+2e4i") == Complex(1e-3, 2e4));
  CHECK(parse_complex("-1.5e+2-3e-1i") == Complex(-150, -0.3));
  CHECK(parse_complex("2-i") == Complex(2, -1));
  CHECK_THROWS_AS(parse_complex("1+2"), ValidationError);
  CHECK_THROWS_AS(parse_complex("abc"), ValidationError);
  CHECK_THROWS_AS(parse_complex("1+2ii"), ValidationError);
  CHECK_THROWS_AS(parse_complex(""), ValidationError);
  CHECK_THROWS_AS(parse_complex("nan"), ValidationError);
}

TEST_CASE("matrix text round trip") {
  std::mt19937_64 rng(7);
  const ComplexMatrix m = random_complex(4, 3, rng);
  std::stringstream buffer;
  write_matrix(buffer, m);
  const ComplexMatrix back = read_matrix(buffer, "buffer");
  REQUIRE(back.rows() == 4);
  REQUIRE(back.cols() == 3);
  CHECK((m - back).norm() <= 1e-11 * m.norm());
}

TEST_CASE("matrix text format accepts comments and reports line numbers") {
  {
    std::istringstream in("# header comment\n2 2\n1+0i 0-1i # trailing comment\n\n2 0.5-0.5i\n");
    const ComplexMatrix m = read_matrix(in, "mem");
    CHECK(m(0, 1) == Complex(0, -1));
    CHECK(m(1, 1) == Complex(0.5, -0.5));
  }
  {
    std::istringstream in("2 2\n1 2\n3 oops\n");
    try {
      read_matrix(in, "mem");
      FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
      CHECK(std::string(e.what()).find("mem:3") != std::string::npos);
    }
  }
  {
    std::istringstream in("2 2\n1 2 3\n");
    CHECK_THROWS_AS(read_matrix(in, "mem"), ValidationError);
  }
  {
    std::istringstream in("2 2\n1 2 3 4 5\n");
    CHECK_THROWS_AS(read_matrix(in, "mem"), ValidationError);
  }
  {
    std::istringstream in("0 2\n");
    CHECK_THROWS_AS(read_matrix(in, "mem"), ValidationError);
  }
  {
    std::istringstream in("");
    CHECK_THROWS_AS(read_matrix(in, "mem"), ValidationError);
  }
}

TEST_CASE("read_matrix_file reports missing files") {
  CHECK_THROWS_AS(read_matrix_file("/nonexistent/matrix.txt"), IoError);
}
