#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "identent/factorizations.hpp"
#include "identent/matrix.hpp"
#include "support/test_support.hpp"

using namespace identent;
using test_support::random_antisymmetric;
using test_support::random_symmetric;
using test_support::random_unitary;

namespace {

ComplexMatrix takagi_reconstruction(const TakagiResult& result) {
  return result.U.transpose() * result.d.asDiagonal().toDenseMatrix().cast<Complex>() *
         result.U;
}

ComplexMatrix antisym_reconstruction(const AntisymCanonical& result) {
  const Eigen::Index n = result.U.rows();
  ComplexMatrix rec = ComplexMatrix::Zero(n, n);
  for (Eigen::Index j = 0; j < result.z.size(); ++j) {
    const ComplexVector u = result.U.row(2 * j).transpose();
    const ComplexVector v = result.U.row(2 * j + 1).transpose();
    rec += result.z(j) * (u * v.transpose() - v * u.transpose());
  }
  return rec;
}

}  // namespace

TEST_CASE("takagi of a nonnegative diagonal matrix") {
  ComplexMatrix m(2, 2);
  m << 3, 0, 0, 1;
  const TakagiResult result = takagi(m);
  CHECK(result.d(0) == Catch::Approx(3.0));
  CHECK(result.d(1) == Catch::Approx(1.0));
  CHECK(is_unitary(result.U, 1e-10));
  CHECK((takagi_reconstruction(result) - m).norm() <= 1e-12);
}

TEST_CASE("takagi of the non-normal matrix [[i,i],[i,1]]") {
  ComplexMatrix m(2, 2);
  m << Complex(0, 1), Complex(0, 1), Complex(0, 1), Complex(1, 0);
  const TakagiResult result = takagi(m);
  // Oracle: singular values are the square roots of the M†M eigenvalues
  // 2 ± sqrt(2), computed from the 2x2 characteristic polynomial.
  CHECK(result.d(0) == Catch::Approx(std::sqrt(2.0 + std::numbers::sqrt2)).margin(1e-12));
  CHECK(result.d(1) == Catch::Approx(std::sqrt(2.0 - std::numbers::sqrt2)).margin(1e-12));
  CHECK(is_unitary(result.U, 1e-10));
  CHECK((takagi_reconstruction(result) - m).norm() <= 1e-10 * m.norm());
}

TEST_CASE("takagi reconstructs random symmetric matrices") {
  std::mt19937_64 rng(31);
  const ComplexMatrix m = random_symmetric(8, rng);
  const TakagiResult result = takagi(m);
  CHECK((takagi_reconstruction(result) - m).norm() <= 1e-10 * m.norm());
}

TEST_CASE("takagi properties across sizes") {
  std::mt19937_64 rng(32);
  for (const int n : {1, 2, 3, 5, 8, 16, 33}) {
    const ComplexMatrix m = random_symmetric(n, rng);
    const TakagiResult result = takagi(m);
    REQUIRE(result.d.size() == n);
    for (int i = 0; i + 1 < n; ++i) REQUIRE(result.d(i) >= result.d(i + 1));
    REQUIRE(result.d.minCoeff() >= 0.0);
    REQUIRE(is_unitary(result.U, 1e-10));
    REQUIRE((takagi_reconstruction(result) - m).norm() <= 1e-10 * m.norm());
    // d agrees with the factorization-free spectrum.
    const RealVector p = canonical_spectrum(m, Species::Boson);
    REQUIRE((result.d.array().square() - p.array()).abs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("takagi of the zero and rank-deficient matrices") {
  const TakagiResult zero = takagi(ComplexMatrix::Zero(3, 3));
  CHECK(zero.d.isZero());
  CHECK(is_unitary(zero.U, 1e-12));

  std::mt19937_64 rng(33);
  ComplexVector v = test_support::random_complex(5, 1, rng);
  const ComplexMatrix rank1 = v * v.transpose();  // symmetric, rank 1
  const TakagiResult result = takagi(rank1);
  CHECK(result.d(0) > 0.0);
  for (int i = 1; i < 5; ++i) CHECK(result.d(i) == 0.0);
  CHECK(is_unitary(result.U, 1e-10));
  CHECK((takagi_reconstruction(result) - rank1).norm() <= 1e-10 * rank1.norm());
}

TEST_CASE("takagi rejects bad input") {
  CHECK_THROWS_AS(takagi(ComplexMatrix::Zero(2, 3)), ValidationError);
  ComplexMatrix notsym(2, 2);
  notsym << 0, 1, -1, 0;
  CHECK_THROWS_AS(takagi(notsym), ValidationError);
}

TEST_CASE("antisym canonical form of a single block") {
  ComplexMatrix m(2, 2);
  m << 0, 0.7, -0.7, 0;
  const AntisymCanonical result = antisym_canonical(m);
  REQUIRE(result.z.size() == 1);
  CHECK(result.z(0) == Catch::Approx(0.7));
  CHECK(result.null_dim == 0);
  CHECK(is_unitary(result.U, 1e-10));
  CHECK((antisym_reconstruction(result) - m).norm() <= 1e-10 * m.norm());
}

TEST_CASE("antisym canonical form of a real 3x3 matrix") {
  ComplexMatrix m = ComplexMatrix::Zero(3, 3);
  m(0, 1) = 0.6;
  m(1, 0) = -0.6;
  m(0, 2) = 0.8;
  m(2, 0) = -0.8;
  // Oracle: any 3x3 antisymmetric matrix has singular values (z, z, 0) with
  // 2 z^2 = ||M||_F^2.
  const double z_expected = m.norm() / std::numbers::sqrt2;
  const AntisymCanonical result = antisym_canonical(m);
  REQUIRE(result.z.size() == 1);
  CHECK(result.z(0) == Catch::Approx(z_expected).margin(1e-12));
  CHECK(result.z(0) == Catch::Approx(1.0).margin(1e-12));
  CHECK(result.null_dim == 1);
  CHECK(is_unitary(result.U, 1e-10));
  CHECK((antisym_reconstruction(result) - m).norm() <= 1e-10 * m.norm());
}

TEST_CASE("antisym canonical properties across sizes") {
  std::mt19937_64 rng(34);
  for (const int n : {1, 2, 3, 5, 8, 16, 33}) {
    const ComplexMatrix m = random_antisymmetric(n, rng);
    const AntisymCanonical result = antisym_canonical(m);
    REQUIRE(2 * result.z.size() + result.null_dim == n);
    for (Eigen::Index i = 0; i + 1 < result.z.size(); ++i) {
      REQUIRE(result.z(i) >= result.z(i + 1));
    }
    if (n % 2 == 1) REQUIRE(result.null_dim >= 1);
    REQUIRE(is_unitary(result.U, 1e-10));
    REQUIRE((antisym_reconstruction(result) - m).norm() <= 1e-10 * std::max(m.norm(), 1.0));
    // Squared singular values occur in equal consecutive pairs.
    const RealVector p = canonical_spectrum(m, Species::Fermion);
    for (Eigen::Index j = 0; 2 * j + 1 < n; ++j) {
      if (std::sqrt(p(2 * j)) > 1e-12 * std::sqrt(p(0))) {
        REQUIRE(std::abs(std::sqrt(p(2 * j)) - std::sqrt(p(2 * j + 1))) <= 1e-10);
      }
    }
  }
}

TEST_CASE("antisym canonical rejects bad input") {
  CHECK_THROWS_AS(antisym_canonical(ComplexMatrix::Zero(2, 3)), ValidationError);
  CHECK_THROWS_AS(antisym_canonical(ComplexMatrix::Identity(2, 2)), ValidationError);
}

TEST_CASE("canonical_spectrum examples") {
  {
    ComplexMatrix m(2, 2);
    m << std::sqrt(0.9), 0, 0, std::sqrt(0.1);
    const RealVector p = canonical_spectrum(m, Species::Boson);
    CHECK(p(0) == Catch::Approx(0.9));
    CHECK(p(1) == Catch::Approx(0.1));
  }
  {
    ComplexMatrix m(2, 2);
    const double z = 1.0 / std::numbers::sqrt2;
    m << 0, z, -z, 0;
    const RealVector p = canonical_spectrum(m, Species::Fermion);
    CHECK(p(0) == Catch::Approx(0.5));
    CHECK(p(1) == Catch::Approx(0.5));
  }
  {
    ComplexMatrix m(2, 2);
    m << Complex(0, 1), Complex(0, 1), Complex(0, 1), Complex(1, 0);
    m /= m.norm();  // Tr M†M = 4 before normalization
    const RealVector p = canonical_spectrum(m, Species::Boson);
    CHECK(p(0) == Catch::Approx((2.0 + std::numbers::sqrt2) / 4).margin(1e-13));
    CHECK(p(1) == Catch::Approx((2.0 - std::numbers::sqrt2) / 4).margin(1e-13));
  }
}

TEST_CASE("canonical_spectrum is invariant under unitary congruence") {
  std::mt19937_64 rng(35);
  for (const Species species : {Species::Boson, Species::Fermion}) {
    const int n = 9;
    const ComplexMatrix m = species == Species::Boson ? random_symmetric(n, rng)
                                                      : random_antisymmetric(n, rng);
    const ComplexMatrix w = random_unitary(n, rng);
    const RealVector p = canonical_spectrum(m, species);
    const RealVector q = canonical_spectrum(w.transpose() * m * w, species);
    REQUIRE((p - q).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("canonical_spectrum enforces the declared symmetry") {
  ComplexMatrix m(2, 2);
  m << 1, 2, 3, 4;
  CHECK_THROWS_AS(canonical_spectrum(m, Species::Boson), ValidationError);
  CHECK_THROWS_AS(canonical_spectrum(m, Species::Fermion), ValidationError);
}
