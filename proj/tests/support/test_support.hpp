#pragma once

#include <Eigen/QR>

#include <random>
#include <utility>

#include "identent/fock.hpp"
#include "identent/types.hpp"

namespace test_support {

using identent::Complex;
using identent::ComplexMatrix;
using identent::Species;

inline ComplexMatrix random_complex(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  ComplexMatrix m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) m(r, c) = Complex(gauss(rng), gauss(rng));
  }
  return m;
}

inline ComplexMatrix random_hermitian(int n, std::mt19937_64& rng) {
  const ComplexMatrix m = random_complex(n, n, rng);
  return 0.5 * (m + m.adjoint());
}

inline ComplexMatrix random_symmetric(int n, std::mt19937_64& rng) {
  const ComplexMatrix m = random_complex(n, n, rng);
  return 0.5 * (m + m.transpose());
}

inline ComplexMatrix random_antisymmetric(int n, std::mt19937_64& rng) {
  const ComplexMatrix m = random_complex(n, n, rng);
  return 0.5 * (m - m.transpose());
}

inline ComplexMatrix random_unitary(int n, std::mt19937_64& rng) {
  Eigen::HouseholderQR<ComplexMatrix> qr(random_complex(n, n, rng));
  return ComplexMatrix(qr.householderQ());
}

inline identent::TwoParticleState random_state(Species species, int n, std::mt19937_64& rng) {
  ComplexMatrix lambda =
      species == Species::Boson ? random_symmetric(n, rng) : random_antisymmetric(n, rng);
  lambda /= lambda.norm();
  return identent::TwoParticleState(species, std::move(lambda));
}

// Projector onto the (anti)symmetric sector of the two-particle coefficient
// space, acting on column-major vec(Lambda).
inline ComplexMatrix sector_symmetrizer(Species species, int n) {
  const double sign = species == Species::Boson ? 1.0 : -1.0;
  const Eigen::Index nn = static_cast<Eigen::Index>(n) * n;
  ComplexMatrix p = ComplexMatrix::Zero(nn, nn);
  for (int m = 0; m < n; ++m) {
    for (int q = 0; q < n; ++q) {
      const Eigen::Index row = m + static_cast<Eigen::Index>(q) * n;
      p(row, row) += 0.5;
      const Eigen::Index swapped = q + static_cast<Eigen::Index>(m) * n;
      p(row, swapped) += 0.5 * sign;
    }
  }
  return p;
}

}  // namespace test_support
