#include "identent/factorizations.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "identent/matrix.hpp"

namespace identent {

namespace {

void check_symmetry(const ComplexMatrix& m, Species species, const std::string& context) {
  const double scale = m.norm();
  const double defect = species == Species::Boson ? (m - m.transpose()).norm()
                                                  : (m + m.transpose()).norm();
  if (defect > kSymmetryTol * scale) {
    throw ValidationError(context + ": matrix is not " +
                          std::string(species == Species::Boson ? "symmetric" : "antisymmetric") +
                          " within tolerance");
  }
}

// Flip the sign of a mode vector so that its largest-magnitude entry has
// positive real part (positive imaginary part on a purely imaginary tie).
// The remaining freedom of a nonzero Takagi mode is exactly this sign.
void canonicalize_sign(Eigen::Ref<ComplexVector> v) {
  Eigen::Index imax = 0;
  v.cwiseAbs().maxCoeff(&imax);
  const Complex lead = v(imax);
  if (lead.real() < 0.0 || (lead.real() == 0.0 && lead.imag() < 0.0)) v = -v;
}

// Rotate v by a global phase so that its largest-magnitude entry becomes
// real positive. Returns the applied phase factor.
Complex canonicalize_phase(Eigen::Ref<ComplexVector> v) {
  Eigen::Index imax = 0;
  v.cwiseAbs().maxCoeff(&imax);
  const Complex lead = v(imax);
  const double mag = std::abs(lead);
  if (mag == 0.0) return {1.0, 0.0};
  const Complex factor = std::conj(lead) / mag;
  v *= factor;
  return factor;
}

// Orthonormal completion of r orthonormal columns to a full basis of C^n.
ComplexMatrix orthonormal_complement(const ComplexMatrix& cols) {
  const Eigen::Index n = cols.rows();
  const Eigen::Index r = cols.cols();
  if (r == 0) return ComplexMatrix::Identity(n, n);
  Eigen::HouseholderQR<ComplexMatrix> qr(cols);
  ComplexMatrix q = qr.householderQ();
  return q.rightCols(n - r);
}

void check_reconstruction(const ComplexMatrix& m, const ComplexMatrix& rec,
                          const std::string& context) {
  if ((m - rec).norm() > kFactorTol * std::max(m.norm(), 1.0)) {
    throw std::runtime_error(context + ": reconstruction residual exceeds tolerance");
  }
}

}  // namespace

TakagiResult takagi(const ComplexMatrix& m_in) {
  require_square(m_in, "takagi");
  require_finite(m_in, "takagi");
  check_symmetry(m_in, Species::Boson, "takagi");
  const Eigen::Index n = m_in.rows();
  const ComplexMatrix m = 0.5 * (m_in + m_in.transpose());

  // Real 2n x 2n embedding: with M = A + iB, the symmetric matrix
  // [[A, B], [B, -A]] has eigenpairs (±d_j, [x; y]) where u = x + iy solves
  // the Takagi relation M conj(u) = d u.
  Eigen::MatrixXd embed(2 * n, 2 * n);
  const Eigen::MatrixXd a = m.real();
  const Eigen::MatrixXd b = m.imag();
  embed.topLeftCorner(n, n) = a;
  embed.topRightCorner(n, n) = b;
  embed.bottomLeftCorner(n, n) = b;
  embed.bottomRightCorner(n, n) = -a;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(embed);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("takagi: eigensolver failed to converge");
  }

  // Top n eigenvalues, descending. Modes below the truncation threshold are
  // rebuilt as an orthonormal completion; their embedding vectors need not be
  // orthonormal in C^n.
  TakagiResult out;
  out.d = RealVector(n);
  out.U = ComplexMatrix(n, n);
  const double dmax = std::max(solver.eigenvalues()(2 * n - 1), 0.0);
  const double cutoff = kNullTruncation * dmax;
  Eigen::Index rank = 0;
  for (Eigen::Index j = 0; j < n; ++j) {
    const double dj = solver.eigenvalues()(2 * n - 1 - j);
    if (dj <= cutoff) break;
    const Eigen::VectorXd& zvec = solver.eigenvectors().col(2 * n - 1 - j);
    ComplexVector u = zvec.head(n) + Complex(0.0, 1.0) * zvec.tail(n);
    canonicalize_sign(u);
    out.d(j) = dj;
    out.U.row(j) = u.transpose();
    ++rank;
  }
  if (rank < n) {
    const ComplexMatrix null_rows =
        orthonormal_complement(out.U.topRows(rank).transpose());
    for (Eigen::Index j = rank; j < n; ++j) {
      ComplexVector u = null_rows.col(j - rank);
      canonicalize_sign(u);
      out.d(j) = 0.0;
      out.U.row(j) = u.transpose();
    }
  }

  check_reconstruction(m, out.U.transpose() * out.d.asDiagonal() * out.U, "takagi");
  return out;
}

AntisymCanonical antisym_canonical(const ComplexMatrix& m_in) {
  require_square(m_in, "antisym_canonical");
  require_finite(m_in, "antisym_canonical");
  check_symmetry(m_in, Species::Fermion, "antisym_canonical");
  const Eigen::Index n = m_in.rows();
  const ComplexMatrix m = 0.5 * (m_in - m_in.transpose());

  // Eigenvalues of MM† come in equal pairs z^2 plus an explicit null space.
  // Rows are paired as v from the eigenbasis and u = M conj(v) / z, which
  // lands in the same eigenspace of MM† (not of M†M) when M is complex.
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m * m.adjoint());
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("antisym_canonical: eigensolver failed to converge");
  }
  const RealVector s = solver.eigenvalues().reverse();  // descending
  const double smax = std::max(s(0), 0.0);
  // Rank cutoff: exact zeros of the stored matrix surface at the eigensolver
  // noise floor ~eps*smax, far above the squared kNullTruncation level.
  const double floor_s =
      smax * std::max(kNullTruncation * kNullTruncation,
                      256.0 * std::numeric_limits<double>::epsilon());
  Eigen::Index rank = 0;
  while (rank < n && s(rank) > floor_s) ++rank;
  if (rank % 2 != 0) --rank;  // a singular pair can never split

  AntisymCanonical out;
  out.null_dim = static_cast<int>(n - rank);
  out.z = RealVector(rank / 2);
  out.U = ComplexMatrix(n, n);

  // Pair up eigenvectors inside each (near-)degenerate group of M†M.
  // For a unit v in the group, u = M conj(v) / z is a unit vector in the same
  // group, orthogonal to v, with M conj(u) = -z v; rows (u, v) realise one
  // [[0, z], [-z, 0]] block.
  std::vector<ComplexVector> taken;
  Eigen::Index row = 0;
  Eigen::Index block = 0;
  Eigen::Index g0 = 0;
  const double group_gap = std::max(1e-10 * smax, floor_s);
  while (g0 < rank) {
    Eigen::Index g1 = g0 + 1;
    while (g1 < rank && s(g1 - 1) - s(g1) <= group_gap) ++g1;
    if ((g1 - g0) % 2 != 0) ++g1;  // keep pairs together across a split boundary
    if (g1 > rank) {
      throw std::runtime_error("antisym_canonical: odd degenerate group at the rank boundary");
    }
    const double z = std::sqrt(std::max(s.segment(g0, g1 - g0).mean(), 0.0));
    taken.clear();
    Eigen::Index col = g0;
    for (Eigen::Index p = 0; p < (g1 - g0) / 2; ++p) {
      // Next group direction orthogonal to the pairs already taken.
      ComplexVector v;
      double vnorm = 0.0;
      while (col < g1) {
        v = solver.eigenvectors().col(n - 1 - col);
        ++col;
        for (int pass = 0; pass < 2; ++pass) {
          for (const ComplexVector& w : taken) v -= (w.dot(v)) * w;
        }
        vnorm = v.norm();
        if (vnorm > 0.5) break;
      }
      if (vnorm <= 0.5) {
        throw std::runtime_error("antisym_canonical: failed to pair a degenerate group");
      }
      v /= vnorm;
      canonicalize_phase(v);
      ComplexVector u = m * v.conjugate() / z;
      for (int pass = 0; pass < 2; ++pass) {
        u -= (v.dot(u)) * v;
        for (const ComplexVector& w : taken) u -= (w.dot(u)) * w;
      }
      u.normalize();
      out.z(block) = z;
      out.U.row(row) = u.transpose();
      out.U.row(row + 1) = v.transpose();
      taken.push_back(u);
      taken.push_back(v);
      row += 2;
      ++block;
    }
    g0 = g1;
  }

  for (Eigen::Index j = rank; j < n; ++j) {
    ComplexVector v = solver.eigenvectors().col(n - 1 - j);
    canonicalize_sign(v);
    out.U.row(row++) = v.transpose();
  }

  // Blocks are produced in descending-z order already; enforce it anyway.
  for (Eigen::Index j = 0; j + 1 < out.z.size(); ++j) {
    if (out.z(j) < out.z(j + 1)) {
      throw std::runtime_error("antisym_canonical: block ordering violated");
    }
  }

  ComplexMatrix rec = ComplexMatrix::Zero(n, n);
  for (Eigen::Index j = 0; j < out.z.size(); ++j) {
    const ComplexVector u = out.U.row(2 * j).transpose();
    const ComplexVector v = out.U.row(2 * j + 1).transpose();
    rec += out.z(j) * (u * v.transpose() - v * u.transpose());
  }
  check_reconstruction(m, rec, "antisym_canonical");
  return out;
}

RealVector canonical_spectrum(const ComplexMatrix& m_in, Species species) {
  require_square(m_in, "canonical_spectrum");
  require_finite(m_in, "canonical_spectrum");
  check_symmetry(m_in, species, "canonical_spectrum");
  const ComplexMatrix m = species == Species::Boson ? 0.5 * (m_in + m_in.transpose()).eval()
                                                    : 0.5 * (m_in - m_in.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m.adjoint() * m);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("canonical_spectrum: eigensolver failed to converge");
  }
  return solver.eigenvalues().reverse().cwiseMax(0.0);
}

}  // namespace identent
