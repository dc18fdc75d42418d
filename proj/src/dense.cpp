#include "ddsim/dense.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "ddsim/errors.hpp"

namespace ddsim {

bool is_hermitian(const DenseOperator& m, double tolerance) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tolerance;
}

bool is_unitary(const DenseOperator& m, double tolerance) {
  if (m.rows() != m.cols()) return false;
  const DenseOperator residual = m.adjoint() * m - DenseOperator::Identity(m.rows(), m.cols());
  return residual.cwiseAbs().maxCoeff() <= tolerance;
}

DenseOperator expm_hermitian(const DenseOperator& h, double t) {
  if (!is_hermitian(h)) {
    throw ValidationError("expm_hermitian: generator is not Hermitian");
  }
  if (t == 0.0) {
    return DenseOperator::Identity(h.rows(), h.cols());
  }
  // Symmetrize so the solver sees an exactly Hermitian matrix.
  const DenseOperator sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<DenseOperator> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw ValidationError("expm_hermitian: eigendecomposition failed");
  }
  const auto& v = solver.eigenvectors();
  Eigen::VectorXcd phases(sym.rows());
  for (Eigen::Index k = 0; k < phases.size(); ++k) {
    phases(k) = std::polar(1.0, -solver.eigenvalues()(k) * t);
  }
  return v * phases.asDiagonal() * v.adjoint();
}

double operator_norm(const DenseOperator& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<DenseOperator> svd(m);
  return svd.singularValues()(0);
}

double frobenius_distance_mod_phase(const DenseOperator& u, const DenseOperator& v) {
  if (u.rows() != v.rows() || u.cols() != v.cols()) {
    throw ArgumentError("frobenius_distance_mod_phase: dimension mismatch");
  }
  // ||U - e^{i phi} V||^2 = ||U||^2 + ||V||^2 - 2 Re(e^{i phi} tr(U^dag V)) is
  // minimized at phi = -arg tr(U^dag V). Evaluate the difference directly; the
  // expanded form cancels catastrophically near zero.
  const Complex overlap = (u.adjoint() * v).trace();
  const Complex phase = std::abs(overlap) > 0.0 ? std::conj(overlap) / std::abs(overlap) : Complex(1.0);
  return (u - phase * v).norm();
}

DenseOperator unitary_generator(const DenseOperator& u) {
  if (!is_unitary(u, 1e-9)) {
    throw ValidationError("unitary_generator: matrix is not unitary");
  }
  // Unitaries are normal, so the complex Schur form is diagonal.
  Eigen::ComplexSchur<DenseOperator> schur(u);
  const DenseOperator& q = schur.matrixU();
  const DenseOperator& t = schur.matrixT();
  Eigen::VectorXd angles(u.rows());
  for (Eigen::Index k = 0; k < angles.size(); ++k) {
    angles(k) = -std::arg(t(k, k));
  }
  DenseOperator g = q * angles.cast<Complex>().asDiagonal() * q.adjoint();
  return 0.5 * (g + g.adjoint());
}

std::size_t spins_for_dimension(Eigen::Index dim) {
  std::size_t n = 0;
  Eigen::Index d = 1;
  while (d < dim) {
    d *= 2;
    ++n;
  }
  if (d != dim || dim < 1) {
    throw ArgumentError("dimension is not a power of two");
  }
  return n;
}

}  // namespace ddsim
