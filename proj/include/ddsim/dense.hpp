#pragma once

#include <complex>
#include <cstddef>

#include <Eigen/Dense>

namespace ddsim {

using Complex = std::complex<double>;

/// 2^N x 2^N complex matrix. Basis index bit (N-1-i) is spin i, so spin 0 is
/// the most significant tensor factor; bit value 0 is spin up (I_z = +1/2).
using DenseOperator = Eigen::MatrixXcd;

namespace tol {
inline constexpr double kUnitary = 1e-12;
inline constexpr double kEquality = 1e-12;
inline constexpr double kHermitian = 1e-10;
}  // namespace tol

bool is_hermitian(const DenseOperator& m, double tolerance = tol::kHermitian);
bool is_unitary(const DenseOperator& m, double tolerance = tol::kUnitary);

/// exp(-i H t) for Hermitian H, through the eigendecomposition of H.
/// Throws ValidationError if H is not Hermitian within 1e-10.
DenseOperator expm_hermitian(const DenseOperator& h, double t);

/// Spectral norm (largest singular value).
double operator_norm(const DenseOperator& m);

/// min over phi of ||U - e^{i phi} V||_F.
double frobenius_distance_mod_phase(const DenseOperator& u, const DenseOperator& v);

/// Principal logarithm of a unitary, returned as the Hermitian generator G with
/// U = exp(-i G); eigenphases are taken in (-pi, pi].
DenseOperator unitary_generator(const DenseOperator& u);

/// Kronecker dimension check helper: returns N for dim == 2^N, throws otherwise.
std::size_t spins_for_dimension(Eigen::Index dim);

}  // namespace ddsim
