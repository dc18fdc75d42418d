#include "ddsim/average_hamiltonian.hpp"

namespace ddsim {

std::vector<std::pair<double, DenseOperator>> dense_toggling_frame(const Sequence& seq, const DenseOperator& h_in) {
  const std::size_t n = spins_for_dimension(h_in.rows());
  std::vector<std::pair<double, DenseOperator>> out;
  for (const auto& seg : segment_propagators(seq, n)) {
    out.emplace_back(seg.duration, seg.control.adjoint() * h_in * seg.control);
  }
  return out;
}

DenseOperator dense_zeroth_average(const Sequence& seq, const DenseOperator& h_in) {
  DenseOperator sum = DenseOperator::Zero(h_in.rows(), h_in.cols());
  for (const auto& [d, h] : dense_toggling_frame(seq, h_in)) sum += d * h;
  return sum / seq.cycle_time();
}

DenseOperator dense_first_magnus(const Sequence& seq, const DenseOperator& h_in) {
  const auto frame = dense_toggling_frame(seq, h_in);
  DenseOperator sum = DenseOperator::Zero(h_in.rows(), h_in.cols());
  for (std::size_t k = 0; k < frame.size(); ++k) {
    for (std::size_t j = 0; j < k; ++j) {
      const auto& [dk, hk] = frame[k];
      const auto& [dj, hj] = frame[j];
      sum += (dk * dj) * (hk * hj - hj * hk);
    }
  }
  return Complex(0.0, -1.0) / (2.0 * seq.cycle_time()) * sum;
}

DenseOperator interaction_frame_propagator(const Sequence& seq, const DenseOperator& h_in) {
  DenseOperator u = DenseOperator::Identity(h_in.rows(), h_in.cols());
  for (const auto& [d, h] : dense_toggling_frame(seq, h_in)) u = expm_hermitian(h, d) * u;
  return u;
}

}  // namespace ddsim
