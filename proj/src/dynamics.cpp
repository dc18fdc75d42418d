#include "ddsim/dynamics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <thread>

#include <Eigen/Eigenvalues>

namespace ddsim {

namespace {

DenseOperator total_dense(Axis axis, std::size_t n) { return to_dense(total_spin_operator<Complex>(axis, n)); }

double expectation(const DenseOperator& rho, const DenseOperator& op) { return (rho * op).trace().real(); }

}  // namespace

// --- states ---------------------------------------------------------------

StateDensity::StateDensity(DenseOperator rho) : rho_(std::move(rho)) {
  if (rho_.rows() != rho_.cols() || rho_.rows() == 0) throw ValidationError("density matrix must be square");
  spins_for_dimension(rho_.rows());
  if (!is_hermitian(rho_, 1e-10)) throw ValidationError("density matrix is not Hermitian");
  if (std::abs(rho_.trace() - Complex(1.0)) > 1e-10) throw ValidationError("density matrix trace is not 1");
  Eigen::SelfAdjointEigenSolver<DenseOperator> solver(0.5 * (rho_ + rho_.adjoint()), Eigen::EigenvaluesOnly);
  if (solver.eigenvalues().minCoeff() < -1e-10) throw ValidationError("density matrix has negative eigenvalues");
}

bool StateDensity::is_pure() const { return std::abs((rho_ * rho_).trace().real() - 1.0) <= 1e-10; }

StateDensity all_transverse_x(std::size_t n_spins) {
  if (n_spins == 0) throw ArgumentError("state needs at least one spin");
  const Eigen::Index dim = Eigen::Index{1} << n_spins;
  // |+x>^N has every amplitude 2^{-N/2}.
  Eigen::VectorXcd psi = Eigen::VectorXcd::Constant(dim, Complex(1.0 / std::sqrt(static_cast<double>(dim))));
  return StateDensity(psi * psi.adjoint());
}

StateDensity single_qubit_state(std::size_t n_spins, std::size_t site, const std::array<double, 3>& bloch) {
  if (site >= n_spins) throw ArgumentError("single_qubit_state: site out of range");
  const double len = std::sqrt(bloch[0] * bloch[0] + bloch[1] * bloch[1] + bloch[2] * bloch[2]);
  if (len > 1.0 + 1e-12) throw ValidationError("Bloch vector longer than 1");
  Eigen::Matrix2cd one;
  one << Complex(0.5 * (1 + bloch[2])), Complex(0.5 * bloch[0], -0.5 * bloch[1]),
      Complex(0.5 * bloch[0], 0.5 * bloch[1]), Complex(0.5 * (1 - bloch[2]));
  Eigen::Matrix2cd up;
  up << 1, 0, 0, 0;
  DenseOperator rho = DenseOperator::Ones(1, 1);
  for (std::size_t s = 0; s < n_spins; ++s) {
    const Eigen::Matrix2cd& factor = s == site ? one : up;
    DenseOperator next(rho.rows() * 2, rho.cols() * 2);
    for (Eigen::Index i = 0; i < rho.rows(); ++i)
      for (Eigen::Index j = 0; j < rho.cols(); ++j) next.block(2 * i, 2 * j, 2, 2) = rho(i, j) * factor;
    rho = std::move(next);
  }
  return StateDensity(rho);
}

double fidelity(const DenseOperator& ref, const DenseOperator& rho) {
  if (ref.rows() != rho.rows() || ref.cols() != rho.cols()) throw ArgumentError("fidelity: dimension mismatch");
  if (std::abs((ref * ref).trace().real() - 1.0) <= 1e-10) {
    return std::max(0.0, (ref * rho).trace().real());
  }
  Eigen::SelfAdjointEigenSolver<DenseOperator> ref_solver(0.5 * (ref + ref.adjoint()));
  const Eigen::VectorXd root = ref_solver.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const DenseOperator sqrt_ref =
      ref_solver.eigenvectors() * root.cast<Complex>().asDiagonal() * ref_solver.eigenvectors().adjoint();
  const DenseOperator inner = sqrt_ref * rho * sqrt_ref;
  Eigen::SelfAdjointEigenSolver<DenseOperator> inner_solver(0.5 * (inner + inner.adjoint()), Eigen::EigenvaluesOnly);
  const double trace_sqrt = inner_solver.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
  return trace_sqrt * trace_sqrt;
}

double fidelity(const StateDensity& ref, const StateDensity& rho) { return fidelity(ref.matrix(), rho.matrix()); }

StateDensity InitialStateSpec::build(std::size_t n_spins) const {
  switch (kind) {
    case InitialStateKind::single_qubit: return single_qubit_state(n_spins, site, bloch);
    default: return all_transverse_x(n_spins);
  }
}

// --- cycle propagator -----------------------------------------------------

DenseOperator cycle_propagator(const Sequence& seq, const SpinSystem& sys, const CycleOptions& options,
                               double cycle_start) {
  return cycle_propagator(seq, to_dense(build_internal_hamiltonian(sys)), options, cycle_start);
}

DenseOperator cycle_propagator(const Sequence& seq, const DenseOperator& h_in, const CycleOptions& options,
                               double cycle_start) {
  options.errors.validate();
  if (!(options.pulse_gap >= 0.0)) throw ArgumentError("pulse_gap must be >= 0");
  const std::size_t n = spins_for_dimension(h_in.rows());
  if (!is_hermitian(h_in)) throw ValidationError("internal Hamiltonian is not Hermitian");
  const double tau = seq.tau();
  const double tc = seq.cycle_time();
  const double width = options.errors.width;

  const bool drifting = options.drift_rate != 0.0;
  const DenseOperator iz = drifting ? total_dense(Axis::z, n) : DenseOperator();
  auto hamiltonian_at = [&](double t) -> DenseOperator {
    if (!drifting) return h_in;
    return h_in + (options.drift_rate * (cycle_start + t)) * iz;
  };

  std::map<double, DenseOperator> free_cache;
  auto free_step = [&](double start, double duration) -> DenseOperator {
    if (drifting) return expm_hermitian(hamiltonian_at(start + 0.5 * duration), duration);
    auto it = free_cache.find(duration);
    if (it == free_cache.end()) it = free_cache.emplace(duration, expm_hermitian(h_in, duration)).first;
    return it->second;
  };

  std::vector<PulseEvent> events;
  for (const auto& e : seq.events()) {
    if (e.closing && !options.include_closing_pulse) continue;
    events.push_back(e);
  }

  const Eigen::Index dim = h_in.rows();
  DenseOperator u = DenseOperator::Identity(dim, dim);
  double cursor = 0.0;
  auto advance_free = [&](double until) {
    const double duration = until - cursor;
    if (duration < -1e-12 * std::max(1.0, tc)) {
      throw ArgumentError("pulse layout overlaps: pulse widths or gaps exceed the available free time");
    }
    if (duration > 0.0) u = free_step(cursor, duration) * u;
    cursor = std::max(cursor, until);
  };

  std::size_t k = 0;
  while (k < events.size()) {
    std::size_t group_end = k;
    while (group_end < events.size() && events[group_end].time_units == events[k].time_units) ++group_end;
    const std::size_t m = group_end - k;
    const double nominal = events[k].time_units * tau;
    const double length = static_cast<double>(m) * width + static_cast<double>(m - 1) * options.pulse_gap;
    double start = nominal - 0.5 * length;
    if (events[k].time_units == 0.0) start = 0.0;
    if (events[k].time_units == seq.cycle_units()) start = tc - length;
    advance_free(start);
    for (std::size_t j = k; j < group_end; ++j) {
      if (j > k && options.pulse_gap > 0.0) advance_free(cursor + options.pulse_gap);
      const DenseOperator h_mid = hamiltonian_at(cursor + 0.5 * width);
      u = pulse_propagator(events[j], n, options.errors, h_mid) * u;
      cursor += width;
    }
    k = group_end;
  }
  advance_free(tc);
  return u;
}

// --- propagation ------------------------------------------------------------

ObservableSeries stroboscopic_evolution(const StateDensity& rho0, const DenseOperator& cycle,
                                        const EvolutionOptions& options) {
  return stroboscopic_evolution(rho0, [&cycle](std::size_t) -> DenseOperator { return cycle; }, options);
}

ObservableSeries stroboscopic_evolution(const StateDensity& rho0,
                                        const std::function<DenseOperator(std::size_t)>& cycle_at,
                                        const EvolutionOptions& options) {
  if (options.n_cycles < 1) throw ArgumentError("n_cycles must be >= 1");
  if (options.sample_every < 1) throw ArgumentError("sample_every must be >= 1");
  const std::size_t n = rho0.n_spins();
  const DenseOperator ix = total_dense(Axis::x, n);
  const DenseOperator iy = total_dense(Axis::y, n);
  const DenseOperator iz = total_dense(Axis::z, n);
  const DenseOperator& ref = rho0.matrix();

  ObservableSeries out;
  auto sample = [&](std::size_t cycle, const DenseOperator& rho) {
    out.times.push_back(static_cast<double>(cycle) * options.cycle_time);
    out.fidelity.push_back(fidelity(ref, rho));
    out.mx.push_back(expectation(rho, ix));
    out.my.push_back(expectation(rho, iy));
    out.mz.push_back(expectation(rho, iz));
  };

  DenseOperator rho = ref;
  sample(0, rho);
  // Constant propagators are fetched once.
  DenseOperator u = cycle_at(0);
  for (std::size_t c = 1; c <= options.n_cycles; ++c) {
    if (c > 1) u = cycle_at(c - 1);
    rho = u * rho * u.adjoint();
    if (options.renormalize_every > 0 && c % options.renormalize_every == 0) {
      const double herm = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
      const double trace = std::abs(rho.trace() - Complex(1.0));
      if (herm > options.drift_tolerance || trace > options.drift_tolerance) {
        throw NumericalDriftError("density matrix drifted by " + std::to_string(std::max(herm, trace)) +
                                  " after " + std::to_string(c) + " cycles");
      }
      rho = 0.5 * (rho + rho.adjoint());
      rho /= rho.trace().real();
    }
    if (c % options.sample_every == 0 || c == options.n_cycles) sample(c, rho);
  }
  return out;
}

// --- free induction decay -----------------------------------------------------

FreeInductionSignal::FreeInductionSignal(const DenseOperator& h_in) {
  if (!is_hermitian(h_in)) throw ValidationError("internal Hamiltonian is not Hermitian");
  const std::size_t n = spins_for_dimension(h_in.rows());
  Eigen::SelfAdjointEigenSolver<DenseOperator> solver(0.5 * (h_in + h_in.adjoint()));
  energies_ = solver.eigenvalues();
  norm_ = energies_.cwiseAbs().maxCoeff();
  const DenseOperator& v = solver.eigenvectors();
  const DenseOperator rho = v.adjoint() * all_transverse_x(n).matrix() * v;
  const DenseOperator x = v.adjoint() * total_dense(Axis::x, n) * v;
  weights_ = rho.cwiseProduct(x.transpose());
  initial_ = weights_.sum().real();
}

double FreeInductionSignal::operator()(double t) const {
  // tr(rho(t) X) = sum_mn rho_mn X_nm exp(-i (E_m - E_n) t)
  const Eigen::Index dim = energies_.size();
  Eigen::VectorXcd phase(dim);
  for (Eigen::Index m = 0; m < dim; ++m) phase(m) = std::polar(1.0, -energies_(m) * t);
  const Complex total = (phase.asDiagonal() * weights_ * phase.conjugate().asDiagonal()).sum();
  return total.real() / initial_;
}

std::optional<double> fid_decay_time(const SpinSystem& sys, const FidOptions& options) {
  const FreeInductionSignal signal(to_dense(build_internal_hamiltonian(sys)));
  const double scale = signal.hamiltonian_norm();
  if (scale == 0.0) return std::nullopt;
  const double horizon = options.horizon > 0.0 ? options.horizon : 1000.0 / scale;
  const double step = options.resolution > 0.0 ? options.resolution : 0.05 / scale;
  const double threshold = std::exp(-1.0);
  double prev_t = 0.0;
  for (double t = step; t <= horizon + 0.5 * step; t += step) {
    if (signal(t) < threshold) {
      double lo = prev_t;
      double hi = t;
      for (int iter = 0; iter < 200 && hi - lo > 1e-15 * hi; ++iter) {
        const double mid = 0.5 * (lo + hi);
        (signal(mid) < threshold ? hi : lo) = mid;
      }
      return 0.5 * (lo + hi);
    }
    prev_t = t;
  }
  return std::nullopt;
}

// --- ensembles ----------------------------------------------------------------

std::size_t EnsembleResult::succeeded() const {
  return static_cast<std::size_t>(
      std::count_if(realizations.begin(), realizations.end(), [](const auto& r) { return !r.failed; }));
}

void EnsembleResult::recompute_statistics() {
  times.clear();
  mean_fidelity.clear();
  stderr_fidelity.clear();
  mean_mx.clear();
  mean_my.clear();
  mean_mz.clear();
  std::vector<const RealizationResult*> ok;
  for (const auto& r : realizations) {
    if (!r.failed) ok.push_back(&r);
  }
  if (ok.empty()) return;
  times = ok.front()->series.times;
  const double count = static_cast<double>(ok.size());
  for (std::size_t t = 0; t < times.size(); ++t) {
    double f = 0.0, x = 0.0, y = 0.0, z = 0.0;
    for (const auto* r : ok) {
      f += r->series.fidelity[t];
      x += r->series.mx[t];
      y += r->series.my[t];
      z += r->series.mz[t];
    }
    const double mean = f / count;
    double var = 0.0;
    for (const auto* r : ok) var += (r->series.fidelity[t] - mean) * (r->series.fidelity[t] - mean);
    mean_fidelity.push_back(mean);
    stderr_fidelity.push_back(ok.size() > 1 ? std::sqrt(var / (count - 1.0) / count) : 0.0);
    mean_mx.push_back(x / count);
    mean_my.push_back(y / count);
    mean_mz.push_back(z / count);
  }
}

void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& fn) {
  workers = std::max<std::size_t>(1, std::min(workers, count));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

namespace {

RealizationResult run_realization(const SpinSystem& sys, const Sequence& seq, const EnsembleOptions& options) {
  RealizationResult result;
  result.system = sys;
  const DenseOperator h_in = to_dense(build_internal_hamiltonian(sys));
  const StateDensity rho0 = options.initial.build(sys.n_spins());
  EvolutionOptions evo;
  evo.n_cycles = options.n_cycles;
  evo.sample_every = options.sample_every;
  evo.cycle_time = seq.cycle_time();
  if (options.cycle.drift_rate != 0.0) {
    result.series = stroboscopic_evolution(
        rho0,
        [&](std::size_t c) { return cycle_propagator(seq, h_in, options.cycle, static_cast<double>(c) * seq.cycle_time()); },
        evo);
  } else {
    result.series = stroboscopic_evolution(rho0, cycle_propagator(seq, h_in, options.cycle), evo);
  }
  if (options.estimate_decay_time) result.decay_time = fid_decay_time(sys, options.fid);
  return result;
}

EnsembleResult finish(EnsembleResult out, const EnsembleOptions& options) {
  const std::size_t failed = out.realizations.size() - out.succeeded();
  if (static_cast<double>(failed) > options.max_failure_fraction * static_cast<double>(out.realizations.size())) {
    std::string first_error;
    for (const auto& r : out.realizations) {
      if (r.failed) {
        first_error = r.error;
        break;
      }
    }
    throw GenerationError(std::to_string(failed) + " of " + std::to_string(out.realizations.size()) +
                          " realizations failed (first: " + first_error + ")");
  }
  out.recompute_statistics();
  return out;
}

}  // namespace

EnsembleResult run_ensemble(const GeometrySpec& spec, const Sequence& seq, const EnsembleOptions& options) {
  if (options.n_realizations < 1) throw ArgumentError("n_realizations must be >= 1");
  spec.validate();
  EnsembleResult out;
  out.sequence = seq.name();
  out.tau = seq.tau();
  out.seed = spec.seed;
  out.realizations.resize(options.n_realizations);
  parallel_for(options.n_realizations, options.workers, [&](std::size_t i) {
    auto& slot = out.realizations[i];
    try {
      const SpinSystem sys = realize_geometry(spec, i);
      slot = run_realization(sys, seq, options);
    } catch (const GenerationError& e) {
      slot.failed = true;
      slot.error = e.what();
    }
    slot.index = i;
  });
  return finish(std::move(out), options);
}

EnsembleResult run_ensemble(const std::vector<SpinSystem>& systems, const Sequence& seq,
                            const EnsembleOptions& options) {
  if (systems.empty()) throw ArgumentError("run_ensemble: no systems");
  EnsembleResult out;
  out.sequence = seq.name();
  out.tau = seq.tau();
  out.realizations.resize(systems.size());
  parallel_for(systems.size(), options.workers, [&](std::size_t i) {
    out.realizations[i] = run_realization(systems[i], seq, options);
    out.realizations[i].index = i;
  });
  return finish(std::move(out), options);
}

std::optional<double> ensemble_decay_time(const GeometrySpec& spec, std::size_t n_realizations,
                                          const FidOptions& options, std::size_t workers) {
  std::vector<std::optional<double>> times(n_realizations);
  parallel_for(n_realizations, workers, [&](std::size_t i) {
    try {
      times[i] = fid_decay_time(realize_geometry(spec, i), options);
    } catch (const GenerationError&) {
      times[i] = std::nullopt;
    }
  });
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& t : times) {
    if (t) {
      sum += *t;
      ++count;
    }
  }
  if (count == 0) return std::nullopt;
  return sum / static_cast<double>(count);
}

}  // namespace ddsim
