#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ddsim/dense.hpp"
#include "ddsim/sequence.hpp"
#include "ddsim/spin_system.hpp"

namespace ddsim {

/// Density matrix: Hermitian, unit trace, positive semidefinite (all within 1e-10).
class StateDensity {
 public:
  /// Validates the invariants; throws ValidationError on violation.
  explicit StateDensity(DenseOperator rho);

  const DenseOperator& matrix() const { return rho_; }
  std::size_t n_spins() const { return spins_for_dimension(rho_.rows()); }
  /// tr(rho^2) within 1e-10 of one.
  bool is_pure() const;

 private:
  DenseOperator rho_;
};

/// Every spin in the +x eigenstate.
StateDensity all_transverse_x(std::size_t n_spins);
/// Spin `site` in the Bloch state `bloch` (|r| <= 1), the others in +z.
StateDensity single_qubit_state(std::size_t n_spins, std::size_t site, const std::array<double, 3>& bloch);

/// Uhlmann fidelity (tr sqrt(sqrt(ref) rho sqrt(ref)))^2; tr(ref rho) when ref is pure.
double fidelity(const StateDensity& ref, const StateDensity& rho);
double fidelity(const DenseOperator& ref, const DenseOperator& rho);

struct CycleOptions {
  PulseErrorModel errors;
  bool include_closing_pulse = true;
  /// Extra free evolution between consecutive pulses sharing a nominal time
  /// (absolute time units). The group stays centred on its nominal time.
  double pulse_gap = 0.0;
  /// Linear drift of every detuning, d Delta / dt (angular frequency per time).
  double drift_rate = 0.0;
};

/// Ordered product of free-evolution factors and pulse propagators over one
/// cycle starting at `cycle_start` (only matters with drift).
DenseOperator cycle_propagator(const Sequence& seq, const SpinSystem& sys, const CycleOptions& options = {},
                               double cycle_start = 0.0);
DenseOperator cycle_propagator(const Sequence& seq, const DenseOperator& h_in, const CycleOptions& options = {},
                               double cycle_start = 0.0);

struct ObservableSeries {
  std::vector<double> times;
  std::vector<double> fidelity;
  std::vector<double> mx;
  std::vector<double> my;
  std::vector<double> mz;

  std::size_t size() const { return times.size(); }
};

struct EvolutionOptions {
  std::size_t n_cycles = 1;
  std::size_t sample_every = 1;  // samples at k * sample_every cycles, plus the final cycle
  double cycle_time = 1.0;       // used only to label sample times
  std::size_t renormalize_every = 256;
  double drift_tolerance = 1e-8;
};

/// rho_k = U rho_{k-1} U^dag with samples at cycle boundaries (k = 0 included).
ObservableSeries stroboscopic_evolution(const StateDensity& rho0, const DenseOperator& cycle,
                                        const EvolutionOptions& options);
/// Same with a per-cycle propagator (cycle index starting at 0).
ObservableSeries stroboscopic_evolution(const StateDensity& rho0,
                                        const std::function<DenseOperator(std::size_t)>& cycle_at,
                                        const EvolutionOptions& options);

struct FidOptions {
  /// Sampling step; 0 picks 0.05 / ||H_in||.
  double resolution = 0.0;
  /// Simulated horizon; 0 picks 1000 / ||H_in||.
  double horizon = 0.0;
};

/// Normalized free-induction signal <I_x,total>(t) / <I_x,total>(0) from the
/// all-+x state, evaluated exactly in the eigenbasis of H_in.
class FreeInductionSignal {
 public:
  explicit FreeInductionSignal(const DenseOperator& h_in);
  double operator()(double t) const;
  double hamiltonian_norm() const { return norm_; }

 private:
  Eigen::VectorXd energies_;
  DenseOperator weights_;  // rho_mn X_nm in the eigenbasis
  double norm_ = 0.0;
  double initial_ = 1.0;
};

/// First time the free-induction signal drops below 1/e, refined by bisection.
/// nullopt when no crossing occurs within the horizon.
std::optional<double> fid_decay_time(const SpinSystem& sys, const FidOptions& options = {});

enum class InitialStateKind { all_transverse_x, single_qubit };

struct InitialStateSpec {
  InitialStateKind kind = InitialStateKind::all_transverse_x;
  std::size_t site = 0;
  std::array<double, 3> bloch{1.0, 0.0, 0.0};

  StateDensity build(std::size_t n_spins) const;
};

struct EnsembleOptions {
  std::size_t n_realizations = 1;
  std::size_t n_cycles = 1;
  std::size_t sample_every = 1;
  std::size_t workers = 1;
  CycleOptions cycle;
  InitialStateSpec initial;
  bool estimate_decay_time = false;
  FidOptions fid;
  /// Maximum fraction of failed realizations before the run fails.
  double max_failure_fraction = 0.1;
};

struct RealizationResult {
  std::size_t index = 0;
  bool failed = false;
  std::string error;
  SpinSystem system;
  ObservableSeries series;
  std::optional<double> decay_time;
};

struct EnsembleResult {
  std::string sequence;
  double tau = 0.0;
  std::vector<RealizationResult> realizations;
  std::vector<double> times;
  std::vector<double> mean_fidelity, stderr_fidelity;
  std::vector<double> mean_mx, mean_my, mean_mz;
  std::uint64_t seed = 0;
  std::string config_digest;

  std::size_t succeeded() const;
  /// Recompute the per-time statistics from the successful realizations.
  void recompute_statistics();
};

/// Runs `fn(i)` for i in [0, count) on up to `workers` threads. Each call
/// owns slot i, so results are independent of scheduling.
void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& fn);

/// Realizations of `spec` propagated under `seq`; realization i uses
/// realize_geometry(spec, i), so separate runs see identical systems.
EnsembleResult run_ensemble(const GeometrySpec& spec, const Sequence& seq, const EnsembleOptions& options);
/// Same with a fixed list of systems (one realization each).
EnsembleResult run_ensemble(const std::vector<SpinSystem>& systems, const Sequence& seq,
                            const EnsembleOptions& options);

/// Mean free-induction decay time over realizations that decay within the horizon.
std::optional<double> ensemble_decay_time(const GeometrySpec& spec, std::size_t n_realizations,
                                          const FidOptions& options = {}, std::size_t workers = 1);

}  // namespace ddsim
