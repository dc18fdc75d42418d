#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "ddsim/average_hamiltonian.hpp"
#include "ddsim/dynamics.hpp"
#include "test_util.hpp"

using namespace ddsim;
using ddsim::testing::max_abs_diff;
using std::numbers::pi;

namespace {

DenseOperator hamiltonian(const SpinSystem& sys) { return to_dense(build_internal_hamiltonian(sys)); }

// Second implementation of the cycle: walk the pulse times in order with
// Taylor-series free factors and closed-form rotations.
DenseOperator oracle_cycle(const Sequence& seq, const DenseOperator& h) {
  const std::size_t n = spins_for_dimension(h.rows());
  DenseOperator u = DenseOperator::Identity(h.rows(), h.cols());
  double now = 0.0;
  for (const auto& e : seq.events()) {
    const double t = e.time_units * seq.tau();
    if (t > now) u = ddsim::testing::oracle_expm(h, t - now) * u;
    now = t;
    u = ddsim::testing::oracle_rotation(e.azimuth, e.angle, n) * u;
  }
  if (seq.cycle_time() > now) u = ddsim::testing::oracle_expm(h, seq.cycle_time() - now) * u;
  return u;
}

std::vector<SpinSystem> random_systems(std::size_t count, std::size_t n, std::uint64_t salt) {
  auto rng = ddsim::testing::test_rng(salt);
  std::vector<SpinSystem> out;
  for (std::size_t k = 0; k < count; ++k) out.push_back(ddsim::testing::random_system(n, rng));
  return out;
}

double final_mean_fidelity(const std::vector<SpinSystem>& systems, const Sequence& seq, const CycleOptions& cycle,
                           std::size_t n_cycles) {
  EnsembleOptions opts;
  opts.n_cycles = n_cycles;
  opts.sample_every = n_cycles;
  opts.cycle = cycle;
  return run_ensemble(systems, seq, opts).mean_fidelity.back();
}

}  // namespace

TEST(InitialState, Examples) {
  DenseOperator plus_x(2, 2);
  plus_x << 0.5, 0.5, 0.5, 0.5;
  EXPECT_LT(max_abs_diff(all_transverse_x(1).matrix(), plus_x), 1e-15);
  DenseOperator up = DenseOperator::Zero(2, 2);
  up(0, 0) = 1.0;
  EXPECT_LT(max_abs_diff(single_qubit_state(1, 0, {0, 0, 1}).matrix(), up), 1e-15);
  const DenseOperator ix = to_dense(total_spin_operator<Complex>(Axis::x, 2));
  EXPECT_NEAR((all_transverse_x(2).matrix() * ix).trace().real(), 1.0, 1e-15);
  EXPECT_TRUE(all_transverse_x(3).is_pure());
  EXPECT_FALSE(single_qubit_state(1, 0, {0.5, 0, 0}).is_pure());
  EXPECT_THROW(single_qubit_state(1, 0, {1, 1, 0}), ValidationError);
  EXPECT_THROW(single_qubit_state(2, 2, {1, 0, 0}), ArgumentError);
}

TEST(InitialState, RejectsInvalidDensities) {
  EXPECT_THROW(StateDensity(DenseOperator::Identity(2, 2)), ValidationError);
  DenseOperator negative(2, 2);
  negative << 1.5, 0, 0, -0.5;
  EXPECT_THROW(StateDensity{negative}, ValidationError);
  DenseOperator skew(2, 2);
  skew << 0.5, 0.3, -0.3, 0.5;
  EXPECT_THROW(StateDensity{skew}, ValidationError);
}

TEST(Fidelity, Examples) {
  const auto x = all_transverse_x(1);
  const auto up = single_qubit_state(1, 0, {0, 0, 1});
  const auto down = single_qubit_state(1, 0, {0, 0, -1});
  const auto mixed = single_qubit_state(1, 0, {0, 0, 0});
  EXPECT_NEAR(fidelity(x, x), 1.0, 1e-14);
  EXPECT_NEAR(fidelity(up, down), 0.0, 1e-14);
  EXPECT_NEAR(fidelity(x, up), 0.5, 1e-14);
  EXPECT_NEAR(fidelity(mixed, mixed), 1.0, 1e-12);
  // Oracle: sqrt(ref) rho sqrt(ref) = |0><0| / 2, whose root has trace 1/sqrt(2).
  EXPECT_NEAR(fidelity(mixed, up), 0.5, 1e-12);
  // Commuting mixed states: (sum sqrt(p_i q_i))^2.
  const auto a = single_qubit_state(1, 0, {0, 0, 0.6});
  const auto b = single_qubit_state(1, 0, {0, 0, -0.2});
  const double expected = std::pow(std::sqrt(0.8 * 0.4) + std::sqrt(0.2 * 0.6), 2);
  EXPECT_NEAR(fidelity(a, b), expected, 1e-12);
  EXPECT_THROW(fidelity(x, all_transverse_x(2)), ArgumentError);
}

TEST(Stroboscopic, IdentityKeepsStateConstant) {
  EvolutionOptions opts;
  opts.n_cycles = 10;
  const auto series = stroboscopic_evolution(all_transverse_x(2), DenseOperator::Identity(4, 4), opts);
  ASSERT_EQ(series.size(), 11u);
  for (std::size_t k = 0; k < series.size(); ++k) {
    EXPECT_NEAR(series.fidelity[k], 1.0, 1e-14);
    EXPECT_NEAR(series.mx[k], 1.0, 1e-14);
    EXPECT_NEAR(series.my[k], 0.0, 1e-14);
  }
}

TEST(Stroboscopic, LarmorPrecession) {
  const double delta = 1.3, dt = 0.05;
  const auto sys = SpinSystem({delta}, {0.0});
  EvolutionOptions opts;
  opts.n_cycles = 200;
  opts.sample_every = 7;
  opts.cycle_time = dt;
  const auto series = stroboscopic_evolution(all_transverse_x(1), cycle_propagator(free_evolution(dt), sys), opts);
  for (std::size_t k = 0; k < series.size(); ++k) {
    const double t = series.times[k];
    EXPECT_NEAR(series.mx[k], 0.5 * std::cos(delta * t), 1e-12);
    EXPECT_NEAR(series.my[k], 0.5 * std::sin(delta * t), 1e-12);
    EXPECT_NEAR(series.fidelity[k], 0.5 * (1 + std::cos(delta * t)), 1e-12);
  }
  EXPECT_DOUBLE_EQ(series.times.back(), 200 * dt);
  EXPECT_DOUBLE_EQ(series.times[1], 7 * dt);
}

TEST(Stroboscopic, DetectsNonUnitaryDrift) {
  EvolutionOptions opts;
  opts.n_cycles = 300;
  EXPECT_THROW(stroboscopic_evolution(all_transverse_x(1), 1.0001 * DenseOperator::Identity(2, 2), opts),
               NumericalDriftError);
  opts.n_cycles = 0;
  EXPECT_THROW(stroboscopic_evolution(all_transverse_x(1), DenseOperator::Identity(2, 2), opts), ArgumentError);
}

TEST(CyclePropagator, MatchesOrderedProductOracle) {
  const auto seq = proposed_sequence(0.01);
  const DenseOperator h = hamiltonian(SpinSystem::pair(1.0, -1.0, 0.5));
  EXPECT_LT(max_abs_diff(cycle_propagator(seq, h), oracle_cycle(seq, h)), 1e-12);
  for (const auto& name : builtin_sequence_names()) {
    const auto s = sequence_by_name(name, 0.03);
    const DenseOperator h3 = hamiltonian(random_systems(1, 3, 30).front());
    EXPECT_LT(max_abs_diff(cycle_propagator(s, h3), oracle_cycle(s, h3)), 1e-12) << name;
  }
}

TEST(CyclePropagator, EqualsInteractionFramePropagatorUpToPhase) {
  const auto seq = proposed_sequence(0.02);
  const DenseOperator h = hamiltonian(SpinSystem::pair(0.7, 0.2, -0.9));
  EXPECT_LT(frobenius_distance_mod_phase(cycle_propagator(seq, h), interaction_frame_propagator(seq, h)), 1e-12);
}

TEST(CyclePropagator, TrivialCases) {
  const DenseOperator zero = DenseOperator::Zero(8, 8);
  const DenseOperator u = cycle_propagator(proposed_sequence(0.1), zero);
  EXPECT_LT(frobenius_distance_mod_phase(u, DenseOperator::Identity(8, 8)), 1e-12);
  const DenseOperator h = hamiltonian(SpinSystem::pair(0.3, 1.0, 0.4));
  EXPECT_LT(max_abs_diff(cycle_propagator(free_evolution(2.0), h), expm_hermitian(h, 2.0)), 1e-12);
  EXPECT_TRUE(is_unitary(cycle_propagator(mrev8_sequence(0.3), h), 1e-11));
}

TEST(CyclePropagator, IdealErrorModelIsContinuous) {
  const auto seq = proposed_sequence(0.05);
  const DenseOperator h = hamiltonian(random_systems(1, 3, 31).front());
  CycleOptions explicit_ideal;
  explicit_ideal.errors = PulseErrorModel{0.0, 0.0, 0.0, true};
  const DenseOperator ideal = cycle_propagator(seq, h);
  EXPECT_LT(max_abs_diff(cycle_propagator(seq, h, explicit_ideal), ideal), 1e-12);
  CycleOptions tiny;
  tiny.errors.flip_error = 1e-9;
  tiny.errors.phase_offset = 1e-9;
  EXPECT_LT(max_abs_diff(cycle_propagator(seq, h, tiny), ideal), 1e-7);
  CycleOptions narrow;
  narrow.errors.width = 1e-9;
  narrow.errors.include_internal_during_pulse = true;
  EXPECT_LT(max_abs_diff(cycle_propagator(seq, h, narrow), ideal), 1e-7);
}

TEST(CyclePropagator, ClosingPulseToggle) {
  const auto seq = proposed_sequence(0.05);
  const DenseOperator h = hamiltonian(SpinSystem::pair(1.0, -1.0, 0.5));
  CycleOptions open;
  open.include_closing_pulse = false;
  const DenseOperator expected = ddsim::testing::oracle_rotation(0.0, pi, 2) * cycle_propagator(seq, h, open);
  EXPECT_LT(frobenius_distance_mod_phase(cycle_propagator(seq, h), expected), 1e-12);
}

TEST(CyclePropagator, RejectsOverlappingPulses) {
  CycleOptions wide;
  wide.errors.width = 0.9;
  EXPECT_THROW(cycle_propagator(proposed_sequence(1.0), hamiltonian(SpinSystem::pair(1, 1, 1)), wide), ArgumentError);
}

TEST(Stroboscopic, UnitarityHeldOverManyCycles) {
  const auto sys = random_systems(1, 5, 32).front();
  const DenseOperator u = cycle_propagator(proposed_sequence(0.02), sys);
  DenseOperator rho = all_transverse_x(5).matrix();
  for (int c = 0; c < 10000; ++c) rho = u * rho * u.adjoint();
  EXPECT_LT((rho - rho.adjoint()).cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_NEAR(rho.trace().real(), 1.0, 1e-8);
  EvolutionOptions opts;
  opts.n_cycles = 10000;
  opts.sample_every = 1000;
  const auto series = stroboscopic_evolution(all_transverse_x(5), u, opts);
  for (double f : series.fidelity) {
    EXPECT_LE(f, 1.0 + 1e-10);
    EXPECT_GE(f, -1e-10);
  }
}

TEST(Dynamics, ProposedBeatsFreeEvolutionAtSmallTau) {
  const auto systems = random_systems(4, 3, 33);
  const double tau = 0.01;
  const auto proposed = proposed_sequence(tau);
  const std::size_t cycles = 400;
  EnsembleOptions opts;
  opts.n_cycles = cycles;
  opts.sample_every = 20;
  const auto dd = run_ensemble(systems, proposed, opts);
  const auto free = run_ensemble(systems, free_evolution(proposed.cycle_time()), opts);
  ASSERT_EQ(dd.times.size(), free.times.size());
  for (std::size_t k = 1; k < dd.times.size(); ++k) EXPECT_GT(dd.mean_fidelity[k], free.mean_fidelity[k]) << k;
}

TEST(Dynamics, GapBetweenCompositePulsesDegradesFidelity) {
  const auto systems = random_systems(6, 3, 34);
  const double tau = 0.01;
  double previous = 2.0;
  for (double gap : {0.0, 0.25 * tau, 0.5 * tau, tau}) {
    CycleOptions cycle;
    cycle.pulse_gap = gap;
    const double f = final_mean_fidelity(systems, proposed_sequence(tau), cycle, 50);
    EXPECT_LT(f, previous) << gap;
    previous = f;
  }
}

TEST(Dynamics, DriftOrdering) {
  const auto systems = random_systems(4, 3, 35);
  const auto seq = proposed_sequence(0.02);
  const double tc = seq.cycle_time();
  const std::size_t cycles = 200;
  const double fixed = final_mean_fidelity(systems, seq, {}, cycles);
  CycleOptions slow, fast;
  slow.drift_rate = 1e-3 / (tc * tc);
  fast.drift_rate = 1e1 / (tc * tc);
  const double slow_gap = std::abs(final_mean_fidelity(systems, seq, slow, cycles) - fixed);
  const double fast_gap = std::abs(final_mean_fidelity(systems, seq, fast, cycles) - fixed);
  EXPECT_LT(slow_gap, 0.05);
  EXPECT_GT(fast_gap, 10 * slow_gap);
}

TEST(Fid, LarmorClosedForm) {
  for (double delta : {0.5, 2.0, -3.0}) {
    const auto td = fid_decay_time(SpinSystem({delta}, {0.0}));
    ASSERT_TRUE(td.has_value());
    const double expected = std::acos(std::exp(-1.0)) / std::abs(delta);
    EXPECT_NEAR(*td / expected, 1.0, 1e-6);
  }
  EXPECT_FALSE(fid_decay_time(SpinSystem({0.0}, {0.0})).has_value());
}

TEST(Fid, PairAgainstTripletOracle) {
  // Delta = 0: the +x product state lives in the triplet, with energies
  // a/2 (T+-) and -a (T0); <I_x> oscillates as cos(3 a t / 2).
  for (double a : {0.4, 1.0, -2.5}) {
    const auto td = fid_decay_time(SpinSystem::pair(0.0, 0.0, a));
    ASSERT_TRUE(td.has_value());
    EXPECT_NEAR(*td, std::acos(std::exp(-1.0)) / (1.5 * std::abs(a)), 1e-6 * std::abs(*td));
  }
}

TEST(Fid, SignalMatchesDensePropagation) {
  const auto sys = random_systems(1, 3, 36).front();
  const DenseOperator h = hamiltonian(sys);
  const FreeInductionSignal signal(h);
  const DenseOperator ix = to_dense(total_spin_operator<Complex>(Axis::x, 3));
  const DenseOperator rho0 = all_transverse_x(3).matrix();
  const double norm0 = (rho0 * ix).trace().real();
  for (double t : {0.0, 0.3, 1.7, 5.0}) {
    const DenseOperator u = ddsim::testing::oracle_expm(h, t);
    const double direct = (u * rho0 * u.adjoint() * ix).trace().real() / norm0;
    EXPECT_NEAR(signal(t), direct, 1e-12);
  }
}

TEST(Fid, HorizonMarker) {
  FidOptions opts;
  opts.horizon = 0.01;
  EXPECT_FALSE(fid_decay_time(SpinSystem::pair(0.0, 0.0, 1.0), opts).has_value());
}

TEST(Ensemble, SingleRealizationHasZeroStderr) {
  EnsembleOptions opts;
  opts.n_cycles = 20;
  const auto systems = random_systems(1, 2, 37);
  const auto result = run_ensemble(systems, proposed_sequence(0.05), opts);
  ASSERT_EQ(result.succeeded(), 1u);
  EXPECT_EQ(result.mean_fidelity, result.realizations[0].series.fidelity);
  for (double s : result.stderr_fidelity) EXPECT_EQ(s, 0.0);
}

TEST(Ensemble, DeterministicAcrossRunsAndWorkers) {
  GeometrySpec spec;
  spec.n_spins = 3;
  spec.seed = 5;
  EnsembleOptions opts;
  opts.n_realizations = 6;
  opts.n_cycles = 30;
  opts.sample_every = 3;
  opts.estimate_decay_time = true;
  const auto a = run_ensemble(spec, proposed_sequence(0.05), opts);
  opts.workers = 3;
  const auto b = run_ensemble(spec, proposed_sequence(0.05), opts);
  EXPECT_EQ(a.mean_fidelity, b.mean_fidelity);
  EXPECT_EQ(a.stderr_fidelity, b.stderr_fidelity);
  EXPECT_EQ(a.mean_mx, b.mean_mx);
  for (std::size_t i = 0; i < a.realizations.size(); ++i) {
    EXPECT_EQ(a.realizations[i].system, b.realizations[i].system);
    EXPECT_EQ(a.realizations[i].series.fidelity, b.realizations[i].series.fidelity);
    EXPECT_EQ(a.realizations[i].decay_time, b.realizations[i].decay_time);
  }
}

TEST(Ensemble, StatisticsRecomputableFromRealizations) {
  GeometrySpec spec;
  spec.n_spins = 2;
  EnsembleOptions opts;
  opts.n_realizations = 4;
  opts.n_cycles = 10;
  auto result = run_ensemble(spec, cpmg_sequence(0.05), opts);
  const auto mean = result.mean_fidelity;
  const auto err = result.stderr_fidelity;
  result.recompute_statistics();
  EXPECT_EQ(result.mean_fidelity, mean);
  EXPECT_EQ(result.stderr_fidelity, err);
  const std::size_t last = mean.size() - 1;
  double sum = 0.0;
  for (const auto& r : result.realizations) sum += r.series.fidelity[last];
  EXPECT_NEAR(mean[last], sum / 4.0, 1e-15);
}

TEST(Ensemble, GenerationFailuresAreFatalBeyondThreshold) {
  GeometrySpec spec;
  spec.n_spins = 30;
  spec.box_size = 0.5;
  spec.min_separation = 0.4;
  spec.max_placement_attempts = 50;
  EnsembleOptions opts;
  opts.n_realizations = 2;
  EXPECT_THROW(run_ensemble(spec, proposed_sequence(0.1), opts), GenerationError);
}

TEST(Ensemble, ParallelForCoversEveryIndex) {
  std::vector<int> hits(100, 0);
  parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i] += 1; });
  for (int h : hits) EXPECT_EQ(h, 1);
  EXPECT_THROW(parallel_for(10, 2, [](std::size_t i) {
                 if (i == 7) throw std::runtime_error("boom");
               }),
               std::runtime_error);
}
