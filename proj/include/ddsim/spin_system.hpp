#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ddsim/operator_sum.hpp"

namespace ddsim {

using Vec3 = std::array<double, 3>;

/// Detunings and secular dipolar couplings of a homonuclear spin-1/2
/// ensemble, in angular frequency units (hbar = 1).
class SpinSystem {
 public:
  SpinSystem() = default;
  /// `couplings` is a row-major n x n matrix; must be symmetric with zero diagonal.
  SpinSystem(std::vector<double> detunings, std::vector<double> couplings);

  static SpinSystem pair(double detuning1, double detuning2, double coupling);

  std::size_t n_spins() const { return detunings_.size(); }
  const std::vector<double>& detunings() const { return detunings_; }
  const std::vector<double>& couplings() const { return couplings_; }
  double coupling(std::size_t i, std::size_t j) const { return couplings_[i * n_spins() + j]; }

  /// Geometry description this system was realized from, if any.
  std::string provenance;

  friend bool operator==(const SpinSystem& a, const SpinSystem& b) {
    return a.detunings_ == b.detunings_ && a.couplings_ == b.couplings_;
  }

 private:
  std::vector<double> detunings_;
  std::vector<double> couplings_;
};

enum class GeometryMode { box, lattice };

struct GeometrySpec {
  std::size_t n_spins = 4;
  GeometryMode mode = GeometryMode::box;
  /// Explicit positions; when non-empty they replace random placement.
  std::vector<Vec3> positions;
  double box_size = 2.0;
  double min_separation = 0.5;
  double lattice_constant = 1.0;
  std::size_t lattice_extent = 4;  // sites per cube edge
  double occupancy = 0.3;
  Vec3 field_axis{0.0, 0.0, 1.0};
  /// Absorbs gamma^2 hbar^2 / 4 and unit-system constants.
  double prefactor = 1.0;
  double detuning_mean = 0.0;
  double detuning_sigma = 1.0;
  std::vector<double> detunings;  // explicit list overrides the distribution
  /// 2 is the secular (1 - 3 cos^2) form; 1 reproduces (1 - 3 cos) for comparison.
  int dipolar_angle_power = 2;
  std::uint64_t seed = 1;
  std::size_t max_placement_attempts = 10000;

  void validate() const;
};

/// prefactor * (1 - 3 cos^p theta) / r^3 with cos theta = r_hat . field_axis.
double dipolar_coupling(const Vec3& r, const Vec3& field_axis, double prefactor, int angle_power = 2);

/// sum_i Delta_i I_z^i + sum_{i<j} a_ij (3 I_z^i I_z^j - I^i . I^j), exact.
SymbolicOperator build_internal_hamiltonian(const SpinSystem& sys);

/// Same form with arbitrary (e.g. symbolic) coefficients. `couplings` is row-major n x n;
/// only the upper triangle is read.
template <class C>
OperatorSum<C> internal_hamiltonian(const std::vector<C>& detunings, const std::vector<C>& couplings) {
  const std::size_t n = detunings.size();
  if (couplings.size() != n * n) throw ArgumentError("coupling matrix must be n x n");
  OperatorSum<C> h(n);
  for (std::size_t i = 0; i < n; ++i) {
    h += single_spin_operator<C>(Axis::z, i, n) * detunings[i];
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const C& a = couplings[i * n + j];
      if (coeff_is_zero(a)) continue;
      OperatorSum<C> pair(n);
      for (Axis ax : {Axis::x, Axis::y, Axis::z}) {
        auto bilinear = multiply(single_spin_operator<C>(ax, i, n), single_spin_operator<C>(ax, j, n));
        pair += bilinear * C(ax == Axis::z ? 2 : -1);  // 3 IzIz - (IxIx + IyIy + IzIz)
      }
      h += pair * a;
    }
  }
  return h;
}

/// Pair Hamiltonian with symbols `d1`, `d2`, `a` left unevaluated.
SymbolicOperator symbolic_pair_hamiltonian();

/// Fully symbolic N-spin Hamiltonian with symbols `d<i>` and `a<i>_<j>` (1-based, i < j).
SymbolicOperator symbolic_internal_hamiltonian(std::size_t n_spins);

/// Dipolar part only (detunings set to zero) and Zeeman part only.
SymbolicOperator dipolar_part(const SymbolicOperator& h);
SymbolicOperator zeeman_part(const SymbolicOperator& h);

/// Deterministic in (spec, realization index): the generator stream is
/// seeded from (spec.seed, realization).
SpinSystem realize_geometry(const GeometrySpec& spec, std::uint64_t realization = 0);

/// Positions actually used by realize_geometry (exposed for tests).
std::vector<Vec3> place_spins(const GeometrySpec& spec, std::uint64_t realization = 0);

/// Structured text record (YAML) with detunings and the coupling matrix at
/// round-trip precision.
std::string dump_spin_system(const SpinSystem& sys);
SpinSystem load_spin_system(const std::string& text);

}  // namespace ddsim
