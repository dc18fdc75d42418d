#include "ddsim/spin_system.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace ddsim {

namespace {

double norm3(const Vec3& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); }

Vec3 sub3(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::mt19937_64 realization_stream(std::uint64_t seed, std::uint64_t realization) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(realization), static_cast<std::uint32_t>(realization >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace

SpinSystem::SpinSystem(std::vector<double> detunings, std::vector<double> couplings)
    : detunings_(std::move(detunings)), couplings_(std::move(couplings)) {
  const std::size_t n = detunings_.size();
  if (n == 0) throw ArgumentError("spin system needs at least one spin");
  if (n > 16) throw ArgumentError("spin systems above 16 spins are not supported by the dense backend");
  if (couplings_.empty()) couplings_.assign(n * n, 0.0);
  if (couplings_.size() != n * n) {
    throw ValidationError("coupling matrix has " + std::to_string(couplings_.size()) + " entries, expected " +
                          std::to_string(n * n));
  }
  for (double d : detunings_) {
    if (!std::isfinite(d)) throw ValidationError("detunings must be finite");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (couplings_[i * n + i] != 0.0) throw ValidationError("coupling matrix diagonal must be zero");
    for (std::size_t j = 0; j < n; ++j) {
      if (!std::isfinite(couplings_[i * n + j])) throw ValidationError("couplings must be finite");
      if (couplings_[i * n + j] != couplings_[j * n + i]) {
        throw ValidationError("coupling matrix must be symmetric");
      }
    }
  }
}

SpinSystem SpinSystem::pair(double detuning1, double detuning2, double coupling) {
  return SpinSystem({detuning1, detuning2}, {0.0, coupling, coupling, 0.0});
}

void GeometrySpec::validate() const {
  if (n_spins == 0) throw ArgumentError("geometry needs at least one spin");
  const double axis_norm = norm3(field_axis);
  if (std::abs(axis_norm - 1.0) > 1e-12) throw ArgumentError("field_axis must be a unit vector");
  if (dipolar_angle_power != 1 && dipolar_angle_power != 2) {
    throw ArgumentError("dipolar_angle_power must be 1 or 2");
  }
  if (!positions.empty() && positions.size() != n_spins) {
    throw ArgumentError("explicit positions must list exactly n_spins entries");
  }
  if (!detunings.empty() && detunings.size() != n_spins) {
    throw ArgumentError("explicit detunings must list exactly n_spins entries");
  }
  if (!(min_separation > 0.0)) throw ArgumentError("min_separation must be positive");
  if (detuning_sigma < 0.0) throw ArgumentError("detuning_sigma must be non-negative");
  if (mode == GeometryMode::box && !(box_size > 0.0)) throw ArgumentError("box_size must be positive");
  if (mode == GeometryMode::lattice) {
    if (!(lattice_constant > 0.0)) throw ArgumentError("lattice_constant must be positive");
    if (!(occupancy > 0.0 && occupancy <= 1.0)) throw ArgumentError("occupancy must be in (0, 1]");
    if (lattice_extent == 0) throw ArgumentError("lattice_extent must be positive");
  }
}

double dipolar_coupling(const Vec3& r, const Vec3& field_axis, double prefactor, int angle_power) {
  const double len = norm3(r);
  if (!(len > 0.0)) throw ArgumentError("dipolar_coupling: zero-length separation vector");
  if (angle_power != 1 && angle_power != 2) throw ArgumentError("dipolar_coupling: angle power must be 1 or 2");
  const double cos_theta = (r[0] * field_axis[0] + r[1] * field_axis[1] + r[2] * field_axis[2]) / len;
  const double angular = angle_power == 2 ? 1.0 - 3.0 * cos_theta * cos_theta : 1.0 - 3.0 * cos_theta;
  return prefactor * angular / (len * len * len);
}

SymbolicOperator build_internal_hamiltonian(const SpinSystem& sys) {
  std::vector<Polynomial> detunings;
  std::vector<Polynomial> couplings;
  for (double d : sys.detunings()) detunings.push_back(Polynomial::from_double(d));
  for (double a : sys.couplings()) couplings.push_back(Polynomial::from_double(a));
  return internal_hamiltonian(detunings, couplings);
}

SymbolicOperator symbolic_internal_hamiltonian(std::size_t n_spins) {
  std::vector<Polynomial> detunings;
  std::vector<Polynomial> couplings(n_spins * n_spins);
  for (std::size_t i = 0; i < n_spins; ++i) {
    detunings.push_back(Polynomial::symbol("d" + std::to_string(i + 1)));
    for (std::size_t j = i + 1; j < n_spins; ++j) {
      couplings[i * n_spins + j] = Polynomial::symbol("a" + std::to_string(i + 1) + "_" + std::to_string(j + 1));
    }
  }
  return internal_hamiltonian(detunings, couplings);
}

SymbolicOperator symbolic_pair_hamiltonian() {
  const auto a = Polynomial::symbol("a");
  return internal_hamiltonian<Polynomial>({Polynomial::symbol("d1"), Polynomial::symbol("d2")},
                                          {Polynomial{}, a, a, Polynomial{}});
}

SymbolicOperator dipolar_part(const SymbolicOperator& h) {
  SymbolicOperator out(h.n_spins());
  for (const auto& [w, c] : h.terms()) {
    if (w.weight() == 2) out.add_term(w, c);
  }
  return out;
}

SymbolicOperator zeeman_part(const SymbolicOperator& h) {
  SymbolicOperator out(h.n_spins());
  for (const auto& [w, c] : h.terms()) {
    if (w.weight() == 1) out.add_term(w, c);
  }
  return out;
}

std::vector<Vec3> place_spins(const GeometrySpec& spec, std::uint64_t realization) {
  spec.validate();
  if (!spec.positions.empty()) {
    for (std::size_t i = 0; i < spec.positions.size(); ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        if (norm3(sub3(spec.positions[i], spec.positions[j])) < spec.min_separation) {
          throw GenerationError("explicit positions " + std::to_string(j) + " and " + std::to_string(i) +
                                " are closer than min_separation");
        }
      }
    }
    return spec.positions;
  }
  auto rng = realization_stream(spec.seed, realization);
  std::vector<Vec3> out;
  if (spec.mode == GeometryMode::box) {
    std::uniform_real_distribution<double> coord(0.0, spec.box_size);
    std::size_t attempts = 0;
    while (out.size() < spec.n_spins) {
      if (++attempts > spec.max_placement_attempts) {
        throw GenerationError("could not place " + std::to_string(spec.n_spins) + " spins with min separation " +
                              std::to_string(spec.min_separation) + " in box of size " +
                              std::to_string(spec.box_size));
      }
      Vec3 p{coord(rng), coord(rng), coord(rng)};
      const bool clear = std::all_of(out.begin(), out.end(), [&](const Vec3& q) {
        return norm3(sub3(p, q)) >= spec.min_separation;
      });
      if (clear) out.push_back(p);
    }
    return out;
  }
  // Diluted cubic lattice: visit sites in random order, occupy each with the
  // given probability until n_spins are placed.
  const std::size_t m = spec.lattice_extent;
  std::vector<std::size_t> sites(m * m * m);
  std::iota(sites.begin(), sites.end(), std::size_t{0});
  std::shuffle(sites.begin(), sites.end(), rng);
  std::bernoulli_distribution occupied(spec.occupancy);
  for (std::size_t s : sites) {
    if (out.size() == spec.n_spins) break;
    if (!occupied(rng)) continue;
    const double a = spec.lattice_constant;
    out.push_back({a * static_cast<double>(s % m), a * static_cast<double>((s / m) % m),
                   a * static_cast<double>(s / (m * m))});
  }
  if (out.size() < spec.n_spins) {
    throw GenerationError("lattice with " + std::to_string(sites.size()) + " sites and occupancy " +
                          std::to_string(spec.occupancy) + " yielded fewer than " + std::to_string(spec.n_spins) +
                          " spins");
  }
  if (spec.lattice_constant < spec.min_separation) {
    throw GenerationError("lattice_constant is below min_separation");
  }
  return out;
}

SpinSystem realize_geometry(const GeometrySpec& spec, std::uint64_t realization) {
  const auto positions = place_spins(spec, realization);
  const std::size_t n = spec.n_spins;
  std::vector<double> couplings(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double a = dipolar_coupling(sub3(positions[j], positions[i]), spec.field_axis, spec.prefactor,
                                        spec.dipolar_angle_power);
      couplings[i * n + j] = a;
      couplings[j * n + i] = a;
    }
  }
  std::vector<double> detunings = spec.detunings;
  if (detunings.empty()) {
    // Separate stream from placement so detunings do not depend on how many
    // placement attempts were rejected.
    auto rng = realization_stream(spec.seed ^ 0x9e3779b97f4a7c15ULL, realization);
    std::normal_distribution<double> dist(spec.detuning_mean, spec.detuning_sigma);
    for (std::size_t i = 0; i < n; ++i) {
      detunings.push_back(spec.detuning_sigma == 0.0 ? spec.detuning_mean : dist(rng));
    }
  }
  SpinSystem sys(std::move(detunings), std::move(couplings));
  sys.provenance = std::string(spec.mode == GeometryMode::box ? "box" : "lattice") + " seed=" +
                   std::to_string(spec.seed) + " realization=" + std::to_string(realization);
  return sys;
}

std::string dump_spin_system(const SpinSystem& sys) {
  std::ostringstream os;
  const std::size_t n = sys.n_spins();
  os << "n_spins: " << n << "\n";
  os << "detunings: [";
  for (std::size_t i = 0; i < n; ++i) os << (i ? ", " : "") << fmt_double(sys.detunings()[i]);
  os << "]\n";
  os << "couplings:\n";
  for (std::size_t i = 0; i < n; ++i) {
    os << "  - [";
    for (std::size_t j = 0; j < n; ++j) os << (j ? ", " : "") << fmt_double(sys.coupling(i, j));
    os << "]\n";
  }
  if (!sys.provenance.empty()) os << "provenance: \"" << sys.provenance << "\"\n";
  return os.str();
}

SpinSystem load_spin_system(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ValidationError(std::string("spin system record: ") + e.what());
  }
  if (!root["detunings"]) throw ValidationError("spin system record lacks 'detunings'");
  auto detunings = root["detunings"].as<std::vector<double>>();
  const std::size_t n = detunings.size();
  std::vector<double> couplings;
  if (root["couplings"]) {
    for (const auto& row : root["couplings"]) {
      auto r = row.as<std::vector<double>>();
      if (r.size() != n) throw ValidationError("coupling row length differs from spin count");
      couplings.insert(couplings.end(), r.begin(), r.end());
    }
  }
  SpinSystem sys(std::move(detunings), std::move(couplings));
  if (root["provenance"]) sys.provenance = root["provenance"].as<std::string>();
  return sys;
}

}  // namespace ddsim
