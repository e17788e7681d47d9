#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "kinklab/multikink.hpp"
#include "kinklab/potential.hpp"

namespace kinklab {

struct EvolutionConfig {
  double dt = 0.01;
  double t_start = 0.0;
  // t_end < t_start runs the equation backward in time.
  double t_end = 1.0;
  // Leapfrog with the fourth-order stencil is stable for dt/dx < sqrt(3)/2.
  double courant_limit = 0.8;
  // Steps between recorded samples (energies always, snapshots if stored).
  std::size_t snapshot_stride = 10;
  bool store_snapshots = true;
  // Required distance between a kink core and the clamped ends, on top of
  // the light-cone reach |t_end - t_start|.
  double guard_margin = 10.0;
  double blowup_threshold = 10.0;
};

struct Energies {
  double total = 0.0;
  double potential = 0.0;
  double kinetic = 0.0;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<FieldSnapshot> snapshots;  // empty unless store_snapshots
  std::vector<Energies> energies;
};

// Called at every recorded sample; returning false stops the evolution after
// that sample.
using SampleObserver = std::function<bool(double t, const FieldSnapshot&)>;

// Integrates phi_tt = phi_xx - U'(phi) with Stormer-Verlet in time and
// fourth-order central differences in space; values beyond the grid are
// clamped to the sector vacua.
Trajectory evolve(const FieldSnapshot& initial, const PotentialModel& potential,
                  const EvolutionConfig& config, const SampleObserver& observer = {});

Energies energy(const FieldSnapshot& snapshot, const PotentialModel& potential,
                std::optional<Window> window = std::nullopt);

struct DecaySample {
  double t;
  double scaled_kinetic;  // E_k(t) t^2
};
std::vector<DecaySample> kinetic_decay_diagnostic(const Trajectory& traj);

// Grid covering [a_1 - margin, a_n + margin] with margin = |t_span| + 20.
Grid evolution_grid(const Positions& a, double t_span, double dx = 0.02);

// Reflection of phidot, used to run the flow backward with a forward solver.
FieldSnapshot time_reversed(const FieldSnapshot& s);

// Positions of the kink cores (|phi| < 0.9), leftmost and rightmost; empty
// for a vacuum.
std::optional<Window> core_extent(const FieldSnapshot& s);

}  // namespace kinklab
