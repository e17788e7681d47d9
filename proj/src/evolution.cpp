#include "kinklab/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "kinklab/error.hpp"

namespace kinklab {

Energies energy(const FieldSnapshot& s, const PotentialModel& potential,
                std::optional<Window> window) {
  Energies e;
  e.potential = potential_energy(s, potential, window);
  // Kinetic part through the same windowed trapezoid.
  std::vector<double> density(s.grid.size);
  for (std::size_t i = 0; i < density.size(); ++i) density[i] = 0.5 * s.phidot[i] * s.phidot[i];
  std::size_t first = 0, last = s.grid.size == 0 ? 0 : s.grid.size - 1;
  if (window) {
    const double eps = 1e-9;
    const double lastd = static_cast<double>(last);
    first = static_cast<std::size_t>(
        std::clamp(std::ceil((window->lo - s.grid.x0) / s.grid.dx - eps), 0.0, lastd));
    last = static_cast<std::size_t>(
        std::clamp(std::floor((window->hi - s.grid.x0) / s.grid.dx + eps), 0.0, lastd));
  }
  e.kinetic = trapezoid(density, s.grid.dx, first, last);
  e.total = e.potential + e.kinetic;
  return e;
}

std::optional<Window> core_extent(const FieldSnapshot& s) {
  std::optional<Window> w;
  for (std::size_t i = 0; i < s.phi.size(); ++i) {
    if (std::abs(s.phi[i]) < 0.9) {
      const double x = s.grid.x(i);
      if (!w) w = Window{x, x};
      w->hi = x;
    }
  }
  return w;
}

Grid evolution_grid(const Positions& a, double t_span, double dx) {
  const double margin = std::abs(t_span) + 20.0;
  if (a.empty()) return Grid::covering(-margin, margin, dx);
  return Grid::covering(a[0] - margin, a[a.size() - 1] + margin, dx);
}

FieldSnapshot time_reversed(const FieldSnapshot& s) {
  FieldSnapshot r = s;
  for (double& v : r.phidot) v = -v;
  return r;
}

namespace {

void acceleration(const FieldSnapshot& s, const PotentialModel& potential,
                  std::vector<double>& acc) {
  laplacian4(s.phi, s.grid.dx, s.sector.left, s.sector.right, acc);
  for (std::size_t i = 0; i < acc.size(); ++i) acc[i] -= potential.u1(s.phi[i]);
}

}  // namespace

Trajectory evolve(const FieldSnapshot& initial, const PotentialModel& potential,
                  const EvolutionConfig& config, const SampleObserver& observer) {
  const double span = config.t_end - config.t_start;
  if (!(config.dt > 0.0)) throw KinkError(ErrorCode::NonPositiveStep, "dt must be positive");
  if (config.dt / initial.grid.dx > config.courant_limit) {
    std::ostringstream msg;
    msg << "dt/dx = " << config.dt / initial.grid.dx << " exceeds " << config.courant_limit;
    throw KinkError(ErrorCode::CflViolation, msg.str());
  }
  if (initial.phi.size() != initial.grid.size || initial.phidot.size() != initial.grid.size) {
    throw KinkError(ErrorCode::InvalidArgument, "snapshot arrays do not match the grid");
  }
  if (const auto core = core_extent(initial)) {
    const double reach = std::abs(span) + config.guard_margin;
    if (core->lo - initial.grid.x_min() < reach || initial.grid.x_max() - core->hi < reach) {
      throw KinkError(ErrorCode::BoundaryContamination,
                      "kink cores lie within light-cone reach of the clamped ends");
    }
  }

  const auto steps = static_cast<std::size_t>(std::llround(std::abs(span) / config.dt));
  const double dt = steps == 0 ? 0.0 : span / static_cast<double>(steps);
  const std::size_t stride = std::max<std::size_t>(1, config.snapshot_stride);

  Trajectory traj;
  FieldSnapshot s = initial;
  std::vector<double> acc(s.grid.size);
  acceleration(s, potential, acc);

  auto record = [&](std::size_t step) {
    const double t = config.t_start + static_cast<double>(step) * dt;
    traj.times.push_back(t);
    traj.energies.push_back(energy(s, potential));
    if (config.store_snapshots) traj.snapshots.push_back(s);
    return observer ? observer(t, s) : true;
  };

  if (!record(0)) return traj;
  const double half = 0.5 * dt;
  for (std::size_t step = 1; step <= steps; ++step) {
    for (std::size_t i = 0; i < s.grid.size; ++i) {
      s.phidot[i] += half * acc[i];
      s.phi[i] += dt * s.phidot[i];
    }
    acceleration(s, potential, acc);
    for (std::size_t i = 0; i < s.grid.size; ++i) s.phidot[i] += half * acc[i];

    if (step % stride == 0 || step == steps) {
      const double peak = std::abs(*std::max_element(
          s.phi.begin(), s.phi.end(), [](double a, double b) { return std::abs(a) < std::abs(b); }));
      if (!(peak <= config.blowup_threshold)) {
        throw KinkError(ErrorCode::BlowupDetected, "max |phi| exceeded the blow-up threshold");
      }
      if (!record(step)) break;
    }
  }
  return traj;
}

std::vector<DecaySample> kinetic_decay_diagnostic(const Trajectory& traj) {
  if (traj.times.size() < 2) {
    throw KinkError(ErrorCode::InvalidArgument, "trajectory needs at least two samples");
  }
  std::vector<DecaySample> out;
  out.reserve(traj.times.size());
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    const double t = traj.times[i];
    out.push_back({t, traj.energies[i].kinetic * t * t});
  }
  return out;
}

}  // namespace kinklab
