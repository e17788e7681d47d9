#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "kinklab/evolution.hpp"
#include "kinklab/multikink.hpp"
#include "kinklab/potential.hpp"

namespace kinklab {

// Base cutoff: 1 on (-inf, 1/3], 0 on [2/3, inf), quintic smoothstep in
// between (C^2).
struct Cutoff {
  double operator()(double s) const;
};

// Partition of unity chi_1..chi_n subordinate to the kink positions.
std::vector<double> cutoff_partition(const Cutoff& chi, const Positions& a, std::size_t k,
                                     const Grid& grid);

struct FitOptions {
  double tolerance = 1e-11;  // on max_k |Gamma_k|
  int max_iterations = 12;
  double gap_floor = 2.0;    // GapCollapse below this
  // Inner products are taken over [a_1 - margin, a_n + margin].
  double margin = 36.0;
};

// phi = H(a) + g with <H_k', g> = 0 for every k.
struct ModulationFit {
  Positions a;
  FieldSnapshot g;  // (phi - H(a), phidot)
  std::vector<double> p;
  double rho = 0.0;
  double ortho_residual = 0.0;
  double g_energy = 0.0;  // ||g||_E^2 = ||phidot||^2 + ||g||_{H^1}^2
  double g_h1 = 0.0;      // ||g||_{H^1}^2
  int iterations = 0;
};

// Newton iteration on Gamma_k(a) = <H'(. - a_k), phi - H(a)> from `seed`.
ModulationFit fit_modulation(const FieldSnapshot& snapshot, const KinkProfile& profile,
                             const Positions& seed, const FitOptions& options = {});

// p_k = <-(-1)^k H_k' + chi_k g_x, phidot>
std::vector<double> localized_momenta(const ModulationFit& fit, const KinkProfile& profile,
                                      const Cutoff& chi = {});

// Solves the linear system for a' obtained by differentiating the
// orthogonality conditions in time. SingularSystem when the matrix is not
// diagonally dominant.
std::vector<double> modulation_velocity(const ModulationFit& fit, const KinkProfile& profile,
                                        const std::vector<double>& phidot);

// One tracked time; the remainder field itself is not kept.
struct ModulationRecord {
  double t = 0.0;
  Positions a;
  std::vector<double> p;
  std::vector<double> a_dot;  // from modulation_velocity
  double rho = 0.0;
  double ortho_residual = 0.0;
  double g_energy = 0.0;
  double g_h1 = 0.0;
  double dtg_l2 = 0.0;  // ||d/dt g||^2 with d/dt g = phidot + sum_j (-1)^j a_j' H_j'
  double energy = 0.0;  // E(phi)
};

struct ModulationSeries {
  std::vector<ModulationRecord> records;
  bool lost = false;
  std::string lost_reason;

  std::size_t size() const { return records.size(); }
  std::vector<double> times() const;
  // y_k(t)
  std::vector<std::vector<double>> gaps() const;
  // q_k(t) = (p_{k+1} - p_k) / M
  std::vector<std::vector<double>> relative_momenta(double mass) const;
};

struct TrackOptions {
  FitOptions fit;
  double gap_floor = 4.0;  // TrackingLost below this
};

// Streaming tracker: feed snapshots in time order, seeds chained from the
// previous fit.
class ModulationTracker {
 public:
  ModulationTracker(const KinkProfile& profile, const PotentialModel& potential,
                    Positions seed, TrackOptions options = {});

  // Returns false once tracking is lost; later calls are ignored.
  bool observe(double t, const FieldSnapshot& snapshot);

  const ModulationSeries& series() const { return series_; }
  ModulationSeries take_series() { return std::move(series_); }
  const std::optional<ModulationFit>& last_fit() const { return last_; }

 private:
  const KinkProfile& profile_;
  const PotentialModel& potential_;
  Positions seed_;
  TrackOptions options_;
  ModulationSeries series_;
  std::optional<ModulationFit> last_;
};

// Tracks every stored snapshot of a trajectory; seeded at `seed` or, when
// absent, at the zero crossings of the first snapshot.
ModulationSeries track(const Trajectory& traj, const KinkProfile& profile,
                       const PotentialModel& potential, std::size_t n,
                       std::optional<Positions> seed = std::nullopt,
                       const TrackOptions& options = {});

struct NewtonResidual {
  double t;
  double r1;  // max_k |M a_k' - p_k| / rho
  double r2;  // max_k |p_k' - F_k(a)| (-log rho) / rho
};

// Centered differences of the tracked a(t) and p(t) at interior samples.
std::vector<NewtonResidual> newton_law_residuals(const ModulationSeries& series,
                                                 const KinkProfile& profile);

// Boundaries 0 = n^(0) < n^(1) < ... < n^(l) = n of the groups of consecutive
// kinks separated by gaps below the threshold.
std::vector<std::size_t> cluster_grouping(const Positions& a, double gap_threshold);
std::vector<std::size_t> cluster_grouping(const ModulationFit& fit, double gap_threshold);

}  // namespace kinklab
