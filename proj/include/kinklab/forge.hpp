#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "kinklab/evolution.hpp"
#include "kinklab/modulation.hpp"
#include "kinklab/multikink.hpp"
#include "kinklab/potential.hpp"

namespace kinklab {

inline constexpr double kDefaultL0 = 10.0;

struct ShotNumerics {
  double dx = 0.02;
  double dt = 0.01;
  std::size_t stride = 10;  // steps between tracked samples
};

struct ShootSpec {
  std::vector<double> target_gaps;
  double L = 12.0;
  double T = 40.0;
  double L1 = 0.0;  // search box [L1, L2]^{n-1}
  double L2 = 0.0;
  double rho_exit = 0.0;
  double L0 = kDefaultL0;
  ShotNumerics numerics;

  std::size_t n() const { return target_gaps.size() + 1; }
  // Box L1 = L - 2, L2 = L + 2 log T + 6 and rho_exit = 2n e^{-L1}.
  static ShootSpec with_defaults(std::vector<double> target_gaps, double L, double T,
                                 double L0 = kDefaultL0);
  // InvalidArgument when an invariant fails.
  void validate() const;
};

struct DeltaSample {
  double t;
  double delta_hat;  // rho + ||g||_E^2
  double scaled;     // delta_hat (e^L + t^2)
};

struct ShootResult {
  std::vector<double> gaps_at_T;
  Positions a_T;
  std::vector<double> v_T;
  Trajectory trajectory;  // energies only
  ModulationSeries series;
  double exit_time = 0.0;
  std::vector<double> gaps_at_exit;
  FieldSnapshot state_at_exit;
  std::vector<DeltaSample> delta_series;
  FieldSnapshot seeded;     // state at time T
  double seeded_energy = 0.0;  // by exact quadrature, equals nM
  bool tracking_lost = false;
  std::string lost_reason;
  bool rho_monotone = true;
};

// v_k = (2k-n-1)/2 lambda sqrt(rho) with lambda fixed by E = nM.
// NegativeDeficit when E_p(H(a_T)) > nM.
std::vector<double> seed_velocities(const Positions& a_T, const KinkProfile& profile);

// (H(a_T), -sum_k (-1)^k v_k H_k') on the shot grid.
FieldSnapshot seeded_state(const Positions& a_T, const std::vector<double>& v,
                           const KinkProfile& profile, const Grid& grid);

// Evolves the seeded state from T back to 0 with streaming modulation
// tracking, stopping at the exit time (last time with rho <= rho_exit).
// When tracking is lost the shot ends there; TrackingLost is thrown unless
// allow_loss is set, in which case the result carries the flag.
ShootResult shoot_backward(const ShootSpec& spec, const std::vector<double>& gaps_T,
                           const KinkProfile& profile, double mean_T = 0.0,
                           bool allow_loss = false);

struct SearchResult {
  std::vector<double> gaps_T;
  ShootResult shot;
  std::size_t shots = 0;
  std::string method;
};

// Finds gaps_T with |Psi(gaps_T) - target| <= tolerance componentwise,
// Psi = gaps at the exit time. BoxExhausted when no admissible box remains.
SearchResult miranda_search(const ShootSpec& spec, const KinkProfile& profile,
                            double tolerance = 1e-3);

struct InvariantCheck {
  std::string name;
  double value;
  double bound;
  bool pass;
};

struct ClusterCertificate {
  ShootSpec spec;
  SearchResult search;
  ModulationFit fit0;      // fit of the constructed initial data
  double g0_energy = 0.0;  // ||g_0||_E^2
  ModulationSeries forward;  // tracked re-evolution over [0, T]
  std::vector<DeltaSample> forward_delta;
  double sup_scaled_delta = 0.0;
  double reversibility_error = 0.0;  // energy norm at T, forward vs seeded
  std::vector<InvariantCheck> checks;
  bool passed() const;
};

struct Construction {
  FieldSnapshot initial;
  ClusterCertificate certificate;
};

// Initial data of an n-cluster whose fitted positions at t = 0 are
// `target`, built by backward shooting from time T.
Construction construct_cluster(const Positions& target, double L, double T,
                               const KinkProfile& profile, double L0 = kDefaultL0,
                               const ShotNumerics& numerics = {});

// Energy norm sqrt(||dphidot||^2 + ||dphi||_{H^1}^2) of the difference of two
// snapshots on the same grid.
double energy_norm_distance(const FieldSnapshot& a, const FieldSnapshot& b);

// Worker count for independent shots: KINKLAB_THREADS when set, else the
// hardware concurrency.
std::size_t worker_threads();

}  // namespace kinklab
