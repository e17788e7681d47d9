#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <vector>

#include "kinklab/grid.hpp"
#include "kinklab/potential.hpp"

namespace kinklab {

// Ordered kink centres a_1 <= ... <= a_n. Index k is zero-based in the API;
// kink k is an antikink when k is even (H(a) starts at the vacuum 1).
class Positions {
 public:
  Positions() = default;
  Positions(std::initializer_list<double> a) : a_(a) {}
  explicit Positions(std::vector<double> a) : a_(std::move(a)) {}

  std::size_t size() const { return a_.size(); }
  bool empty() const { return a_.empty(); }
  double operator[](std::size_t k) const { return a_[k]; }
  double& operator[](std::size_t k) { return a_[k]; }
  const std::vector<double>& values() const { return a_; }
  auto begin() const { return a_.begin(); }
  auto end() const { return a_.end(); }

  // y_k = a_{k+1} - a_k
  std::vector<double> gaps() const;
  // +infinity for fewer than two kinks.
  double min_gap() const;
  // rho(a) = sum_k exp(-y_k)
  double rho() const;
  double mean() const;
  Positions shifted(double by) const;
  static Positions from_gaps(const std::vector<double>& gaps, double mean = 0.0);

  bool operator==(const Positions&) const = default;

 private:
  std::vector<double> a_;
};

// (-1)^k in one-based numbering: -1 for the first (anti)kink.
inline double orientation(std::size_t k) { return (k % 2 == 0) ? -1.0 : 1.0; }

// Spatial limits (iota_-, iota_+) of a finite-energy state.
struct Sector {
  int left = 1;
  int right = 1;
  bool operator==(const Sector&) const = default;
};

inline Sector multikink_sector(std::size_t n) { return {1, n % 2 == 0 ? 1 : -1}; }

struct FieldSnapshot {
  Grid grid;
  std::vector<double> phi;
  std::vector<double> phidot;
  Sector sector;
};

struct Window {
  double lo;
  double hi;
};

// Ghost values beyond the grid are the sector vacua; derivative by
// fourth-order central differences.
std::vector<double> field_gradient(const FieldSnapshot& snapshot);

// (H(a), 0) on the given grid; GridTooNarrow unless the grid covers
// [a_1 - 20, a_n + 20].
FieldSnapshot multikink_configuration(const KinkProfile& profile, const Positions& a,
                                      const Grid& grid);

// H(a; x) sampled on a grid, with no coverage requirement.
std::vector<double> multikink_values(const KinkProfile& profile, const Positions& a,
                                     const Grid& grid);

// int 1/2 (phi_x)^2 + U(phi) over the window (whole grid by default).
double potential_energy(const FieldSnapshot& snapshot, const PotentialModel& potential,
                        std::optional<Window> window = std::nullopt);

// Quadrature grid used by the static operations: [a_1 - 40, a_n + 40].
Grid static_grid(const Positions& a, double dx = 0.01);

// E_p(H(a)) with exact derivatives of the profile, trapezoid on static_grid.
double multikink_potential_energy(const KinkProfile& profile, const Positions& a);

// Phi(H_1, ..., H_n) = -H(a)'' + U'(H(a)) at each point of the grid.
std::vector<double> static_residual(const KinkProfile& profile, const Positions& a,
                                    const Grid& grid);

// F_k(a) = -dE_p(H(a))/da_k = (-1)^k <H_k', Phi>.
double interaction_force(const KinkProfile& profile, const Positions& a, std::size_t k);

// 2 kappa^2 (e^{-y_k} - e^{-y_{k-1}}), missing neighbours contributing zero.
double approx_force(double kappa, const Positions& a, std::size_t k);

// n M - 2 kappa^2 sum_k e^{-y_k}
double approx_interaction_energy(double kappa, double mass, const Positions& a);

// || -H(a)'' + U'(H(a)) ||_{L^2}
double static_residual_norm(const KinkProfile& profile, const Positions& a);

struct CoercivityOptions {
  double dx = 0.05;
  double margin = 20.0;
  double nu_floor = 0.0;
};

// Smallest eigenvalue of L(a) = -d^2/dx^2 + U''(H(a)) restricted to the
// orthogonal complement of span{H_k'}; Dirichlet ends. NegativeEigenvalue
// when it does not exceed options.nu_floor.
double coercivity_eigencheck(const KinkProfile& profile, const Positions& a,
                             const CoercivityOptions& options = {});

// Lowest `count` eigenvalues of the unprojected L(a) on the same grid.
std::vector<double> linearized_spectrum(const KinkProfile& profile, const Positions& a,
                                        std::size_t count,
                                        const CoercivityOptions& options = {});

struct DeltaResult {
  double delta = 0.0;
  Positions argmin;
};

// ||phi_t||^2 + ||phi - H(b)||_{H^1}^2 + rho(b), to be minimised over b.
double delta_objective(const FieldSnapshot& snapshot, const KinkProfile& profile,
                       const Positions& b);

// Local simplex minimisation of delta_objective seeded at `seed`, or at the
// zero crossings of phi (NoSeed when there are fewer than n of them).
DeltaResult delta_distance(const FieldSnapshot& snapshot, const KinkProfile& profile,
                           std::size_t n, std::optional<Positions> seed = std::nullopt);

// Sign changes of phi, located by linear interpolation, left to right.
std::vector<double> zero_crossings(const FieldSnapshot& snapshot);

}  // namespace kinklab
