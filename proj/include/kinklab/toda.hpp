#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <vector>

#include "kinklab/multikink.hpp"

namespace kinklab {

struct TodaState {
  double t = 0.0;
  Positions a;
  std::vector<double> p;

  std::size_t size() const { return a.size(); }
  std::vector<double> gaps() const { return a.gaps(); }
  // q_k = (p_{k+1} - p_k) / M
  std::vector<double> relative_momenta(double mass) const;
  double rho() const { return a.rho(); }
};

// Constants of the n-body problem and the linear algebra of the gap
// variables: sigma_k = k(n-k)/2, mu0 = 1 / (sigma . 1) and the (n-1)x(n-1)
// Dirichlet Laplacian tridiag(-1, 2, -1).
struct TodaConstants {
  double kappa = 0.0;
  double mass = 0.0;
  double amplitude = 0.0;  // A = kappa sqrt(2/M)
  std::size_t n = 0;
  Eigen::VectorXd sigma;
  double mu0 = 0.0;
  Eigen::MatrixXd laplacian;

  // P_1 y = y - mu0 (sigma . y) 1, the projection along 1 onto
  // Pi = {sigma . z = 0}.
  Eigen::MatrixXd projection_one() const;
  // Orthogonal projection onto Pi.
  Eigen::MatrixXd projection_sigma() const;
};

TodaConstants toda_constants(double kappa, double mass, std::size_t n);
TodaConstants toda_constants(const KinkProfile& profile, std::size_t n);

struct TodaDerivative {
  std::vector<double> da;
  std::vector<double> dp;
};

// a_k' = p_k / M, p_k' = 2 kappa^2 (e^{-y_k} - e^{-y_{k-1}}) with the missing
// neighbour terms dropped.
TodaDerivative toda_rhs(const TodaState& state, const TodaConstants& c);

// Explicit solution with gaps 2 log(kappa t) - log(M k(n-k)/2), momenta
// M(2k-n-1)/t and mean position `center`. NonPositiveTime for t <= 0.
TodaState parabolic_solution(const TodaConstants& c, double t, double center = 0.0);

// |p|^2/(2M) - 2 kappa^2 sum_k e^{-y_k}
double hamiltonian(const TodaState& state, const TodaConstants& c);

enum class TodaMethod { DormandPrince, Leapfrog };

struct TodaOptions {
  double tol = 1e-10;  // per-step error, in [1e-12, 1e-6]
  TodaMethod method = TodaMethod::DormandPrince;
  double leapfrog_step = 1e-3;
  // Output spacing; 0 records every accepted step.
  double sample_dt = 0.0;
  double min_step = 1e-12;  // relative to max(1, |t|)
};

// Integrates from initial.t to t_end (either direction). Returns the recorded
// states, first and last included. StepUnderflow when the step collapses or
// the state stops being finite.
std::vector<TodaState> integrate(const TodaState& initial, const TodaConstants& c,
                                 double t_end, const TodaOptions& options = {});

// State at t_early of the solution that coincides at t_late with the
// parabolic solution whose gaps are shifted by P_sigma dz (a change of shape
// at fixed r). Integrated backward, so it is a genuine trajectory through
// both times.
TodaState cluster_state(const TodaConstants& c, double t_late, const std::vector<double>& dz,
                        double t_early, const TodaOptions& options = {});

struct RzDecomposition {
  double r = 0.0;
  std::vector<double> z;
  double b = 0.0;
  std::vector<double> w;
};

// y = r 1 + z, q = b 1 + w with z, w in Pi.
RzDecomposition decompose_rz(const TodaState& state, const TodaConstants& c);

// -log sigma + mu0 (sigma . log sigma) 1, the minimiser of 1 . e^{-z} on Pi.
std::vector<double> critical_profile_zcr(const TodaConstants& c);

// Smallest eigenvalue of (Delta - mu0 1 1^T) on Pi; +infinity for n = 2.
// NonPositive if it is not positive.
double coercivity_constants(const TodaConstants& c);

struct AsymptoticLaw {
  std::vector<double> gaps;
  std::vector<double> velocities;
};

// 2 log(kappa t) - log(M k(n-k)/2) and (2k-n-1)/t.
AsymptoticLaw asymptotic_law(const TodaConstants& c, double t);

}  // namespace kinklab
