#pragma once

#include <array>
#include <memory>
#include <string>
#include <vector>

#include "kinklab/grid.hpp"

namespace kinklab {

// amplitude * cos(frequency * phi)
struct CosineTerm {
  double amplitude = 0.0;
  double frequency = 0.0;
};

// Even self-interaction potential U(phi) = sum_j c_j phi^(2j) + sum_m A_m cos(w_m phi)
// with vacua at +-1, U(+-1) = 0 and U''(+-1) = 1.
//
// Derivatives are exact (term by term). Close to the vacua the value is taken
// from the Taylor series about phi = 1, which avoids the cancellation of the
// O(1) constant terms when U is of order (1 - |phi|)^2.
class PotentialModel {
 public:
  static constexpr int kMaxPolyDegree = 20;

  // Validates the vacuum normalisation and positivity on (-1, 1); throws
  // InvalidPotential or PotentialVanishesInside.
  PotentialModel(std::string name, std::vector<double> even_coefficients,
                 std::vector<CosineTerm> cosines);

  const std::string& name() const { return name_; }
  const std::vector<double>& even_coefficients() const { return poly_; }
  const std::vector<CosineTerm>& cosines() const { return cos_; }

  double u(double phi) const;
  double u1(double phi) const { return derivative(1, phi); }
  double u2(double phi) const { return derivative(2, phi); }
  double u3(double phi) const { return derivative(3, phi); }
  double derivative(int order, double phi) const;

  // d^order/dphi^order U evaluated at 1 - w, accurate in relative terms for
  // small w.
  double derivative_near_vacuum(int order, double w) const;

  // sqrt(2 U(phi)), the Bogomolny slope of a kink passing through phi.
  double bogomolny_slope(double phi) const;
  // Same in terms of the distance w = 1 - |phi| to the nearest vacuum.
  double bogomolny_slope_from_vacuum(double w) const;

 private:
  double raw_derivative(int order, double phi) const;

  std::string name_;
  std::vector<double> poly_;
  std::vector<CosineTerm> cos_;
  // U^(m)(1) for m = 0..kTaylorOrder.
  static constexpr int kTaylorOrder = 24;
  std::array<double, kTaylorOrder + 1> vacuum_derivs_{};
  // Coefficients (ascending powers of phi) of the polynomial part of U^(m),
  // m = 0..kTabulatedOrders-1, for Horner evaluation.
  static constexpr int kTabulatedOrders = 5;
  std::array<std::vector<double>, kTabulatedOrders> poly_tables_;
};

PotentialModel phi4_potential();
PotentialModel sine_gordon_potential();

std::vector<std::string> registered_potentials();
// Throws InvalidPotential (message lists the registry) for unknown names.
PotentialModel make_potential(const std::string& name);

// Sampled kink H on xs = [-half_width, half_width], together with the
// derived constants. Immutable once built.
struct KinkProfile {
  Grid grid;
  std::vector<double> h;     // H(x)
  std::vector<double> dh;    // H'(x)
  std::vector<double> tail;  // 1 - |H(x)|, kept separately for accurate tails
  double kappa = 0.0;
  double kappa_fit_residual = 0.0;
  double mass = 0.0;
  double bogomolny_residual = 0.0;
  std::shared_ptr<const PotentialModel> potential;

  double half_width() const { return grid.x_max(); }

  struct Eval {
    double h;
    double dh;
    double d2h;
  };
  // Cubic Hermite interpolation inside the grid; exact exponential tails with
  // the fitted kappa outside it.
  Eval eval(double x) const;
  double value(double x) const { return eval(x).h; }
  double slope(double x) const { return eval(x).dh; }
};

inline constexpr double kDefaultHalfWidth = 40.0;
inline constexpr double kDefaultProfileStep = 1e-3;

// Integrates H' = sqrt(2U(H)) from H(0) = 0 and fills in kappa and the mass.
KinkProfile compute_kink_profile(const PotentialModel& potential,
                                 double half_width = kDefaultHalfWidth,
                                 double step = kDefaultProfileStep);

enum class TailSide { Right, Left };

struct TailFit {
  double kappa = 0.0;
  double rms_residual = 0.0;
};

// Least-squares fit of log(1 - |H|) = -|x| + log(kappa) on the window
// [half_width/2, 3 half_width/4] (mirrored for the left tail).
TailFit fit_tail_constant(const KinkProfile& profile, TailSide side = TailSide::Right);

// Right-tail fit, stored into profile.kappa.
double estimate_kappa(KinkProfile& profile);

struct MassQuadratures {
  double gradient_norm = 0.0;   // ||H'||^2
  double field_integral = 0.0;  // 2 int_0^1 sqrt(2U(y)) dy
  double potential_integral = 0.0;  // 2 int U(H) dx
  double potential_energy = 0.0;    // E_p(H)
  double spread() const;
};

MassQuadratures mass_quadratures(const KinkProfile& profile);

// ||H'||^2, after checking the four mass formulas agree (QuadratureDisagreement
// when their spread exceeds 1e-6).
double compute_mass(const KinkProfile& profile);

// int H'(x) (U''(H(x)) - 1) e^x dx, which equals -2 kappa.
double reduced_force_constant(const KinkProfile& profile);

}  // namespace kinklab
