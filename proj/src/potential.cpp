#include "kinklab/potential.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <numbers>
#include <sstream>

#include "kinklab/error.hpp"

namespace kinklab {

namespace {

constexpr double kVacuumTolerance = 1e-12;
// Below this distance to a vacuum values come from the Taylor series.
constexpr double kTaylorRadius = 0.05;
// Distance to the vacuum at which the profile switches to the linear tail.
constexpr double kTailSplice = 1e-10;

double falling_factorial(int n, int r) {
  double v = 1.0;
  for (int i = 0; i < r; ++i) v *= static_cast<double>(n - i);
  return v;
}

}  // namespace

PotentialModel::PotentialModel(std::string name, std::vector<double> even_coefficients,
                               std::vector<CosineTerm> cosines)
    : name_(std::move(name)), poly_(std::move(even_coefficients)), cos_(std::move(cosines)) {
  if (poly_.empty() && cos_.empty()) {
    throw KinkError(ErrorCode::InvalidPotential, "potential '" + name_ + "' has no terms");
  }
  if (2 * (static_cast<int>(poly_.size()) - 1) > kMaxPolyDegree) {
    throw KinkError(ErrorCode::InvalidPotential,
                    "polynomial part of '" + name_ + "' exceeds degree 20");
  }
  for (int m = 0; m < kTabulatedOrders; ++m) {
    std::vector<double> table;
    for (std::size_t j = 0; j < poly_.size(); ++j) {
      const int power = 2 * static_cast<int>(j);
      if (power < m) continue;
      table.resize(static_cast<std::size_t>(power - m) + 1, 0.0);
      table[static_cast<std::size_t>(power - m)] = poly_[j] * falling_factorial(power, m);
    }
    poly_tables_[m] = std::move(table);
  }
  for (int m = 0; m <= kTaylorOrder; ++m) vacuum_derivs_[m] = raw_derivative(m, 1.0);

  const double u0 = vacuum_derivs_[0];
  const double u1 = vacuum_derivs_[1];
  const double u2 = vacuum_derivs_[2];
  if (std::abs(u0) > kVacuumTolerance || std::abs(u1) > kVacuumTolerance ||
      std::abs(u2 - 1.0) > kVacuumTolerance) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "'" << name_ << "' must satisfy U(1)=0, U'(1)=0, U''(1)=1; got " << u0 << ", "
        << u1 << ", " << u2;
    throw KinkError(ErrorCode::InvalidPotential, msg.str());
  }
  // Exact zeros so that the near-vacuum series starts at (1 - phi)^2 / 2.
  vacuum_derivs_[0] = 0.0;
  vacuum_derivs_[1] = 0.0;

  constexpr int kSamples = 4000;
  for (int i = 1; i < kSamples; ++i) {
    const double phi = -1.0 + 2.0 * i / kSamples;
    if (!(u(phi) > 0.0)) {
      std::ostringstream msg;
      msg << "U(" << phi << ") <= 0 for potential '" << name_ << "'";
      throw KinkError(ErrorCode::PotentialVanishesInside, msg.str());
    }
  }
}

double PotentialModel::raw_derivative(int order, double phi) const {
  double v = 0.0;
  if (order < kTabulatedOrders) {
    const auto& table = poly_tables_[order];
    for (auto it = table.rbegin(); it != table.rend(); ++it) v = v * phi + *it;
  } else {
    for (std::size_t j = 0; j < poly_.size(); ++j) {
      const int power = 2 * static_cast<int>(j);
      if (power < order) continue;
      v += poly_[j] * falling_factorial(power, order) * std::pow(phi, power - order);
    }
  }
  for (const auto& term : cos_) {
    const double scale = term.amplitude * std::pow(term.frequency, order);
    const double arg = term.frequency * phi;
    switch (order % 4) {
      case 0: v += scale * std::cos(arg); break;
      case 1: v -= scale * std::sin(arg); break;
      case 2: v -= scale * std::cos(arg); break;
      default: v += scale * std::sin(arg); break;
    }
  }
  return v;
}

double PotentialModel::derivative_near_vacuum(int order, double w) const {
  // sum_{m >= order} U^(m)(1) (-w)^(m - order) / (m - order)!
  double sum = 0.0;
  double term = 1.0;
  for (int m = order; m <= kTaylorOrder; ++m) {
    sum += vacuum_derivs_[m] * term;
    term *= -w / static_cast<double>(m - order + 1);
    if (std::abs(term) < 1e-40) break;
  }
  return sum;
}

double PotentialModel::derivative(int order, double phi) const {
  // Only U itself suffers from cancellation near the vacua; the derivatives
  // are evaluated directly.
  const double w = 1.0 - std::abs(phi);
  if (order == 0 && w >= 0.0 && w <= kTaylorRadius) {
    const double v = derivative_near_vacuum(order, w);
    return (phi < 0.0 && order % 2 == 1) ? -v : v;
  }
  return raw_derivative(order, phi);
}

double PotentialModel::u(double phi) const { return derivative(0, phi); }

double PotentialModel::bogomolny_slope(double phi) const {
  return std::sqrt(std::max(0.0, 2.0 * u(phi)));
}

double PotentialModel::bogomolny_slope_from_vacuum(double w) const {
  if (w <= kTaylorRadius) {
    return std::sqrt(std::max(0.0, 2.0 * derivative_near_vacuum(0, w)));
  }
  return std::sqrt(std::max(0.0, 2.0 * raw_derivative(0, 1.0 - w)));
}

PotentialModel phi4_potential() {
  // (1 - phi^2)^2 / 8
  return PotentialModel("phi4", {0.125, -0.25, 0.125}, {});
}

PotentialModel sine_gordon_potential() {
  // (1 + cos(pi phi)) / pi^2
  constexpr double pi = std::numbers::pi;
  return PotentialModel("sine-gordon", {1.0 / (pi * pi)}, {{1.0 / (pi * pi), pi}});
}

std::vector<std::string> registered_potentials() { return {"phi4", "sine-gordon"}; }

PotentialModel make_potential(const std::string& name) {
  if (name == "phi4") return phi4_potential();
  if (name == "sine-gordon") return sine_gordon_potential();
  std::string known;
  for (const auto& n : registered_potentials()) known += (known.empty() ? "" : ", ") + n;
  throw KinkError(ErrorCode::InvalidPotential,
                  "unknown potential '" + name + "'; registered: " + known);
}

// ---------------------------------------------------------------------------

KinkProfile::Eval KinkProfile::eval(double x) const {
  const double hw = half_width();
  if (std::abs(x) >= hw) {
    const double e = kappa * std::exp(-std::abs(x));
    const double s = x > 0.0 ? 1.0 : -1.0;
    return {s * (1.0 - e), e, -s * e};
  }
  const double u = (x - grid.x0) / grid.dx;
  auto i = static_cast<std::size_t>(u);
  if (i >= grid.size - 1) i = grid.size - 2;
  const double t = u - static_cast<double>(i);
  const double step = grid.dx;

  const PotentialModel& pot = *potential;
  const double h0 = h[i], h1 = h[i + 1];
  const double d0 = dh[i], d1 = dh[i + 1];
  // H'' = U'(H), H''' = U''(H) H'
  const double c0 = pot.u1(h0), c1 = pot.u1(h1);
  const double e0 = pot.u2(h0) * d0, e1 = pot.u2(h1) * d1;

  const double t2 = t * t, t3 = t2 * t;
  const double b00 = 2 * t3 - 3 * t2 + 1, b10 = t3 - 2 * t2 + t;
  const double b01 = -2 * t3 + 3 * t2, b11 = t3 - t2;

  Eval r{};
  r.h = b00 * h0 + b10 * step * d0 + b01 * h1 + b11 * step * d1;
  r.dh = b00 * d0 + b10 * step * c0 + b01 * d1 + b11 * step * c1;
  r.d2h = b00 * c0 + b10 * step * e0 + b01 * c1 + b11 * step * e1;
  return r;
}

KinkProfile compute_kink_profile(const PotentialModel& potential, double half_width,
                                 double step) {
  if (!(step > 0.0)) throw KinkError(ErrorCode::NonPositiveStep, "profile step must be positive");
  if (!(half_width >= 20.0)) {
    throw KinkError(ErrorCode::InvalidArgument, "profile half width must be at least 20");
  }
  const auto half_cells = static_cast<std::size_t>(std::llround(half_width / step));
  KinkProfile p;
  p.potential = std::make_shared<const PotentialModel>(potential);
  p.grid = Grid{-static_cast<double>(half_cells) * step, step, 2 * half_cells + 1};
  const std::size_t mid = half_cells;

  // Right half in terms of w = 1 - H: w' = -sqrt(2U(1 - w)), w(0) = 1.
  std::vector<double> w(half_cells + 1);
  w[0] = 1.0;
  using State = std::array<double, 1>;
  namespace odeint = boost::numeric::odeint;
  auto stepper = odeint::make_controlled(1e-22, 1e-13, odeint::runge_kutta_dopri5<State>());
  auto rhs = [&potential](const State& s, State& ds, double) {
    ds[0] = -potential.bogomolny_slope_from_vacuum(std::max(s[0], 0.0));
  };
  State s{1.0};
  double dt = step;
  std::size_t splice = half_cells + 1;
  for (std::size_t i = 1; i <= half_cells; ++i) {
    const double x0 = static_cast<double>(i - 1) * step;
    odeint::integrate_adaptive(stepper, rhs, s, x0, x0 + step, dt);
    w[i] = s[0];
    if (w[i] < kTailSplice) {
      splice = i;
      break;
    }
  }
  // Linearised tail w' = -w beyond the splice point.
  for (std::size_t i = splice + 1; i <= half_cells; ++i) {
    w[i] = w[splice] * std::exp(-static_cast<double>(i - splice) * step);
  }

  p.h.resize(p.grid.size);
  p.dh.resize(p.grid.size);
  p.tail.resize(p.grid.size);
  for (std::size_t i = 0; i <= half_cells; ++i) {
    const double hv = 1.0 - w[i];
    const double slope = i > splice ? w[i] : potential.bogomolny_slope_from_vacuum(w[i]);
    p.h[mid + i] = hv;
    p.h[mid - i] = -hv;
    p.dh[mid + i] = slope;
    p.dh[mid - i] = slope;
    p.tail[mid + i] = w[i];
    p.tail[mid - i] = w[i];
  }
  p.h[mid] = 0.0;

  if (std::abs(p.h.back()) < 0.999) {
    throw KinkError(ErrorCode::TailNotReached, "|H(half_width)| < 0.999");
  }

  estimate_kappa(p);

  // Bogomolny residual from fourth-order differences of the samples; the
  // ghost values come from the fitted tail.
  {
    const std::size_t n = p.grid.size;
    auto sample = [&](std::ptrdiff_t i) {
      if (i >= 0 && i < static_cast<std::ptrdiff_t>(n)) return p.h[static_cast<std::size_t>(i)];
      const double x = p.grid.x0 + static_cast<double>(i) * step;
      const double e = p.kappa * std::exp(-std::abs(x));
      return x > 0 ? 1.0 - e : -1.0 + e;
    };
    double worst = 0.0;
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
      const double d = (sample(i - 2) - 8.0 * sample(i - 1) + 8.0 * sample(i + 1) -
                        sample(i + 2)) / (12.0 * step);
      worst = std::max(worst, std::abs(d - potential.bogomolny_slope(p.h[static_cast<std::size_t>(i)])));
    }
    p.bogomolny_residual = worst;
  }

  p.mass = compute_mass(p);
  return p;
}

TailFit fit_tail_constant(const KinkProfile& profile, TailSide side) {
  const double hw = profile.half_width();
  const double lo = 0.5 * hw, hi = 0.75 * hw;
  // Slope is fixed at -1: log(kappa) is the mean of log(w) + |x|.
  std::vector<double> logk;
  for (std::size_t i = 0; i < profile.grid.size; ++i) {
    const double x = profile.grid.x(i);
    const double ax = side == TailSide::Right ? x : -x;
    if (ax < lo || ax > hi) continue;
    const double w = profile.tail[i];
    if (!(w > 1e-300)) {
      throw KinkError(ErrorCode::TailUnderflow, "1 - |H| underflows in the fit window");
    }
    logk.push_back(std::log(w) + ax);
  }
  if (logk.empty()) throw KinkError(ErrorCode::TailUnderflow, "empty tail window");
  double mean = 0.0;
  for (double v : logk) mean += v;
  mean /= static_cast<double>(logk.size());
  double ss = 0.0;
  for (double v : logk) ss += (v - mean) * (v - mean);
  return {std::exp(mean), std::sqrt(ss / static_cast<double>(logk.size()))};
}

double estimate_kappa(KinkProfile& profile) {
  const TailFit fit = fit_tail_constant(profile, TailSide::Right);
  profile.kappa = fit.kappa;
  profile.kappa_fit_residual = fit.rms_residual;
  return fit.kappa;
}

double MassQuadratures::spread() const {
  const auto [lo, hi] = std::minmax({gradient_norm, field_integral, potential_integral,
                                     potential_energy});
  return hi - lo;
}

MassQuadratures mass_quadratures(const KinkProfile& profile) {
  const PotentialModel& pot = *profile.potential;
  const std::size_t n = profile.grid.size;
  std::vector<double> grad2(n), pot_density(n);
  for (std::size_t i = 0; i < n; ++i) {
    grad2[i] = profile.dh[i] * profile.dh[i];
    pot_density[i] = pot.u(profile.h[i]);
  }
  // Contribution of both tails beyond the grid: 2 * int_hw^inf kappa^2 e^{-2x}.
  const double outside = profile.kappa * profile.kappa * std::exp(-2.0 * profile.half_width());

  MassQuadratures m;
  m.gradient_norm = trapezoid(grad2, profile.grid.dx) + outside;
  m.potential_integral = 2.0 * trapezoid(pot_density, profile.grid.dx) + outside;
  m.potential_energy = 0.5 * m.gradient_norm + 0.5 * m.potential_integral;
  using boost::math::quadrature::gauss_kronrod;
  m.field_integral = 2.0 * gauss_kronrod<double, 61>::integrate(
                               [&pot](double y) { return pot.bogomolny_slope(y); }, 0.0, 1.0,
                               15, 1e-15);
  return m;
}

double compute_mass(const KinkProfile& profile) {
  const MassQuadratures m = mass_quadratures(profile);
  if (m.spread() > 1e-6) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "mass formulas disagree by " << m.spread();
    throw KinkError(ErrorCode::QuadratureDisagreement, msg.str());
  }
  return m.gradient_norm;
}

double reduced_force_constant(const KinkProfile& profile) {
  const PotentialModel& pot = *profile.potential;
  std::vector<double> f(profile.grid.size);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double x = profile.grid.x(i);
    f[i] = profile.dh[i] * (pot.u2(profile.h[i]) - 1.0) * std::exp(x);
  }
  return trapezoid(f, profile.grid.dx);
}

}  // namespace kinklab
