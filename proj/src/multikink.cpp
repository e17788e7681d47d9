#include "kinklab/multikink.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "kinklab/error.hpp"
#include "kinklab/optimize.hpp"

namespace kinklab {

std::vector<double> Positions::gaps() const {
  std::vector<double> y;
  for (std::size_t k = 0; k + 1 < a_.size(); ++k) y.push_back(a_[k + 1] - a_[k]);
  return y;
}

double Positions::min_gap() const {
  double m = std::numeric_limits<double>::infinity();
  for (double y : gaps()) m = std::min(m, y);
  return m;
}

double Positions::rho() const {
  double r = 0.0;
  for (double y : gaps()) r += std::exp(-y);
  return r;
}

double Positions::mean() const {
  if (a_.empty()) return 0.0;
  return std::accumulate(a_.begin(), a_.end(), 0.0) / static_cast<double>(a_.size());
}

Positions Positions::shifted(double by) const {
  std::vector<double> b = a_;
  for (double& v : b) v += by;
  return Positions(std::move(b));
}

Positions Positions::from_gaps(const std::vector<double>& gaps, double mean) {
  std::vector<double> a(gaps.size() + 1, 0.0);
  for (std::size_t k = 0; k < gaps.size(); ++k) a[k + 1] = a[k] + gaps[k];
  const double m = std::accumulate(a.begin(), a.end(), 0.0) / static_cast<double>(a.size());
  for (double& v : a) v += mean - m;
  return Positions(std::move(a));
}

// ---------------------------------------------------------------------------

std::vector<double> field_gradient(const FieldSnapshot& s) {
  return derivative4(s.phi, s.grid.dx, s.sector.left, s.sector.right);
}

std::vector<double> multikink_values(const KinkProfile& profile, const Positions& a,
                                     const Grid& grid) {
  std::vector<double> v(grid.size, 1.0);
  for (std::size_t i = 0; i < grid.size; ++i) {
    const double x = grid.x(i);
    double sum = 1.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
      sum += orientation(k) * (profile.value(x - a[k]) + 1.0);
    }
    v[i] = sum;
  }
  return v;
}

FieldSnapshot multikink_configuration(const KinkProfile& profile, const Positions& a,
                                      const Grid& grid) {
  if (!a.empty() && (grid.x_min() > a[0] - 20.0 || grid.x_max() < a[a.size() - 1] + 20.0)) {
    throw KinkError(ErrorCode::GridTooNarrow, "grid must cover [a_1 - 20, a_n + 20]");
  }
  FieldSnapshot s;
  s.grid = grid;
  s.phi = multikink_values(profile, a, grid);
  s.phidot.assign(grid.size, 0.0);
  s.sector = multikink_sector(a.size());
  return s;
}

namespace {

std::pair<std::size_t, std::size_t> window_indices(const Grid& g, std::optional<Window> w) {
  if (!w || g.size == 0) return {0, g.size == 0 ? 0 : g.size - 1};
  const double eps = 1e-9;
  const double lo = std::ceil((w->lo - g.x0) / g.dx - eps);
  const double hi = std::floor((w->hi - g.x0) / g.dx + eps);
  const double last = static_cast<double>(g.size - 1);
  const auto first = static_cast<std::size_t>(std::clamp(lo, 0.0, last));
  const auto end = static_cast<std::size_t>(std::clamp(hi, 0.0, last));
  return {first, end};
}

}  // namespace

double potential_energy(const FieldSnapshot& s, const PotentialModel& potential,
                        std::optional<Window> window) {
  const auto grad = field_gradient(s);
  std::vector<double> density(s.grid.size);
  for (std::size_t i = 0; i < density.size(); ++i) {
    density[i] = 0.5 * grad[i] * grad[i] + potential.u(s.phi[i]);
  }
  const auto [first, last] = window_indices(s.grid, window);
  return trapezoid(density, s.grid.dx, first, last);
}

Grid static_grid(const Positions& a, double dx) {
  if (a.empty()) return Grid::covering(-40.0, 40.0, dx);
  return Grid::covering(a[0] - 40.0, a[a.size() - 1] + 40.0, dx);
}

double multikink_potential_energy(const KinkProfile& profile, const Positions& a) {
  const Grid g = static_grid(a);
  const PotentialModel& pot = *profile.potential;
  std::vector<double> density(g.size);
  for (std::size_t i = 0; i < g.size; ++i) {
    const double x = g.x(i);
    double phi = 1.0, dphi = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
      const auto e = profile.eval(x - a[k]);
      phi += orientation(k) * (e.h + 1.0);
      dphi += orientation(k) * e.dh;
    }
    density[i] = 0.5 * dphi * dphi + pot.u(phi);
  }
  return trapezoid(density, g.dx);
}

std::vector<double> static_residual(const KinkProfile& profile, const Positions& a,
                                    const Grid& grid) {
  const PotentialModel& pot = *profile.potential;
  std::vector<double> r(grid.size);
  for (std::size_t i = 0; i < grid.size; ++i) {
    const double x = grid.x(i);
    double phi = 1.0, sum = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
      const double hk = profile.value(x - a[k]);
      phi += orientation(k) * (hk + 1.0);
      sum += orientation(k) * pot.u1(hk);
    }
    r[i] = pot.u1(phi) - sum;
  }
  return r;
}

double interaction_force(const KinkProfile& profile, const Positions& a, std::size_t k) {
  if (k >= a.size()) throw KinkError(ErrorCode::InvalidArgument, "kink index out of range");
  const Grid g = static_grid(a);
  const auto phi_res = static_residual(profile, a, g);
  std::vector<double> f(g.size);
  for (std::size_t i = 0; i < g.size; ++i) f[i] = profile.slope(g.x(i) - a[k]) * phi_res[i];
  return orientation(k) * trapezoid(f, g.dx);
}

double approx_force(double kappa, const Positions& a, std::size_t k) {
  if (k >= a.size()) throw KinkError(ErrorCode::InvalidArgument, "kink index out of range");
  const double right = k + 1 < a.size() ? std::exp(-(a[k + 1] - a[k])) : 0.0;
  const double left = k > 0 ? std::exp(-(a[k] - a[k - 1])) : 0.0;
  return 2.0 * kappa * kappa * (right - left);
}

double approx_interaction_energy(double kappa, double mass, const Positions& a) {
  return static_cast<double>(a.size()) * mass - 2.0 * kappa * kappa * a.rho();
}

double static_residual_norm(const KinkProfile& profile, const Positions& a) {
  const Grid g = static_grid(a);
  auto r = static_residual(profile, a, g);
  for (double& v : r) v *= v;
  return std::sqrt(trapezoid(r, g.dx));
}

// ---------------------------------------------------------------------------

namespace {

struct Discretised {
  Grid grid;
  Eigen::VectorXd diagonal;  // U''(H(a)) + 2/dx^2
  double offdiag = 0.0;      // -1/dx^2
};

Discretised discretise_operator(const KinkProfile& profile, const Positions& a,
                                const CoercivityOptions& opt) {
  const double lo = a.empty() ? -opt.margin : a[0] - opt.margin;
  const double hi = a.empty() ? opt.margin : a[a.size() - 1] + opt.margin;
  Discretised d;
  // Interior points of a Dirichlet box.
  const Grid full = Grid::covering(lo, hi, opt.dx);
  d.grid = Grid{full.x0 + full.dx, full.dx, full.size - 2};
  const auto h = multikink_values(profile, a, d.grid);
  const double inv = 1.0 / (opt.dx * opt.dx);
  d.diagonal.resize(static_cast<Eigen::Index>(d.grid.size));
  for (std::size_t i = 0; i < d.grid.size; ++i) {
    d.diagonal[static_cast<Eigen::Index>(i)] = 2.0 * inv + profile.potential->u2(h[i]);
  }
  d.offdiag = -inv;
  return d;
}

}  // namespace

double coercivity_eigencheck(const KinkProfile& profile, const Positions& a,
                             const CoercivityOptions& options) {
  const Discretised d = discretise_operator(profile, a, options);
  const auto n = static_cast<Eigen::Index>(d.grid.size);
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    L(i, i) = d.diagonal[i];
    if (i + 1 < n) L(i, i + 1) = L(i + 1, i) = d.offdiag;
  }
  const auto m = static_cast<Eigen::Index>(a.size());
  Eigen::MatrixXd Q(n, 0);
  if (m > 0) {
    Eigen::MatrixXd Z(n, m);
    for (Eigen::Index k = 0; k < m; ++k) {
      for (Eigen::Index i = 0; i < n; ++i) {
        Z(i, k) = profile.slope(d.grid.x(static_cast<std::size_t>(i)) - a[static_cast<std::size_t>(k)]);
      }
    }
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(Z);
    Q = qr.householderQ() * Eigen::MatrixXd::Identity(n, m);
  }
  // P L P + c Q Q^T: the zero-mode directions are lifted to c, far above the
  // spectrum of interest.
  constexpr double kLift = 1e3;
  Eigen::MatrixXd P = Eigen::MatrixXd::Identity(n, n) - Q * Q.transpose();
  Eigen::MatrixXd A = P * L * P + kLift * Q * Q.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A, Eigen::EigenvaluesOnly);
  const double nu = es.eigenvalues()[0];
  if (!(nu > options.nu_floor)) {
    std::ostringstream msg;
    msg << "projected operator has eigenvalue " << nu << " <= " << options.nu_floor;
    throw KinkError(ErrorCode::NegativeEigenvalue, msg.str());
  }
  return nu;
}

std::vector<double> linearized_spectrum(const KinkProfile& profile, const Positions& a,
                                        std::size_t count, const CoercivityOptions& options) {
  const Discretised d = discretise_operator(profile, a, options);
  const auto n = static_cast<Eigen::Index>(d.grid.size);
  Eigen::VectorXd sub = Eigen::VectorXd::Constant(n - 1, d.offdiag);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(d.diagonal, sub, Eigen::EigenvaluesOnly);
  std::vector<double> out;
  for (Eigen::Index i = 0; i < std::min<Eigen::Index>(n, static_cast<Eigen::Index>(count)); ++i) {
    out.push_back(es.eigenvalues()[i]);
  }
  return out;
}

// ---------------------------------------------------------------------------

std::vector<double> zero_crossings(const FieldSnapshot& s) {
  std::vector<double> z;
  for (std::size_t i = 0; i + 1 < s.phi.size(); ++i) {
    const double f0 = s.phi[i], f1 = s.phi[i + 1];
    if (f0 == 0.0) {
      z.push_back(s.grid.x(i));
    } else if (f0 * f1 < 0.0) {
      z.push_back(s.grid.x(i) + s.grid.dx * f0 / (f0 - f1));
    }
  }
  return z;
}

double delta_objective(const FieldSnapshot& s, const KinkProfile& profile, const Positions& b) {
  const auto hb = multikink_values(profile, b, s.grid);
  std::vector<double> diff(s.grid.size);
  for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = s.phi[i] - hb[i];
  const auto ddiff = derivative4(diff, s.grid.dx, 0.0, 0.0);
  std::vector<double> density(s.grid.size);
  for (std::size_t i = 0; i < density.size(); ++i) {
    density[i] = s.phidot[i] * s.phidot[i] + diff[i] * diff[i] + ddiff[i] * ddiff[i];
  }
  return trapezoid(density, s.grid.dx) + b.rho();
}

DeltaResult delta_distance(const FieldSnapshot& s, const KinkProfile& profile, std::size_t n,
                           std::optional<Positions> seed) {
  if (s.sector != multikink_sector(n)) {
    throw KinkError(ErrorCode::InvalidArgument, "snapshot is not in the sector (1, (-1)^n)");
  }
  Positions start;
  if (seed) {
    start = *seed;
  } else {
    const auto z = zero_crossings(s);
    if (z.size() < n) {
      throw KinkError(ErrorCode::NoSeed, "fewer than n sign changes in phi");
    }
    start = Positions(std::vector<double>(z.begin(), z.begin() + static_cast<std::ptrdiff_t>(n)));
  }
  if (start.size() != n) throw KinkError(ErrorCode::InvalidArgument, "seed has wrong length");

  auto objective = [&](std::span<const double> b) {
    return delta_objective(s, profile, Positions(std::vector<double>(b.begin(), b.end())));
  };
  DeltaResult r;
  if (n == 0) {
    r.delta = objective({});
    return r;
  }
  // Restarting from the best vertex guards against premature simplex collapse.
  SimplexOptions opt;
  opt.initial_step = 0.05;
  opt.size_tolerance = 1e-7;
  std::vector<double> x = start.values();
  double best = objective(x);
  for (int round = 0; round < 4; ++round) {
    const SimplexResult res = minimize_simplex(objective, x, opt);
    const double improvement = best - res.value;
    if (res.value < best) {
      best = res.value;
      x = res.x;
    }
    if (improvement <= 1e-10) break;
    opt.initial_step = 0.01;
  }
  r.delta = best;
  r.argmin = Positions(x);
  return r;
}

}  // namespace kinklab
