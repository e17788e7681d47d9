#include "kinklab/modulation.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "kinklab/error.hpp"

namespace kinklab {

double Cutoff::operator()(double s) const {
  if (s <= 1.0 / 3.0) return 1.0;
  if (s >= 2.0 / 3.0) return 0.0;
  const double u = 3.0 * s - 1.0;
  return 1.0 - u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
}

namespace {

double partition_value(const Cutoff& chi, const Positions& a, std::size_t k, double x) {
  const std::size_t n = a.size();
  if (n == 1) return 1.0;
  auto ramp = [&](std::size_t j) { return chi((x - a[j]) / (a[j + 1] - a[j])); };
  if (k == 0) return ramp(0);
  if (k + 1 == n) return 1.0 - ramp(n - 2);
  return ramp(k) - ramp(k - 1);
}

// Profile data of the n translated kinks on an index range of a grid.
struct Decomposition {
  std::size_t first = 0;
  std::size_t last = 0;
  std::vector<std::vector<double>> dh;   // H'(x - a_k)
  std::vector<std::vector<double>> d2h;  // H''(x - a_k)
  std::vector<double> g;                 // phi - H(a)
  std::vector<double> dH;                // d/dx H(a)
};

Decomposition decompose(const std::vector<double>& phi, const Grid& grid,
                        const KinkProfile& profile, const Positions& a, std::size_t first,
                        std::size_t last) {
  const std::size_t n = a.size();
  Decomposition d;
  d.first = first;
  d.last = last;
  d.dh.assign(n, std::vector<double>(grid.size, 0.0));
  d.d2h.assign(n, std::vector<double>(grid.size, 0.0));
  d.g.assign(grid.size, 0.0);
  d.dH.assign(grid.size, 0.0);
  for (std::size_t i = first; i <= last; ++i) {
    const double x = grid.x(i);
    double h = 1.0, dh = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const auto e = profile.eval(x - a[k]);
      h += orientation(k) * (e.h + 1.0);
      dh += orientation(k) * e.dh;
      d.dh[k][i] = e.dh;
      d.d2h[k][i] = e.d2h;
    }
    d.g[i] = phi[i] - h;
    d.dH[i] = dh;
  }
  return d;
}

double pairing(const std::vector<double>& f, const std::vector<double>& g, double dx,
               std::size_t first, std::size_t last) {
  if (last < first) return 0.0;
  double sum = 0.0;
  for (std::size_t i = first; i <= last; ++i) sum += f[i] * g[i];
  sum -= 0.5 * (f[first] * g[first] + f[last] * g[last]);
  return sum * dx;
}

std::pair<std::size_t, std::size_t> index_window(const Grid& grid, double lo, double hi) {
  const double last = static_cast<double>(grid.size - 1);
  const auto first =
      static_cast<std::size_t>(std::clamp(std::floor((lo - grid.x0) / grid.dx), 0.0, last));
  const auto end =
      static_cast<std::size_t>(std::clamp(std::ceil((hi - grid.x0) / grid.dx), 0.0, last));
  return {first, end};
}

// d Gamma_k / d a_j; the same matrix multiplies a' in the time-differentiated
// orthogonality conditions.
Eigen::MatrixXd modulation_matrix(const Decomposition& d, double dx) {
  const std::size_t n = d.dh.size();
  Eigen::MatrixXd m(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = 0; j < n; ++j) {
      m(k, j) = orientation(j) * pairing(d.dh[k], d.dh[j], dx, d.first, d.last);
    }
    m(k, k) -= pairing(d.d2h[k], d.g, dx, d.first, d.last);
  }
  return m;
}

Eigen::VectorXd gamma(const Decomposition& d, double dx) {
  const std::size_t n = d.dh.size();
  Eigen::VectorXd v(n);
  for (std::size_t k = 0; k < n; ++k) v(k) = pairing(d.dh[k], d.g, dx, d.first, d.last);
  return v;
}

void check_gaps(const Positions& a, double floor) {
  if (a.min_gap() < floor) {
    std::ostringstream msg;
    msg << "minimal gap " << a.min_gap() << " below " << floor;
    throw KinkError(ErrorCode::GapCollapse, msg.str());
  }
}

std::vector<double> momenta_from(const Decomposition& full, const std::vector<double>& gx,
                                 const FieldSnapshot& s, const Positions& a,
                                 const Cutoff& chi) {
  const std::size_t n = a.size();
  std::vector<double> p(n, 0.0);
  std::vector<double> density(s.grid.size);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < s.grid.size; ++i) {
      const double w = partition_value(chi, a, k, s.grid.x(i));
      density[i] = (-orientation(k) * full.dh[k][i] + w * gx[i]) * s.phidot[i];
    }
    p[k] = trapezoid(density, s.grid.dx);
  }
  return p;
}

struct Derived {
  std::vector<double> p;
  double ortho = 0.0;
  double g_h1 = 0.0;
  double g_energy = 0.0;
};

Derived derived_quantities(const FieldSnapshot& s, const Positions& a,
                           const Decomposition& full, const Cutoff& chi) {
  Derived out;
  auto gx = field_gradient(s);
  for (std::size_t i = 0; i < gx.size(); ++i) gx[i] -= full.dH[i];
  std::vector<double> h1(s.grid.size), kin(s.grid.size);
  for (std::size_t i = 0; i < s.grid.size; ++i) {
    h1[i] = full.g[i] * full.g[i] + gx[i] * gx[i];
    kin[i] = s.phidot[i] * s.phidot[i];
  }
  out.g_h1 = trapezoid(h1, s.grid.dx);
  out.g_energy = out.g_h1 + trapezoid(kin, s.grid.dx);
  for (std::size_t k = 0; k < a.size(); ++k) {
    out.ortho = std::max(out.ortho, std::abs(pairing(full.dh[k], full.g, s.grid.dx, 0,
                                                     s.grid.size - 1)));
  }
  out.p = momenta_from(full, gx, s, a, chi);
  return out;
}

Decomposition full_decomposition(const FieldSnapshot& s, const KinkProfile& profile,
                                 const Positions& a) {
  return decompose(s.phi, s.grid, profile, a, 0, s.grid.size - 1);
}

// Newton iteration only; returns converged positions and the iteration count.
std::pair<Positions, int> newton_fit(const FieldSnapshot& s, const KinkProfile& profile,
                                     const Positions& seed, const FitOptions& o) {
  const std::size_t n = seed.size();
  Positions a = seed;
  check_gaps(a, o.gap_floor);
  auto window_of = [&](const Positions& b) {
    return index_window(s.grid, b[0] - o.margin, b[n - 1] + o.margin);
  };
  auto [first, last] = window_of(a);
  Decomposition d = decompose(s.phi, s.grid, profile, a, first, last);
  Eigen::VectorXd r = gamma(d, s.grid.dx);
  for (int it = 0; it <= o.max_iterations; ++it) {
    if (r.cwiseAbs().maxCoeff() <= o.tolerance) return {a, it};
    if (it == o.max_iterations) break;
    const Eigen::VectorXd step = modulation_matrix(d, s.grid.dx).fullPivLu().solve(-r);
    if (!step.allFinite()) throw KinkError(ErrorCode::SingularSystem, "singular Newton matrix");
    double scale = 1.0;
    for (int damp = 0; damp < 8; ++damp) {
      std::vector<double> b = a.values();
      for (std::size_t k = 0; k < n; ++k) b[k] += scale * step(static_cast<Eigen::Index>(k));
      Positions trial(std::move(b));
      check_gaps(trial, o.gap_floor);
      std::tie(first, last) = window_of(trial);
      Decomposition dt = decompose(s.phi, s.grid, profile, trial, first, last);
      Eigen::VectorXd rt = gamma(dt, s.grid.dx);
      const bool accept = rt.cwiseAbs().maxCoeff() <= r.cwiseAbs().maxCoeff() || damp == 7;
      if (accept) {
        a = std::move(trial);
        d = std::move(dt);
        r = std::move(rt);
        break;
      }
      scale *= 0.5;
    }
  }
  std::ostringstream msg;
  msg << "orthogonality residual " << r.cwiseAbs().maxCoeff() << " after "
      << o.max_iterations << " iterations";
  throw KinkError(ErrorCode::NoConvergence, msg.str());
}

}  // namespace

std::vector<double> cutoff_partition(const Cutoff& chi, const Positions& a, std::size_t k,
                                     const Grid& grid) {
  std::vector<double> v(grid.size);
  for (std::size_t i = 0; i < grid.size; ++i) v[i] = partition_value(chi, a, k, grid.x(i));
  return v;
}

ModulationFit fit_modulation(const FieldSnapshot& s, const KinkProfile& profile,
                             const Positions& seed, const FitOptions& options) {
  if (seed.empty()) throw KinkError(ErrorCode::InvalidArgument, "empty seed");
  if (s.grid.size < 5) throw KinkError(ErrorCode::InvalidArgument, "snapshot grid too small");
  auto [a, iterations] = newton_fit(s, profile, seed, options);
  const Decomposition full = full_decomposition(s, profile, a);
  const Derived q = derived_quantities(s, a, full, Cutoff{});

  ModulationFit fit;
  fit.a = std::move(a);
  fit.g.grid = s.grid;
  fit.g.phi = full.g;
  fit.g.phidot = s.phidot;
  fit.g.sector = {0, 0};
  fit.p = q.p;
  fit.rho = fit.a.rho();
  fit.ortho_residual = q.ortho;
  fit.g_energy = q.g_energy;
  fit.g_h1 = q.g_h1;
  fit.iterations = iterations;
  return fit;
}

namespace {

FieldSnapshot reassemble(const ModulationFit& fit, const KinkProfile& profile) {
  FieldSnapshot s;
  s.grid = fit.g.grid;
  s.phi = multikink_values(profile, fit.a, s.grid);
  for (std::size_t i = 0; i < s.phi.size(); ++i) s.phi[i] += fit.g.phi[i];
  s.phidot = fit.g.phidot;
  s.sector = multikink_sector(fit.a.size());
  return s;
}

std::vector<double> solve_velocity(const Decomposition& d, double dx,
                                   const std::vector<double>& phidot) {
  const std::size_t n = d.dh.size();
  const Eigen::MatrixXd m = modulation_matrix(d, dx);
  for (std::size_t k = 0; k < n; ++k) {
    double off = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != k) off += std::abs(m(k, j));
    }
    if (!(std::abs(m(k, k)) > off)) {
      throw KinkError(ErrorCode::SingularSystem, "modulation matrix is not diagonally dominant");
    }
  }
  Eigen::VectorXd rhs(n);
  for (std::size_t k = 0; k < n; ++k) rhs(k) = -pairing(d.dh[k], phidot, dx, d.first, d.last);
  const Eigen::VectorXd v = m.partialPivLu().solve(rhs);
  return {v.data(), v.data() + n};
}

}  // namespace

std::vector<double> localized_momenta(const ModulationFit& fit, const KinkProfile& profile,
                                      const Cutoff& chi) {
  const FieldSnapshot s = reassemble(fit, profile);
  const Decomposition full = full_decomposition(s, profile, fit.a);
  auto gx = field_gradient(s);
  for (std::size_t i = 0; i < gx.size(); ++i) gx[i] -= full.dH[i];
  return momenta_from(full, gx, s, fit.a, chi);
}

std::vector<double> modulation_velocity(const ModulationFit& fit, const KinkProfile& profile,
                                        const std::vector<double>& phidot) {
  if (phidot.size() != fit.g.grid.size) {
    throw KinkError(ErrorCode::InvalidArgument, "phidot does not match the fit grid");
  }
  const FieldSnapshot s = reassemble(fit, profile);
  const Decomposition full = full_decomposition(s, profile, fit.a);
  return solve_velocity(full, s.grid.dx, phidot);
}

// ---------------------------------------------------------------------------

std::vector<double> ModulationSeries::times() const {
  std::vector<double> t;
  for (const auto& r : records) t.push_back(r.t);
  return t;
}

std::vector<std::vector<double>> ModulationSeries::gaps() const {
  std::vector<std::vector<double>> y;
  for (const auto& r : records) y.push_back(r.a.gaps());
  return y;
}

std::vector<std::vector<double>> ModulationSeries::relative_momenta(double mass) const {
  std::vector<std::vector<double>> q;
  for (const auto& r : records) {
    std::vector<double> row;
    for (std::size_t k = 0; k + 1 < r.p.size(); ++k) row.push_back((r.p[k + 1] - r.p[k]) / mass);
    q.push_back(std::move(row));
  }
  return q;
}

ModulationTracker::ModulationTracker(const KinkProfile& profile,
                                     const PotentialModel& potential, Positions seed,
                                     TrackOptions options)
    : profile_(profile), potential_(potential), seed_(std::move(seed)), options_(options) {}

bool ModulationTracker::observe(double t, const FieldSnapshot& s) {
  if (series_.lost) return false;
  auto lose = [&](const std::string& why) {
    series_.lost = true;
    series_.lost_reason = why;
    return false;
  };
  if (!series_.records.empty() && !(t > series_.records.back().t) &&
      !(t < series_.records.back().t)) {
    return lose("repeated sample time");
  }

  ModulationRecord rec;
  rec.t = t;
  try {
    auto [a, iterations] = newton_fit(s, profile_, seed_, options_.fit);
    (void)iterations;
    if (a.min_gap() < options_.gap_floor) {
      std::ostringstream msg;
      msg << "gap " << a.min_gap() << " below the tracking floor at t = " << t;
      return lose(msg.str());
    }
    const Decomposition full = full_decomposition(s, profile_, a);
    const Derived q = derived_quantities(s, a, full, Cutoff{});
    rec.a_dot = solve_velocity(full, s.grid.dx, s.phidot);
    rec.a = a;
    rec.p = q.p;
    rec.rho = a.rho();
    rec.ortho_residual = q.ortho;
    rec.g_energy = q.g_energy;
    rec.g_h1 = q.g_h1;
    std::vector<double> dtg(s.grid.size);
    for (std::size_t i = 0; i < dtg.size(); ++i) {
      double v = s.phidot[i];
      for (std::size_t k = 0; k < a.size(); ++k) v += orientation(k) * rec.a_dot[k] * full.dh[k][i];
      dtg[i] = v * v;
    }
    rec.dtg_l2 = trapezoid(dtg, s.grid.dx);
    rec.energy = energy(s, potential_).total;
  } catch (const KinkError& e) {
    std::ostringstream msg;
    msg << "fit failed at t = " << t << ": " << e.what();
    return lose(msg.str());
  }

  if (!series_.records.empty()) {
    const auto& prev = series_.records.back();
    const double dt = std::abs(t - prev.t);
    for (std::size_t k = 0; k < rec.a.size(); ++k) {
      const double speed = std::max(std::abs(prev.a_dot[k]), std::abs(rec.a_dot[k]));
      if (std::abs(rec.a[k] - prev.a[k]) > 2.0 * speed * dt + 1e-8) {
        std::ostringstream msg;
        msg << "position jump of kink " << k + 1 << " at t = " << t;
        return lose(msg.str());
      }
    }
  }
  seed_ = rec.a;
  series_.records.push_back(std::move(rec));
  return true;
}

ModulationSeries track(const Trajectory& traj, const KinkProfile& profile,
                       const PotentialModel& potential, std::size_t n,
                       std::optional<Positions> seed, const TrackOptions& options) {
  if (traj.snapshots.empty()) {
    throw KinkError(ErrorCode::InvalidArgument, "trajectory has no stored snapshots");
  }
  if (!seed) {
    const auto zeros = zero_crossings(traj.snapshots.front());
    if (zeros.size() != n) {
      throw KinkError(ErrorCode::NoSeed, "zero crossings do not match the kink count");
    }
    seed = Positions(zeros);
  }
  ModulationTracker tracker(profile, potential, *seed, options);
  for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
    if (!tracker.observe(traj.times[i], traj.snapshots[i])) break;
  }
  return tracker.take_series();
}

std::vector<NewtonResidual> newton_law_residuals(const ModulationSeries& series,
                                                 const KinkProfile& profile) {
  std::vector<NewtonResidual> out;
  const auto& r = series.records;
  for (std::size_t i = 1; i + 1 < r.size(); ++i) {
    const double h = r[i + 1].t - r[i - 1].t;
    const double rho = r[i].rho;
    double r1 = 0.0, r2 = 0.0;
    for (std::size_t k = 0; k < r[i].a.size(); ++k) {
      const double adot = (r[i + 1].a[k] - r[i - 1].a[k]) / h;
      const double pdot = (r[i + 1].p[k] - r[i - 1].p[k]) / h;
      const double force = interaction_force(profile, r[i].a, k);
      r1 = std::max(r1, std::abs(profile.mass * adot - r[i].p[k]) / rho);
      r2 = std::max(r2, std::abs(pdot - force) * (-std::log(rho)) / rho);
    }
    out.push_back({r[i].t, r1, r2});
  }
  return out;
}

std::vector<std::size_t> cluster_grouping(const Positions& a, double gap_threshold) {
  std::vector<std::size_t> bounds{0};
  const auto y = a.gaps();
  for (std::size_t k = 0; k < y.size(); ++k) {
    if (!(y[k] < gap_threshold)) bounds.push_back(k + 1);
  }
  if (!a.empty()) bounds.push_back(a.size());
  return bounds;
}

std::vector<std::size_t> cluster_grouping(const ModulationFit& fit, double gap_threshold) {
  return cluster_grouping(fit.a, gap_threshold);
}

}  // namespace kinklab
