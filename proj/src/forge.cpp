#include "kinklab/forge.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <future>
#include <limits>
#include <map>
#include <sstream>
#include <thread>

#include "kinklab/error.hpp"

namespace kinklab {

ShootSpec ShootSpec::with_defaults(std::vector<double> target_gaps, double L, double T,
                                   double L0) {
  ShootSpec s;
  s.target_gaps = std::move(target_gaps);
  s.L = L;
  s.T = T;
  s.L0 = L0;
  s.L1 = L - 2.0;
  s.L2 = L + 2.0 * std::log(std::max(T, 1.0)) + 6.0;
  s.rho_exit = 2.0 * static_cast<double>(s.n()) * std::exp(-s.L1);
  return s;
}

void ShootSpec::validate() const {
  auto fail = [](const std::string& why) { throw KinkError(ErrorCode::InvalidArgument, why); };
  if (!(L >= L0)) {
    std::ostringstream msg;
    msg << "separation floor L = " << L << " is below L0 = " << L0;
    fail(msg.str());
  }
  if (!(T > 0.0)) fail("shooting horizon T must be positive");
  if (!(L1 < L2)) fail("search box needs L1 < L2");
  for (double y : target_gaps) {
    if (!(y >= L)) fail("target gaps must be at least L");
    if (!(y > L1 && y < L2)) fail("search box does not contain the target gaps");
  }
  if (!(numerics.dx > 0.0) || !(numerics.dt > 0.0) || numerics.stride == 0) {
    fail("shot numerics must be positive");
  }
}

std::size_t worker_threads() {
  if (const char* env = std::getenv("KINKLAB_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

double centred_index(std::size_t k, std::size_t n) {
  return (2.0 * static_cast<double>(k + 1) - static_cast<double>(n) - 1.0) / 2.0;
}

// E_p(H(a)) + 1/2 ||phidot||^2 for phidot = -sum_k (-1)^k v_k H_k', by exact
// derivatives on the static quadrature grid.
double seeded_energy_exact(const Positions& a, const std::vector<double>& v,
                           const KinkProfile& profile) {
  const Grid g = static_grid(a);
  std::vector<double> kin(g.size);
  for (std::size_t i = 0; i < g.size; ++i) {
    double pd = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) pd -= orientation(k) * v[k] * profile.slope(g.x(i) - a[k]);
    kin[i] = 0.5 * pd * pd;
  }
  return multikink_potential_energy(profile, a) + trapezoid(kin, g.dx);
}

}  // namespace

std::vector<double> seed_velocities(const Positions& a, const KinkProfile& profile) {
  const std::size_t n = a.size();
  if (n <= 1) return std::vector<double>(n, 0.0);
  const Grid g = static_grid(a);
  std::vector<double> density(g.size);
  for (std::size_t i = 0; i < g.size; ++i) {
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      s += centred_index(k, n) * orientation(k) * profile.slope(g.x(i) - a[k]);
    }
    density[i] = s * s;
  }
  const double f = trapezoid(density, g.dx);
  const double deficit = 2.0 * static_cast<double>(n) * profile.mass -
                         2.0 * multikink_potential_energy(profile, a);
  if (!(deficit > 0.0)) {
    std::ostringstream msg;
    msg << "E_p(H(a_T)) exceeds nM by " << -deficit / 2.0;
    throw KinkError(ErrorCode::NegativeDeficit, msg.str());
  }
  const double rho = a.rho();
  const double lambda = std::sqrt(deficit / (rho * f));
  std::vector<double> v(n);
  for (std::size_t k = 0; k < n; ++k) v[k] = centred_index(k, n) * lambda * std::sqrt(rho);
  return v;
}

FieldSnapshot seeded_state(const Positions& a, const std::vector<double>& v,
                           const KinkProfile& profile, const Grid& grid) {
  FieldSnapshot s = multikink_configuration(profile, a, grid);
  for (std::size_t i = 0; i < grid.size; ++i) {
    double pd = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) pd -= orientation(k) * v[k] * profile.slope(grid.x(i) - a[k]);
    s.phidot[i] = pd;
  }
  return s;
}

double energy_norm_distance(const FieldSnapshot& a, const FieldSnapshot& b) {
  if (!(a.grid == b.grid)) throw KinkError(ErrorCode::InvalidArgument, "snapshot grids differ");
  std::vector<double> d(a.grid.size), density(a.grid.size);
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = a.phi[i] - b.phi[i];
  const auto dd = derivative4(d, a.grid.dx, 0.0, 0.0);
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double dv = a.phidot[i] - b.phidot[i];
    density[i] = d[i] * d[i] + dd[i] * dd[i] + dv * dv;
  }
  return std::sqrt(trapezoid(density, a.grid.dx));
}

ShootResult shoot_backward(const ShootSpec& spec, const std::vector<double>& gaps_T,
                           const KinkProfile& profile, double mean_T, bool allow_loss) {
  if (gaps_T.size() + 1 != spec.n()) {
    throw KinkError(ErrorCode::InvalidArgument, "gaps_T does not match the target");
  }
  const PotentialModel& potential = *profile.potential;
  ShootResult r;
  r.gaps_at_T = gaps_T;
  r.a_T = Positions::from_gaps(gaps_T, mean_T);
  r.v_T = seed_velocities(r.a_T, profile);
  const Grid grid = evolution_grid(r.a_T, spec.T, spec.numerics.dx);
  r.seeded = seeded_state(r.a_T, r.v_T, profile, grid);
  r.seeded_energy = seeded_energy_exact(r.a_T, r.v_T, profile);

  EvolutionConfig cfg;
  cfg.dt = spec.numerics.dt;
  cfg.t_start = spec.T;
  cfg.t_end = 0.0;
  cfg.snapshot_stride = spec.numerics.stride;
  cfg.store_snapshots = false;

  ModulationTracker tracker(profile, potential, r.a_T);
  FieldSnapshot current;
  bool exited = false;
  auto observer = [&](double t, const FieldSnapshot& s) {
    if (!tracker.observe(t, s)) return false;
    if (tracker.series().records.back().rho > spec.rho_exit) {
      exited = true;
      return false;
    }
    current = s;
    return true;
  };
  r.trajectory = evolve(r.seeded, potential, cfg, observer);
  r.series = tracker.take_series();
  r.tracking_lost = r.series.lost;
  r.lost_reason = r.series.lost_reason;
  if (r.tracking_lost && !allow_loss) {
    throw KinkError(ErrorCode::TrackingLost, r.lost_reason);
  }
  // The record past the threshold is dropped: the exit time is the last
  // time at which rho <= rho_exit.
  if (exited) r.series.records.pop_back();
  if (r.series.records.empty()) {
    throw KinkError(ErrorCode::TrackingLost, "no tracked sample at time T");
  }
  const auto& last = r.series.records.back();
  r.exit_time = last.t;
  r.gaps_at_exit = last.a.gaps();
  r.state_at_exit = std::move(current);

  for (const auto& rec : r.series.records) {
    const double dh = rec.rho + rec.g_energy;
    r.delta_series.push_back({rec.t, dh, dh * (std::exp(spec.L) + rec.t * rec.t)});
  }
  const auto& recs = r.series.records;
  for (std::size_t i = 1; i < recs.size(); ++i) {
    if (recs[i].rho < recs[i - 1].rho * (1.0 - 1e-12)) r.rho_monotone = false;
  }
  return r;
}

namespace {

struct Shot {
  std::vector<double> psi;  // gaps at exit; empty when tracking was lost
  ShootResult result;
};

class ShotCache {
 public:
  ShotCache(const ShootSpec& spec, const KinkProfile& profile) : spec_(spec), profile_(profile) {}

  // Evaluates the missing points in parallel (fixed order of results).
  std::vector<const Shot*> evaluate_all(const std::vector<std::vector<double>>& points) {
    std::vector<std::vector<double>> missing;
    for (const auto& p : points) {
      if (!cache_.count(p) &&
          std::find(missing.begin(), missing.end(), p) == missing.end()) {
        missing.push_back(p);
      }
    }
    const std::size_t workers = worker_threads();
    for (std::size_t start = 0; start < missing.size(); start += workers) {
      const std::size_t end = std::min(missing.size(), start + workers);
      std::vector<std::future<Shot>> jobs;
      for (std::size_t i = start; i < end; ++i) {
        jobs.push_back(std::async(workers > 1 ? std::launch::async : std::launch::deferred,
                                  [this, p = missing[i]] { return run(p); }));
      }
      for (std::size_t i = start; i < end; ++i) {
        cache_.emplace(missing[i], jobs[i - start].get());
        ++count_;
      }
    }
    std::vector<const Shot*> out;
    for (const auto& p : points) out.push_back(&cache_.at(p));
    return out;
  }

  const Shot& evaluate(const std::vector<double>& p) {
    return *evaluate_all(std::vector<std::vector<double>>{p}).front();
  }
  std::size_t count() const { return count_; }

 private:
  Shot run(const std::vector<double>& p) const {
    Shot s;
    s.result = shoot_backward(spec_, p, profile_, 0.0, true);
    // A lost shot counts as collapsed: its gaps lie below every admissible
    // target.
    if (!s.result.tracking_lost) s.psi = s.result.gaps_at_exit;
    return s;
  }

  const ShootSpec& spec_;
  const KinkProfile& profile_;
  std::map<std::vector<double>, Shot> cache_;
  std::size_t count_ = 0;
};

// Psi_k - target_k, -infinity for collapsed shots.
double residual(const Shot& s, const ShootSpec& spec, std::size_t k) {
  if (s.psi.empty()) return -std::numeric_limits<double>::infinity();
  return s.psi[k] - spec.target_gaps[k];
}

double max_residual(const Shot& s, const ShootSpec& spec) {
  double m = 0.0;
  for (std::size_t k = 0; k < spec.target_gaps.size(); ++k) {
    m = std::max(m, std::abs(residual(s, spec, k)));
  }
  return m;
}

SearchResult finish(ShotCache& cache, const std::vector<double>& y, const Shot& s,
                    const char* method) {
  SearchResult out;
  out.gaps_T = y;
  out.shot = s.result;
  out.shots = cache.count();
  out.method = method;
  return out;
}

[[noreturn]] void exhausted(const std::string& why) {
  throw KinkError(ErrorCode::BoxExhausted, why);
}

SearchResult scalar_search(const ShootSpec& spec, ShotCache& cache, double tol) {
  double lo = spec.L1, hi = spec.L2;
  const auto both = cache.evaluate_all({{lo}, {hi}});
  double flo = residual(*both[0], spec, 0), fhi = residual(*both[1], spec, 0);
  if (flo > 0.0) exhausted("face condition fails at L1: Psi exceeds the target");
  if (fhi < 0.0) exhausted("face condition fails at L2: Psi below the target");
  if (std::abs(fhi) <= tol) return finish(cache, {hi}, *both[1], "illinois");
  if (std::abs(flo) <= tol) return finish(cache, {lo}, *both[0], "illinois");
  int side = 0;
  for (int it = 0; it < 100; ++it) {
    double c = std::isfinite(flo) ? hi - fhi * (hi - lo) / (fhi - flo) : 0.5 * (lo + hi);
    if (!(c > lo && c < hi)) c = 0.5 * (lo + hi);
    const Shot& s = cache.evaluate(std::vector<double>{c});
    const double fc = residual(s, spec, 0);
    if (std::abs(fc) <= tol) return finish(cache, {c}, s, "illinois");
    if (fc < 0.0) {
      lo = c;
      flo = fc;
      if (side == -1 && std::isfinite(fhi)) fhi *= 0.5;
      side = -1;
    } else {
      hi = c;
      fhi = fc;
      if (side == 1 && std::isfinite(flo)) flo *= 0.5;
      side = 1;
    }
    if (hi - lo < 1e-10) break;
  }
  exhausted("bracket collapsed without meeting the tolerance");
}

struct Box {
  std::vector<double> lo, hi;
};

// Face-centre sign conditions of the Poincare-Miranda theorem.
bool admissible(const Box& b, const ShootSpec& spec, ShotCache& cache) {
  const std::size_t m = b.lo.size();
  std::vector<double> centre(m);
  for (std::size_t k = 0; k < m; ++k) centre[k] = 0.5 * (b.lo[k] + b.hi[k]);
  std::vector<std::vector<double>> points;
  for (std::size_t k = 0; k < m; ++k) {
    auto p = centre;
    p[k] = b.lo[k];
    points.push_back(p);
    p[k] = b.hi[k];
    points.push_back(p);
  }
  const auto shots = cache.evaluate_all(points);
  for (std::size_t k = 0; k < m; ++k) {
    if (residual(*shots[2 * k], spec, k) > 0.0) return false;
    if (residual(*shots[2 * k + 1], spec, k) < 0.0) return false;
  }
  return true;
}

std::optional<SearchResult> subdivide(const Box& b, const ShootSpec& spec, ShotCache& cache,
                                      double tol, int depth) {
  if (!admissible(b, spec, cache)) return std::nullopt;
  const std::size_t m = b.lo.size();
  std::vector<double> centre(m);
  std::size_t widest = 0;
  for (std::size_t k = 0; k < m; ++k) {
    centre[k] = 0.5 * (b.lo[k] + b.hi[k]);
    if (b.hi[k] - b.lo[k] > b.hi[widest] - b.lo[widest]) widest = k;
  }
  const Shot& s = cache.evaluate(centre);
  if (!s.psi.empty() && max_residual(s, spec) <= tol) {
    return finish(cache, centre, s, "miranda-subdivision");
  }
  if (depth > 60 || b.hi[widest] - b.lo[widest] < 1e-6) return std::nullopt;
  Box left = b, right = b;
  left.hi[widest] = centre[widest];
  right.lo[widest] = centre[widest];
  if (auto r = subdivide(left, spec, cache, tol, depth + 1)) return r;
  return subdivide(right, spec, cache, tol, depth + 1);
}

std::optional<SearchResult> newton_search(const ShootSpec& spec, ShotCache& cache, double tol) {
  const std::size_t m = spec.target_gaps.size();
  auto clamp_box = [&](std::vector<double> y) {
    for (double& v : y) v = std::clamp(v, spec.L1, spec.L2);
    return y;
  };
  auto defect = [&](const Shot& s) {
    Eigen::VectorXd d(static_cast<Eigen::Index>(m));
    for (std::size_t k = 0; k < m; ++k) d(static_cast<Eigen::Index>(k)) = residual(s, spec, k);
    return d;
  };
  // The backward drift is nearly a constant shift: one shot at the target
  // gives the starting point.
  std::vector<double> y = spec.target_gaps;
  {
    const Shot& s = cache.evaluate(y);
    if (s.psi.empty()) return std::nullopt;
    for (std::size_t k = 0; k < m; ++k) y[k] -= residual(s, spec, k);
    y = clamp_box(y);
  }
  const double h = 0.02;
  for (int it = 0; it < 12; ++it) {
    const Shot& s = cache.evaluate(y);
    if (s.psi.empty()) return std::nullopt;
    const Eigen::VectorXd d = defect(s);
    if (d.cwiseAbs().maxCoeff() <= tol) return finish(cache, y, s, "quasi-newton");

    std::vector<std::vector<double>> probes;
    for (std::size_t j = 0; j < m; ++j) {
      auto p = y;
      p[j] += (p[j] + h <= spec.L2) ? h : -h;
      probes.push_back(p);
    }
    const auto shots = cache.evaluate_all(probes);
    Eigen::MatrixXd J(m, m);
    for (std::size_t j = 0; j < m; ++j) {
      if (shots[j]->psi.empty()) return std::nullopt;
      const double step = probes[j][j] - y[j];
      J.col(static_cast<Eigen::Index>(j)) = (defect(*shots[j]) - d) / step;
    }
    const Eigen::VectorXd dy = J.fullPivLu().solve(-d);
    if (!dy.allFinite()) return std::nullopt;
    bool improved = false;
    double scale = 1.0;
    for (int damp = 0; damp < 5; ++damp, scale *= 0.5) {
      auto trial = y;
      for (std::size_t k = 0; k < m; ++k) trial[k] += scale * dy(static_cast<Eigen::Index>(k));
      trial = clamp_box(trial);
      const Shot& t = cache.evaluate(trial);
      if (!t.psi.empty() && defect(t).cwiseAbs().maxCoeff() < d.cwiseAbs().maxCoeff()) {
        y = trial;
        improved = true;
        break;
      }
    }
    if (!improved) return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace

SearchResult miranda_search(const ShootSpec& spec, const KinkProfile& profile, double tol) {
  spec.validate();
  ShotCache cache(spec, profile);
  if (spec.n() == 1) {
    const Shot& s = cache.evaluate(std::vector<double>{});
    return finish(cache, {}, s, "trivial");
  }
  if (spec.n() == 2) return scalar_search(spec, cache, tol);
  if (auto r = newton_search(spec, cache, tol)) return *r;
  Box box{std::vector<double>(spec.target_gaps.size(), spec.L1),
          std::vector<double>(spec.target_gaps.size(), spec.L2)};
  if (auto r = subdivide(box, spec, cache, tol, 0)) return *r;
  exhausted("no sign-admissible subbox at the resolution floor");
}

bool ClusterCertificate::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const InvariantCheck& c) { return c.pass; });
}

Construction construct_cluster(const Positions& target, double L, double T,
                               const KinkProfile& profile, double L0,
                               const ShotNumerics& numerics) {
  if (target.empty()) throw KinkError(ErrorCode::InvalidArgument, "no target positions");
  const std::size_t n = target.size();
  ClusterCertificate cert;
  cert.spec = ShootSpec::with_defaults(target.gaps(), L, T, L0);
  cert.spec.numerics = numerics;
  cert.spec.validate();
  cert.search = miranda_search(cert.spec, profile);

  // Translate so that the fitted positions at the exit time match the
  // target; the shot is translation equivariant, so re-shooting with a
  // shifted a_T gives the translated solution.
  const auto& fitted = cert.search.shot.series.records.back().a;
  const double shift = target.mean() - fitted.mean();
  ShootResult shot = shoot_backward(cert.spec, cert.search.gaps_T, profile, shift);
  const Positions a0 = shot.series.records.back().a;

  Construction out;
  out.initial = shot.state_at_exit;
  cert.fit0 = fit_modulation(out.initial, profile, a0);
  cert.g0_energy = cert.fit0.g_energy;

  const PotentialModel& potential = *profile.potential;
  EvolutionConfig cfg;
  cfg.dt = numerics.dt;
  cfg.t_start = shot.exit_time;
  cfg.t_end = T;
  cfg.snapshot_stride = numerics.stride;
  cfg.store_snapshots = false;
  ModulationTracker tracker(profile, potential, a0);
  FieldSnapshot final_state;
  evolve(out.initial, potential, cfg, [&](double t, const FieldSnapshot& s) {
    final_state = s;
    return tracker.observe(t, s);
  });
  cert.forward = tracker.take_series();
  const ModulationSeries& forward = cert.forward;
  for (const auto& rec : forward.records) {
    const double dh = rec.rho + rec.g_energy;
    const double scaled = dh * (std::exp(L) + rec.t * rec.t);
    cert.forward_delta.push_back({rec.t, dh, scaled});
    cert.sup_scaled_delta = std::max(cert.sup_scaled_delta, scaled);
  }
  cert.reversibility_error = energy_norm_distance(final_state, shot.seeded);

  double position_error = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    position_error = std::max(position_error, std::abs(a0[k] - target[k]));
  }
  const double g_norm = std::sqrt(cert.fit0.g_h1);
  const double energy_gap = std::abs(shot.seeded_energy - static_cast<double>(n) * profile.mass);
  auto add = [&](std::string name, double value, double bound, bool pass) {
    cert.checks.push_back({std::move(name), value, bound, pass});
  };
  add("fitted_positions_at_zero", position_error, 1e-3, position_error <= 1e-3);
  add("exit_time", shot.exit_time, 0.0, shot.exit_time == 0.0);
  add("orthogonality_g0", cert.fit0.ortho_residual, 1e-9 * std::max(1.0, g_norm),
      cert.fit0.ortho_residual <= 1e-9 * std::max(1.0, g_norm));
  add("seeded_energy", energy_gap, 1e-8, energy_gap <= 1e-8);
  add("rho_monotone_backward", shot.rho_monotone ? 0.0 : 1.0, 0.0, shot.rho_monotone);
  add("reversibility", cert.reversibility_error, 1e-5, cert.reversibility_error <= 1e-5);
  const bool tracked = !forward.lost && !forward.records.empty() &&
                       std::abs(forward.records.back().t - T) < 1e-9;
  add("forward_tracking", tracked ? 0.0 : 1.0, 0.0, tracked);
  add("delta_scaled_finite", cert.sup_scaled_delta, std::numeric_limits<double>::infinity(),
      std::isfinite(cert.sup_scaled_delta));

  cert.search.shot = std::move(shot);
  out.certificate = std::move(cert);
  return out;
}

}  // namespace kinklab
