#include "kinklab/toda.hpp"

#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <limits>
#include <sstream>

#include "kinklab/error.hpp"

namespace kinklab {

namespace odeint = boost::numeric::odeint;

std::vector<double> TodaState::relative_momenta(double mass) const {
  std::vector<double> q;
  for (std::size_t k = 0; k + 1 < p.size(); ++k) q.push_back((p[k + 1] - p[k]) / mass);
  return q;
}

Eigen::MatrixXd TodaConstants::projection_one() const {
  const auto m = static_cast<Eigen::Index>(sigma.size());
  return Eigen::MatrixXd::Identity(m, m) - mu0 * Eigen::VectorXd::Ones(m) * sigma.transpose();
}

Eigen::MatrixXd TodaConstants::projection_sigma() const {
  const auto m = static_cast<Eigen::Index>(sigma.size());
  return Eigen::MatrixXd::Identity(m, m) - sigma * sigma.transpose() / sigma.squaredNorm();
}

TodaConstants toda_constants(double kappa, double mass, std::size_t n) {
  if (n == 0) throw KinkError(ErrorCode::InvalidArgument, "n must be positive");
  if (!(kappa > 0.0) || !(mass > 0.0)) {
    throw KinkError(ErrorCode::InvalidArgument, "kappa and M must be positive");
  }
  TodaConstants c;
  c.kappa = kappa;
  c.mass = mass;
  c.amplitude = kappa * std::sqrt(2.0 / mass);
  c.n = n;
  const auto m = static_cast<Eigen::Index>(n - 1);
  c.sigma.resize(m);
  c.laplacian = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double k = static_cast<double>(i + 1);
    c.sigma(i) = k * (static_cast<double>(n) - k) / 2.0;
    c.laplacian(i, i) = 2.0;
    if (i > 0) c.laplacian(i, i - 1) = -1.0;
    if (i + 1 < m) c.laplacian(i, i + 1) = -1.0;
  }
  if (n >= 2) {
    const double nn = static_cast<double>(n);
    c.mu0 = 12.0 / ((nn + 1.0) * nn * (nn - 1.0));
  }
  return c;
}

TodaConstants toda_constants(const KinkProfile& profile, std::size_t n) {
  return toda_constants(profile.kappa, profile.mass, n);
}

namespace {

using Vec = std::vector<double>;

// Packed state (a_1..a_n, p_1..p_n).
void packed_rhs(const Vec& x, Vec& dx, const TodaConstants& c) {
  const std::size_t n = c.n;
  const double k2 = 2.0 * c.kappa * c.kappa;
  for (std::size_t k = 0; k < n; ++k) {
    dx[k] = x[n + k] / c.mass;
    double f = 0.0;
    if (k + 1 < n) f += k2 * std::exp(-(x[k + 1] - x[k]));
    if (k > 0) f -= k2 * std::exp(-(x[k] - x[k - 1]));
    dx[n + k] = f;
  }
}

Vec pack(const TodaState& s) {
  Vec x(s.a.values());
  x.insert(x.end(), s.p.begin(), s.p.end());
  return x;
}

TodaState unpack(const Vec& x, double t, std::size_t n) {
  TodaState s;
  s.t = t;
  s.a = Positions(Vec(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(n)));
  s.p.assign(x.begin() + static_cast<std::ptrdiff_t>(n), x.end());
  return s;
}

bool finite(const Vec& x) {
  for (double v : x) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

[[noreturn]] void underflow(double t, const char* why) {
  std::ostringstream msg;
  msg << why << " at t = " << t;
  throw KinkError(ErrorCode::StepUnderflow, msg.str());
}

}  // namespace

TodaDerivative toda_rhs(const TodaState& s, const TodaConstants& c) {
  if (s.a.size() != c.n || s.p.size() != c.n) {
    throw KinkError(ErrorCode::InvalidArgument, "state size does not match the constants");
  }
  const Vec x = pack(s);
  Vec dx(x.size());
  packed_rhs(x, dx, c);
  TodaDerivative d;
  d.da.assign(dx.begin(), dx.begin() + static_cast<std::ptrdiff_t>(c.n));
  d.dp.assign(dx.begin() + static_cast<std::ptrdiff_t>(c.n), dx.end());
  return d;
}

TodaState parabolic_solution(const TodaConstants& c, double t, double center) {
  if (!(t > 0.0)) throw KinkError(ErrorCode::NonPositiveTime, "parabolic solution needs t > 0");
  const std::size_t n = c.n;
  std::vector<double> gaps;
  for (std::size_t k = 1; k < n; ++k) {
    const double kk = static_cast<double>(k);
    gaps.push_back(2.0 * std::log(c.kappa * t) -
                   std::log(c.mass * kk * (static_cast<double>(n) - kk) / 2.0));
  }
  TodaState s;
  s.t = t;
  s.a = n == 1 ? Positions{center} : Positions::from_gaps(gaps, center);
  for (std::size_t k = 1; k <= n; ++k) {
    s.p.push_back(c.mass * (2.0 * static_cast<double>(k) - static_cast<double>(n) - 1.0) / t);
  }
  return s;
}

double hamiltonian(const TodaState& s, const TodaConstants& c) {
  double kin = 0.0;
  for (double v : s.p) kin += v * v;
  return kin / (2.0 * c.mass) - 2.0 * c.kappa * c.kappa * s.a.rho();
}

std::vector<TodaState> integrate(const TodaState& initial, const TodaConstants& c, double t_end,
                                 const TodaOptions& o) {
  if (initial.a.size() != c.n || initial.p.size() != c.n) {
    throw KinkError(ErrorCode::InvalidArgument, "state size does not match the constants");
  }
  if (!(o.tol >= 1e-12 && o.tol <= 1e-6)) {
    throw KinkError(ErrorCode::InvalidArgument, "tolerance must lie in [1e-12, 1e-6]");
  }
  const double dir = t_end >= initial.t ? 1.0 : -1.0;
  const std::size_t n = c.n;
  auto system = [&c](const Vec& x, Vec& dx, double) { packed_rhs(x, dx, c); };

  std::vector<TodaState> out{initial};
  Vec x = pack(initial);
  double t = initial.t;
  const bool sampled = o.sample_dt > 0.0;
  double next_sample = sampled ? t + dir * o.sample_dt : t_end;
  if (dir * (next_sample - t_end) > 0.0) next_sample = t_end;
  auto remaining = [&] { return dir * (t_end - t); };
  // Records the state when it sits on the next sample time (or always when
  // unsampled) and advances the sample clock.
  auto maybe_record = [&](double slack) {
    if (sampled && dir * (t - next_sample) < -slack) return;
    out.push_back(unpack(x, t, n));
    if (sampled) {
      next_sample += dir * o.sample_dt;
      if (dir * (next_sample - t_end) > 0.0) next_sample = t_end;
    }
  };

  if (o.method == TodaMethod::Leapfrog) {
    if (!(o.leapfrog_step > 0.0)) throw KinkError(ErrorCode::NonPositiveStep, "leapfrog step");
    const auto steps = static_cast<std::size_t>(std::ceil(remaining() / o.leapfrog_step - 1e-9));
    if (steps == 0) return out;
    const double h = (t_end - initial.t) / static_cast<double>(steps);
    Vec dx(x.size());
    packed_rhs(x, dx, c);
    for (std::size_t s = 1; s <= steps; ++s) {
      for (std::size_t k = 0; k < n; ++k) x[n + k] += 0.5 * h * dx[n + k];
      for (std::size_t k = 0; k < n; ++k) x[k] += h * x[n + k] / c.mass;
      packed_rhs(x, dx, c);
      for (std::size_t k = 0; k < n; ++k) x[n + k] += 0.5 * h * dx[n + k];
      t = s == steps ? t_end : initial.t + static_cast<double>(s) * h;
      if (!finite(x)) underflow(t, "non-finite state");
      maybe_record(s == steps ? std::numeric_limits<double>::infinity() : 1e-9 * std::abs(h));
    }
    return out;
  }

  // The controller bounds the local error by eps (1 + |x|); the margin keeps
  // it below tol for the O(10) coordinates met here.
  const double eps = 0.1 * o.tol;
  auto stepper = odeint::make_controlled(eps, eps, odeint::runge_kutta_dopri5<Vec>());
  double h = dir * std::min(1e-2, remaining());
  while (remaining() > 0.0) {
    const double target = sampled ? next_sample : t_end;
    const double free_step = h;
    const bool clipped = dir * h >= dir * (target - t);
    if (clipped) h = target - t;
    if (stepper.try_step(system, x, t, h) == odeint::success) {
      if (!finite(x)) underflow(t, "non-finite state");
      if (clipped) {
        t = target;
        h = dir * std::max(std::abs(h), std::abs(free_step));
      }
      if (!sampled || clipped) maybe_record(std::numeric_limits<double>::infinity());
    } else if (std::abs(h) < o.min_step * std::max(1.0, std::abs(t))) {
      underflow(t, "step size underflow");
    }
  }
  return out;
}

TodaState cluster_state(const TodaConstants& c, double t_late, const std::vector<double>& dz,
                        double t_early, const TodaOptions& options) {
  if (c.n < 2 || dz.size() != c.n - 1) {
    throw KinkError(ErrorCode::InvalidArgument, "dz needs n - 1 entries");
  }
  TodaState s = parabolic_solution(c, t_late);
  const Eigen::VectorXd shift =
      c.projection_sigma() * Eigen::Map<const Eigen::VectorXd>(dz.data(), c.sigma.size());
  auto gaps = s.gaps();
  for (std::size_t k = 0; k < gaps.size(); ++k) gaps[k] += shift(static_cast<Eigen::Index>(k));
  s.a = Positions::from_gaps(gaps, s.a.mean());
  TodaOptions o = options;
  o.sample_dt = 0.0;
  return integrate(s, c, t_early, o).back();
}

RzDecomposition decompose_rz(const TodaState& s, const TodaConstants& c) {
  if (c.n < 2) throw KinkError(ErrorCode::InvalidArgument, "decomposition needs n >= 2");
  const auto y = s.gaps();
  const auto q = s.relative_momenta(c.mass);
  const auto m = static_cast<Eigen::Index>(c.n - 1);
  const Eigen::Map<const Eigen::VectorXd> ye(y.data(), m), qe(q.data(), m);
  const Eigen::MatrixXd p1 = c.projection_one();
  const Eigen::VectorXd z = p1 * ye, w = p1 * qe;
  RzDecomposition d;
  d.r = c.mu0 * c.sigma.dot(ye);
  d.b = c.mu0 * c.sigma.dot(qe);
  d.z.assign(z.data(), z.data() + m);
  d.w.assign(w.data(), w.data() + m);
  return d;
}

std::vector<double> critical_profile_zcr(const TodaConstants& c) {
  if (c.n < 2) throw KinkError(ErrorCode::InvalidArgument, "z_cr needs n >= 2");
  const Eigen::VectorXd logs = c.sigma.array().log();
  const Eigen::VectorXd z =
      -logs + c.mu0 * c.sigma.dot(logs) * Eigen::VectorXd::Ones(c.sigma.size());
  return {z.data(), z.data() + z.size()};
}

double coercivity_constants(const TodaConstants& c) {
  if (c.n < 2) throw KinkError(ErrorCode::InvalidArgument, "mu1 needs n >= 2");
  if (c.n == 2) return std::numeric_limits<double>::infinity();
  const auto m = c.sigma.size();
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(m);
  const Eigen::MatrixXd s = c.laplacian - c.mu0 * ones * ones.transpose();
  // Columns 1.. of the Householder Q of sigma span Pi.
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(c.sigma);
  const Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd basis = q.rightCols(m - 1);
  const Eigen::MatrixXd restricted = basis.transpose() * s * basis;
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (restricted + restricted.transpose()));
  const double mu1 = eig.eigenvalues()(0);
  if (!(mu1 > 0.0)) {
    std::ostringstream msg;
    msg << "smallest eigenvalue on Pi is " << mu1;
    throw KinkError(ErrorCode::NonPositive, msg.str());
  }
  return mu1;
}

AsymptoticLaw asymptotic_law(const TodaConstants& c, double t) {
  if (!(t > 0.0)) throw KinkError(ErrorCode::NonPositiveTime, "asymptotic law needs t > 0");
  const TodaState s = parabolic_solution(c, t);
  AsymptoticLaw law;
  law.gaps = s.gaps();
  for (double p : s.p) law.velocities.push_back(p / c.mass);
  return law;
}

}  // namespace kinklab
