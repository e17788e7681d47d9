#include <doctest.h>

#include <cmath>

#include "common.hpp"
#include "kinklab/error.hpp"
#include "kinklab/evolution.hpp"

using namespace kinklab;

namespace {

FieldSnapshot vacuum_with_bump(const Grid& g, double amplitude) {
  FieldSnapshot s{g, std::vector<double>(g.size, 1.0), std::vector<double>(g.size, 0.0), {1, 1}};
  for (std::size_t i = 0; i < g.size; ++i) {
    const double x = g.x(i);
    if (std::abs(x) < 1.0) s.phi[i] += amplitude * std::pow(1.0 - x * x, 4);
  }
  return s;
}

// -H(gamma x) moving with velocity v.
FieldSnapshot boosted(const Grid& g, double v) {
  const auto& p = phi4_profile();
  const double gamma = 1.0 / std::sqrt(1.0 - v * v);
  FieldSnapshot s{g, {}, {}, {1, -1}};
  for (std::size_t i = 0; i < g.size; ++i) {
    const auto e = p.eval(gamma * g.x(i));
    s.phi.push_back(-e.h);
    s.phidot.push_back(gamma * v * e.dh);
  }
  return s;
}

double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

EvolutionConfig run_to(double t_end, double dt) {
  EvolutionConfig c;
  c.dt = dt;
  c.t_end = t_end;
  c.snapshot_stride = 1u << 30;
  return c;
}

}  // namespace

TEST_CASE("static kink stays put") {
  const auto& p = phi4_profile();
  const auto s0 = multikink_configuration(p, Positions{0.0}, evolution_grid(Positions{0.0}, 10.0, 0.05));
  const auto traj = evolve(s0, *p.potential, run_to(10.0, 0.025));
  CHECK(max_diff(traj.snapshots.back().phi, s0.phi) < 1e-6);
  CHECK(traj.times.back() == doctest::Approx(10.0));
}

TEST_CASE("finite propagation speed") {
  const Grid g = Grid::covering(-30.0, 30.0, 0.02);
  const auto pot = phi4_potential();
  const auto a = evolve(vacuum_with_bump(g, 0.0), pot, run_to(8.0, 0.01)).snapshots.back();
  const auto b = evolve(vacuum_with_bump(g, 1e-3), pot, run_to(8.0, 0.01)).snapshots.back();
  double outside = 0.0, inside = 0.0;
  for (std::size_t i = 0; i < g.size; ++i) {
    const double d = std::abs(a.phi[i] - b.phi[i]);
    if (std::abs(g.x(i)) > 1.0 + 8.0 + 1.0) outside = std::max(outside, d);
    else inside = std::max(inside, d);
  }
  CHECK(outside <= 1e-12);
  CHECK(inside > 1e-5);
}

TEST_CASE("second-order convergence to the travelling kink") {
  const auto& p = phi4_profile();
  const double v = 0.3, t = 4.0, gamma = 1.0 / std::sqrt(1.0 - v * v);
  std::vector<double> err;
  for (double dx : {0.1, 0.05}) {
    const Grid g = Grid::covering(-30.0, 30.0, dx);
    auto cfg = run_to(t, dx / 2);
    cfg.guard_margin = 5.0;
    const auto f = evolve(boosted(g, v), *p.potential, cfg).snapshots.back();
    std::vector<double> d(g.size);
    for (std::size_t i = 0; i < g.size; ++i) d[i] = std::pow(f.phi[i] + p.value(gamma * (g.x(i) - v * t)), 2);
    err.push_back(std::sqrt(trapezoid(d, dx)));
  }
  CHECK(std::log2(err[0] / err[1]) > 1.8);
}

TEST_CASE("energy is conserved by a moving kink") {
  const Grid g = Grid::covering(-60.0, 60.0, 0.05);
  auto cfg = run_to(40.0, 0.025);
  cfg.snapshot_stride = 50;
  cfg.store_snapshots = false;
  const auto traj = evolve(boosted(g, 0.2), *phi4_profile().potential, cfg);
  const double e0 = traj.energies.front().total;
  CHECK(e0 == doctest::Approx(phi4_profile().mass / std::sqrt(1 - 0.04)).epsilon(1e-6));
  for (const auto& e : traj.energies) CHECK(std::abs(e.total - e0) < 1e-8);
}

TEST_CASE("time reversal returns to the initial data") {
  const auto& p = phi4_profile();
  const Positions a{-5.0, 5.0};
  const auto s0 = multikink_configuration(p, a, evolution_grid(a, 5.0, 0.05));
  const auto fwd = evolve(s0, *p.potential, run_to(5.0, 0.025)).snapshots.back();
  const auto back = evolve(time_reversed(fwd), *p.potential, run_to(5.0, 0.025)).snapshots.back();
  CHECK(max_diff(back.phi, s0.phi) < 1e-10);
  CHECK(max_diff(time_reversed(back).phidot, s0.phidot) < 1e-10);
}

TEST_CASE("backward runs equal reversed forward runs") {
  const auto& p = phi4_profile();
  const Positions a{-5.0, 5.0};
  const auto s0 = multikink_configuration(p, a, evolution_grid(a, 3.0, 0.05));
  auto cfg = run_to(-3.0, 0.025);
  const auto back = evolve(s0, *p.potential, cfg);
  CHECK(back.times.back() == doctest::Approx(-3.0));
  const auto fwd = evolve(time_reversed(s0), *p.potential, run_to(3.0, 0.025)).snapshots.back();
  CHECK(max_diff(back.snapshots.back().phi, fwd.phi) < 1e-12);
}

TEST_CASE("a kink-antikink pair at rest attracts") {
  const auto& p = phi4_profile();
  const Positions a{-6.0, 6.0};
  const auto s0 = multikink_configuration(p, a, evolution_grid(a, 20.0, 0.05));
  const auto f = evolve(s0, *p.potential, run_to(20.0, 0.025)).snapshots.back();
  const auto z = zero_crossings(f);
  REQUIRE(z.size() == 2);
  CHECK(z[1] - z[0] < 12.0 - 1e-3);
}

TEST_CASE("windowed energies add up") {
  const auto& p = phi4_profile();
  const Positions a{-6.0, 6.0};
  auto s = multikink_configuration(p, a, Grid::covering(-40.0, 40.0, 0.05));
  for (std::size_t i = 0; i < s.grid.size; ++i) s.phidot[i] = 0.1 * std::exp(-s.grid.x(i) * s.grid.x(i));
  const double mid = s.grid.x(s.grid.size / 2 + 7);
  const auto whole = energy(s, *p.potential);
  const auto left = energy(s, *p.potential, Window{s.grid.x_min(), mid});
  const auto right = energy(s, *p.potential, Window{mid, s.grid.x_max()});
  CHECK(left.total + right.total == doctest::Approx(whole.total).epsilon(1e-13));
  CHECK(left.kinetic + right.kinetic == doctest::Approx(whole.kinetic).epsilon(1e-13));
}

TEST_CASE("invalid steps are rejected") {
  const auto& p = phi4_profile();
  const auto s0 = multikink_configuration(p, Positions{0.0}, evolution_grid(Positions{0.0}, 1.0, 0.05));
  try {
    evolve(s0, *p.potential, run_to(1.0, 0.045));
    FAIL("accepted dt/dx = 0.9");
  } catch (const KinkError& e) {
    CHECK(e.code() == ErrorCode::CflViolation);
  }
  CHECK_THROWS_AS(evolve(s0, *p.potential, run_to(1.0, 0.0)), KinkError);
  // A kink core too close to the clamped ends.
  const auto narrow = multikink_configuration(p, Positions{0.0}, Grid::covering(-21.0, 21.0, 0.05));
  try {
    evolve(narrow, *p.potential, run_to(30.0, 0.025));
    FAIL("accepted a run that reaches the boundary");
  } catch (const KinkError& e) {
    CHECK(e.code() == ErrorCode::BoundaryContamination);
  }
}

TEST_CASE("observer can stop a run") {
  const auto& p = phi4_profile();
  const auto s0 = multikink_configuration(p, Positions{0.0}, evolution_grid(Positions{0.0}, 5.0, 0.05));
  auto cfg = run_to(5.0, 0.025);
  cfg.snapshot_stride = 10;
  int calls = 0;
  const auto traj = evolve(s0, *p.potential, cfg, [&](double, const FieldSnapshot&) { return ++calls < 3; });
  CHECK(calls == 3);
  CHECK(traj.times.back() < 5.0);
}
