#include <doctest.h>

#include <cmath>

#include "common.hpp"
#include "kinklab/error.hpp"
#include "kinklab/evolution.hpp"
#include "kinklab/modulation.hpp"

using namespace kinklab;

namespace {

FieldSnapshot configuration(const Positions& a, double dx = 0.02) {
  return multikink_configuration(phi4_profile(), a, static_grid(a, dx));
}

}  // namespace

TEST_CASE("cutoff is a partition of unity") {
  const Cutoff chi;
  CHECK(chi(0.0) == 1.0);
  CHECK(chi(1.0 / 3.0) == 1.0);
  CHECK(chi(2.0 / 3.0) == 0.0);
  CHECK(chi(0.5) == doctest::Approx(0.5));
  const Positions a{-7.0, 2.0, 12.0};
  const Grid g = static_grid(a, 0.05);
  std::vector<double> sum(g.size, 0.0);
  for (std::size_t k = 0; k < 3; ++k) {
    const auto part = cutoff_partition(chi, a, k, g);
    for (std::size_t i = 0; i < g.size; ++i) sum[i] += part[i];
  }
  for (double s : sum) CHECK(s == doctest::Approx(1.0));
}

TEST_CASE("an exact configuration is fitted exactly") {
  const Positions a{-6.0, 6.5};
  const auto fit = fit_modulation(configuration(a), phi4_profile(), Positions{-5.8, 6.3});
  CHECK(std::abs(fit.a[0] - a[0]) < 1e-10);
  CHECK(std::abs(fit.a[1] - a[1]) < 1e-10);
  CHECK(fit.ortho_residual < 1e-11);
  // Only the difference between stencil and exact derivatives remains.
  CHECK(fit.g_energy < 1e-15);
}

TEST_CASE("fit is translation equivariant") {
  const auto& p = phi4_profile();
  const Positions a{-6.0, 6.5};
  auto s = configuration(Positions{-5.3, 6.4});
  // Add a localized bump so that g is not zero.
  for (std::size_t i = 0; i < s.grid.size; ++i) s.phi[i] += 1e-3 * std::exp(-std::pow(s.grid.x(i) - 1.0, 2));
  auto shifted = s;
  const double shift = 50 * s.grid.dx;
  shifted.grid.x0 += shift;
  const auto f0 = fit_modulation(s, p, Positions{-5.3, 6.4});
  const auto f1 = fit_modulation(shifted, p, Positions{-5.3 + shift, 6.4 + shift});
  CHECK(std::abs(f1.a[0] - f0.a[0] - shift) < 1e-9);
  CHECK(std::abs(f1.a[1] - f0.a[1] - shift) < 1e-9);
  CHECK(f1.g_energy == doctest::Approx(f0.g_energy).epsilon(1e-8));
  (void)a;
}

TEST_CASE("a small displacement is read back to first order") {
  const auto& p = phi4_profile();
  const Positions a{-6.0, 6.0};
  auto s = configuration(a);
  // phi = H(a) + eps d/da_1 H(a) = H(a) - eps (-1) H'(x - a_1) = H(a_1 + eps, a_2) + O(eps^2).
  const double eps = 1e-6;
  for (std::size_t i = 0; i < s.grid.size; ++i) s.phi[i] += eps * p.slope(s.grid.x(i) - a[0]);
  const auto fit = fit_modulation(s, p, a);
  CHECK(std::abs(std::abs(fit.a[0] - a[0]) - eps) < 1e-10);
  CHECK(std::abs(fit.a[1] - a[1]) < 1e-10);
}

TEST_CASE("velocity of rigidly translated kinks") {
  const auto& p = phi4_profile();
  const Positions a{-6.0, 6.0};
  const auto s = configuration(a);
  const auto fit = fit_modulation(s, p, a);
  // d/dt H(a(t)) = sum_k orientation(k) H'(x - a_k) (-a_k').
  const std::vector<double> c{0.013, -0.021};
  std::vector<double> phidot(s.grid.size, 0.0);
  for (std::size_t i = 0; i < s.grid.size; ++i) {
    for (std::size_t k = 0; k < 2; ++k) phidot[i] -= orientation(k) * c[k] * p.slope(s.grid.x(i) - a[k]);
  }
  const auto v = modulation_velocity(fit, p, phidot);
  CHECK(v[0] == doctest::Approx(c[0]).epsilon(1e-8));
  CHECK(v[1] == doctest::Approx(c[1]).epsilon(1e-8));
}

TEST_CASE("gap collapse is reported") {
  try {
    fit_modulation(configuration(Positions{-0.5, 0.5}), phi4_profile(), Positions{-0.5, 0.5});
    FAIL("fitted overlapping kinks");
  } catch (const KinkError& e) {
    CHECK(e.code() == ErrorCode::GapCollapse);
  }
}

TEST_CASE("tracking an attracting pair") {
  const auto& p = phi4_profile();
  const Positions a{-5.0, 5.0};
  const auto s0 = multikink_configuration(p, a, evolution_grid(a, 20.0, 0.04));
  EvolutionConfig cfg;
  cfg.dt = 0.02;
  cfg.t_end = 20.0;
  cfg.snapshot_stride = 25;
  const auto traj = evolve(s0, *p.potential, cfg);
  const auto series = track(traj, p, *p.potential, 2);
  REQUIRE_FALSE(series.lost);
  REQUIRE(series.size() == traj.snapshots.size());
  const auto y = series.gaps();
  CHECK(y.back()[0] < y.front()[0]);
  for (const auto& r : series.records) {
    CHECK(r.ortho_residual < 1e-9);
    CHECK(r.energy == doctest::Approx(series.records.front().energy).epsilon(1e-9));
  }
  // p_k close to M a_k' and Newton's law with the interaction force.
  for (const auto& q : newton_law_residuals(series, p)) {
    CHECK(q.r1 < 5.0);
    CHECK(q.r2 < 10.0);
  }
}

TEST_CASE("tracking is lost when the kinks collide") {
  const auto& p = phi4_profile();
  const Positions a{-3.0, 3.0};
  const auto s0 = multikink_configuration(p, a, evolution_grid(a, 40.0, 0.04));
  EvolutionConfig cfg;
  cfg.dt = 0.02;
  cfg.t_end = 40.0;
  cfg.snapshot_stride = 25;
  cfg.store_snapshots = false;
  ModulationTracker tracker(p, *p.potential, a);
  evolve(s0, *p.potential, cfg, [&](double t, const FieldSnapshot& s) { return tracker.observe(t, s); });
  CHECK(tracker.series().lost);
  CHECK_FALSE(tracker.series().lost_reason.empty());
}

TEST_CASE("cluster grouping by gap threshold") {
  CHECK(cluster_grouping(Positions{0.0, 5.0, 30.0, 34.0, 100.0}, 10.0) ==
        std::vector<std::size_t>{0, 2, 4, 5});
  CHECK(cluster_grouping(Positions{0.0, 5.0, 9.0}, 10.0) == std::vector<std::size_t>{0, 3});
  CHECK(cluster_grouping(Positions{0.0, 50.0}, 10.0) == std::vector<std::size_t>{0, 1, 2});
  CHECK(cluster_grouping(Positions{1.0}, 10.0) == std::vector<std::size_t>{0, 1});
}
