#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "common.hpp"
#include "kinklab/error.hpp"
#include "kinklab/forge.hpp"

using namespace kinklab;

TEST_CASE("search box defaults") {
  const auto s = ShootSpec::with_defaults({12.0}, 12.0, 40.0);
  CHECK(s.L1 == doctest::Approx(10.0));
  CHECK(s.L2 == doctest::Approx(12.0 + 2 * std::log(40.0) + 6.0));
  CHECK(s.rho_exit == doctest::Approx(4.0 * std::exp(-10.0)));
  CHECK_NOTHROW(s.validate());
  try {
    ShootSpec::with_defaults({4.0}, 4.0, 40.0).validate();
    FAIL("accepted L below L0");
  } catch (const KinkError& e) {
    CHECK(e.code() == ErrorCode::InvalidArgument);
  }
  CHECK_NOTHROW(ShootSpec::with_defaults({4.0}, 4.0, 40.0, 3.0).validate());
}

TEST_CASE("seed velocities fix the energy at nM") {
  const auto& p = phi4_profile();
  for (const Positions& a : {Positions{-10.0, 10.0}, Positions{-14.0, 0.0, 14.0}}) {
    const auto v = seed_velocities(a, p);
    const auto s = seeded_state(a, v, p, evolution_grid(a, 1.0, 0.02));
    const double e = energy(s, *p.potential).total;
    CHECK(e == doctest::Approx(static_cast<double>(a.size()) * p.mass).epsilon(1e-9));
    // Symmetric, outward: v_k = (2k-n-1)/2 lambda sqrt(rho).
    CHECK(v.front() == doctest::Approx(-v.back()));
    CHECK(v.front() < 0.0);
  }
  // lambda^2 -> 4 kappa^2 mu0 / M for n = 2, mu0 = 2.
  const Positions a{-10.0, 10.0};
  const auto v = seed_velocities(a, p);
  const double lambda = (v[1] - v[0]) / std::sqrt(a.rho());
  CHECK(lambda * lambda == doctest::Approx(4 * p.kappa * p.kappa * 2.0 / p.mass).epsilon(1e-4));
}

TEST_CASE("energy norm distance") {
  const auto& p = phi4_profile();
  const Positions a{-6.0, 6.0};
  const auto s = multikink_configuration(p, a, evolution_grid(a, 1.0, 0.02));
  CHECK(energy_norm_distance(s, s) == 0.0);
  auto t = s;
  for (auto& v : t.phidot) v += 1e-3;
  CHECK(energy_norm_distance(s, t) > 0.0);
}

TEST_CASE("worker count honours KINKLAB_THREADS") {
  setenv("KINKLAB_THREADS", "3", 1);
  CHECK(worker_threads() == 3);
  unsetenv("KINKLAB_THREADS");
  CHECK(worker_threads() >= 1);
}

TEST_CASE("constructing a 2-cluster") {
  const auto& p = phi4_profile();
  const auto built = construct_cluster(Positions{-6.0, 6.0}, 12.0, 40.0, p);
  const auto& cert = built.certificate;
  for (const auto& c : cert.checks) {
    INFO(c.name << " = " << c.value);
    CHECK(c.pass);
  }
  CHECK(cert.search.method == "illinois");
  CHECK(std::abs(cert.fit0.a[0] + 6.0) < 1e-3);
  CHECK(std::abs(cert.fit0.a[1] - 6.0) < 1e-3);
  // ||g_0||_E^2 is of order e^{-L}.
  CHECK(cert.g0_energy / std::exp(-12.0) == doctest::Approx(16.0).epsilon(0.05));
  // Gaps grow forward along the cluster.
  const auto y = cert.forward.gaps();
  CHECK(y.back()[0] > y.front()[0]);
}
