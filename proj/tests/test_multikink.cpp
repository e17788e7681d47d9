#include <doctest.h>

#include <cmath>

#include "common.hpp"
#include "kinklab/error.hpp"
#include "kinklab/multikink.hpp"

using namespace kinklab;

TEST_CASE("positions: gaps, rho and from_gaps") {
  const Positions a{-3.0, 1.0, 7.5};
  CHECK(a.gaps() == std::vector<double>{4.0, 6.5});
  CHECK(a.min_gap() == 4.0);
  CHECK(a.rho() == doctest::Approx(std::exp(-4.0) + std::exp(-6.5)));
  const auto b = Positions::from_gaps(a.gaps(), a.mean());
  for (std::size_t k = 0; k < 3; ++k) CHECK(b[k] == doctest::Approx(a[k]));
  CHECK(std::isinf(Positions{1.0}.min_gap()));
}

TEST_CASE("orientation and sector") {
  CHECK(orientation(0) == -1.0);
  CHECK(orientation(1) == 1.0);
  CHECK(multikink_sector(1) == Sector{1, -1});
  CHECK(multikink_sector(2) == Sector{1, 1});
}

TEST_CASE("configuration: superposition and zero crossings") {
  const auto& p = phi4_profile();
  const Positions a{-6.0, 6.0};
  const auto s = multikink_configuration(p, a, static_grid(a, 0.01));
  // 1 - (H(x+6) + 1) + (H(x-6) + 1)
  for (std::size_t i = 0; i < s.grid.size; i += 997) {
    const double x = s.grid.x(i);
    CHECK(std::abs(s.phi[i] - (1.0 - std::tanh((x + 6) / 2) + std::tanh((x - 6) / 2))) < 1e-9);
  }
  const auto z = zero_crossings(s);
  REQUIRE(z.size() == 2);
  CHECK(std::abs(z[0] + 6.0) < 1e-4);
  CHECK(std::abs(z[1] - 6.0) < 1e-4);
  CHECK_THROWS_AS(multikink_configuration(p, a, Grid::covering(-10, 10, 0.1)), KinkError);
}

TEST_CASE("interaction energy follows 2M - 2 kappa^2 e^-y") {
  const auto& p = phi4_profile();
  for (double y : {8.0, 10.0, 12.0, 14.0}) {
    const double ep = multikink_potential_energy(p, Positions{-y / 2, y / 2});
    const double law = approx_interaction_energy(p.kappa, p.mass, Positions{-y / 2, y / 2});
    CHECK(std::abs(ep - law) <= 30.0 * y * std::exp(-2 * y));
  }
}

TEST_CASE("energy is translation invariant") {
  const auto& p = phi4_profile();
  const double e0 = multikink_potential_energy(p, Positions{-5.0, 4.0, 11.0});
  const double e1 = multikink_potential_energy(p, Positions{-4.63, 4.37, 11.37});
  CHECK(std::abs(e0 - e1) < 1e-11);
}

TEST_CASE("force is minus the gradient of the energy") {
  const auto& p = phi4_profile();
  const Positions a{-4.0, 3.0, 10.0};
  const double h = 1e-3;
  for (std::size_t k = 0; k < a.size(); ++k) {
    Positions up = a, down = a;
    up[k] += h;
    down[k] -= h;
    const double fd =
        -(multikink_potential_energy(p, up) - multikink_potential_energy(p, down)) / (2 * h);
    CHECK(interaction_force(p, a, k) == doctest::Approx(fd).epsilon(1e-5));
  }
}

TEST_CASE("pair forces are attractive, opposite and close to the law") {
  const auto& p = phi4_profile();
  const Positions a{-6.0, 6.0};
  const double f1 = interaction_force(p, a, 0), f2 = interaction_force(p, a, 1);
  CHECK(f1 > 0.0);
  CHECK(f1 == doctest::Approx(-f2).epsilon(1e-10));
  CHECK(std::abs(f1 - approx_force(p.kappa, a, 0)) <= 50.0 * 12.0 * std::exp(-24.0));
}

TEST_CASE("static residual vanishes for a single kink") {
  CHECK(static_residual_norm(phi4_profile(), Positions{0.3}) < 1e-8);
  CHECK(static_residual_norm(phi4_profile(), Positions{-6.0, 6.0}) > 1e-4);
}

TEST_CASE("coercivity on the complement of the zero modes") {
  const auto& p = phi4_profile();
  CHECK(coercivity_eigencheck(p, Positions{-6.0, 6.0}) > 0.05);
  // Unprojected, the two near-zero modes show up first; phi4's internal mode
  // sqrt(3)/2 squared = 3/4 comes next.
  const auto low = linearized_spectrum(p, Positions{-6.0, 6.0}, 4);
  CHECK(std::abs(low[0]) < 1e-3);
  CHECK(std::abs(low[1]) < 1e-3);
  CHECK(low[2] == doctest::Approx(0.75).epsilon(1e-2));
}

TEST_CASE("delta distance of an exact configuration is rho") {
  const auto& p = phi4_profile();
  const Positions a{-6.0, 6.0};
  const auto s = multikink_configuration(p, a, static_grid(a, 0.02));
  const auto d = delta_distance(s, p, 2);
  CHECK(d.delta >= a.rho() - 1e-10);
  CHECK(d.delta <= a.rho() + 1e-9);
  FieldSnapshot vac = s;
  std::fill(vac.phi.begin(), vac.phi.end(), 1.0);
  CHECK_THROWS_AS(delta_distance(vac, p, 2), KinkError);
}
