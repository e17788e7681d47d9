#include <doctest.h>

#include <cmath>
#include <numbers>

#include "kinklab/error.hpp"
#include "kinklab/potential.hpp"
#include "common.hpp"

using namespace kinklab;

namespace {

// Closed forms: phi4 U = (1 - phi^2)^2 / 8 has H = tanh(x/2); sine-Gordon
// U = (1 + cos(pi phi)) / pi^2 has H = (4/pi) atan(e^x) - 1.
double phi4_kink(double x) { return std::tanh(x / 2); }
double sg_kink(double x) { return 4.0 / std::numbers::pi * std::atan(std::exp(x)) - 1.0; }

const KinkProfile& phi4() { return phi4_profile(); }

}  // namespace

TEST_CASE("phi4 profile matches tanh(x/2)") {
  double worst = 0.0;
  for (double x = -30.0; x <= 30.0; x += 0.173) {
    worst = std::max(worst, std::abs(phi4().value(x) - phi4_kink(x)));
  }
  CHECK(worst < 1e-9);
  // Tails beyond the sampled grid use the fitted exponential.
  CHECK(1.0 - phi4().value(45.0) == doctest::Approx(2.0 * std::exp(-45.0)).epsilon(1e-5));
}

TEST_CASE("sine-Gordon profile matches the arctan kink") {
  const auto p = compute_kink_profile(sine_gordon_potential());
  double worst = 0.0;
  for (double x = -30.0; x <= 30.0; x += 0.173) worst = std::max(worst, std::abs(p.value(x) - sg_kink(x)));
  CHECK(worst < 1e-9);
  CHECK(p.kappa == doctest::Approx(4.0 / std::numbers::pi).epsilon(1e-7));
  CHECK(std::abs(p.mass - 8.0 / (std::numbers::pi * std::numbers::pi)) < 1e-8);
}

TEST_CASE("phi4 constants") {
  CHECK(std::abs(phi4().kappa - 2.0) < 1e-6);
  CHECK(std::abs(phi4().mass - 2.0 / 3.0) < 1e-8);
  CHECK(phi4().bogomolny_residual < 1e-9);
  // The left tail agrees with the right one by oddness.
  const auto left = fit_tail_constant(phi4(), TailSide::Left);
  CHECK(left.kappa == doctest::Approx(phi4().kappa).epsilon(1e-9));
}

TEST_CASE("mass quadratures agree") {
  const auto q = mass_quadratures(phi4());
  CHECK(q.spread() < 1e-8);
  CHECK(q.field_integral == doctest::Approx(2.0 / 3.0).epsilon(1e-10));
}

TEST_CASE("reduced force constant equals -2 kappa") {
  CHECK(reduced_force_constant(phi4()) == doctest::Approx(-4.0).epsilon(1e-5));
}

TEST_CASE("derivatives near the vacuum keep relative accuracy") {
  const auto u = phi4_potential();
  for (double w : {1e-3, 1e-6, 1e-9}) {
    // U(1 - w) = w^2 (2 - w)^2 / 8
    const double exact = w * w * (2.0 - w) * (2.0 - w) / 8.0;
    CHECK(u.u(1.0 - w) == doctest::Approx(exact).epsilon(1e-12));
    CHECK(u.u(-1.0 + w) == doctest::Approx(exact).epsilon(1e-12));
  }
  CHECK(u.u2(1.0) == doctest::Approx(1.0));
  CHECK(u.u1(0.3) == doctest::Approx(-0.5 * 0.3 * (1 - 0.09)));
}

TEST_CASE("custom potentials are validated") {
  // phi4 written out as a coefficient table is accepted and agrees.
  const PotentialModel custom("custom", {0.125, -0.25, 0.125}, {});
  CHECK(custom.u(0.4) == doctest::Approx(phi4_potential().u(0.4)));
  // Wrong curvature at the vacua.
  CHECK_THROWS_AS(PotentialModel("bad", {0.25, -0.5, 0.25}, {}), KinkError);
  try {
    PotentialModel("bad", {0.25, -0.5, 0.25}, {});
  } catch (const KinkError& e) {
    CHECK(e.code() == ErrorCode::InvalidPotential);
  }
  // phi^2 (1 - phi^2)^2 / 8 vanishes at phi = 0.
  try {
    PotentialModel("zero", {0.0, 0.125, -0.25, 0.125}, {});
    FAIL("accepted a potential vanishing inside");
  } catch (const KinkError& e) {
    CHECK(e.code() == ErrorCode::PotentialVanishesInside);
  }
}

TEST_CASE("registry") {
  CHECK(registered_potentials().size() >= 2);
  CHECK(make_potential("phi4").name() == "phi4");
  try {
    make_potential("nope");
    FAIL("unknown name accepted");
  } catch (const KinkError& e) {
    CHECK(e.code() == ErrorCode::InvalidPotential);
    CHECK(std::string(e.what()).find("sine-gordon") != std::string::npos);
  }
}

TEST_CASE("profile construction rejects bad steps") {
  CHECK_THROWS_AS(compute_kink_profile(phi4_potential(), 40.0, 0.0), KinkError);
}
