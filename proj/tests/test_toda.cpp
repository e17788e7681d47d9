#include <doctest.h>

#include <cmath>
#include <map>

#include "common.hpp"
#include "kinklab/error.hpp"
#include "kinklab/toda.hpp"

using namespace kinklab;

namespace {

TodaConstants phi4_toda(std::size_t n) { return toda_constants(2.0, 2.0 / 3.0, n); }

double distance_to_zcr(const TodaState& s, const TodaConstants& c) {
  const auto z = decompose_rz(s, c).z;
  const auto zcr = critical_profile_zcr(c);
  double d = 0.0;
  for (std::size_t k = 0; k < z.size(); ++k) d += std::pow(z[k] - zcr[k], 2);
  return std::sqrt(d);
}

}  // namespace

TEST_CASE("constants") {
  const auto c = toda_constants(phi4_profile(), 4);
  CHECK(c.amplitude == doctest::Approx(2.0 * std::sqrt(3.0)));
  CHECK(c.sigma(0) == 1.5);
  CHECK(c.sigma(1) == 2.0);
  CHECK(c.mu0 == doctest::Approx(1.0 / c.sigma.sum()));
  CHECK_THROWS_AS(toda_constants(-1.0, 1.0, 3), KinkError);
}

TEST_CASE("Laplacian of sigma is the all-ones vector") {
  for (std::size_t n = 2; n <= 10; ++n) {
    const auto c = phi4_toda(n);
    const Eigen::VectorXd d = c.laplacian * c.sigma;
    CHECK((d - Eigen::VectorXd::Ones(d.size())).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("projections") {
  for (std::size_t n = 2; n <= 8; ++n) {
    const auto c = phi4_toda(n);
    const Eigen::MatrixXd p1 = c.projection_one(), ps = c.projection_sigma();
    CHECK((p1 * p1 - p1).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((ps * ps - ps).cwiseAbs().maxCoeff() < 1e-12);
    // Both map into Pi = sigma-perp; P1 kills the ones vector.
    CHECK((c.sigma.transpose() * p1).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((p1 * Eigen::VectorXd::Ones(c.sigma.size())).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("parabolic solution satisfies the equations") {
  for (std::size_t n = 2; n <= 5; ++n) {
    const auto c = phi4_toda(n);
    for (double t : {1.0, 10.0, 100.0}) {
      const auto s = parabolic_solution(c, t);
      const auto d = toda_rhs(s, c);
      for (std::size_t k = 0; k < n; ++k) {
        // d/dt of a_k = (2k-n-1)/2 (2 log t) + const and of p_k = M (2k-n-1)/t.
        const double sign = 2.0 * static_cast<double>(k + 1) - static_cast<double>(n) - 1.0;
        CHECK(std::abs(d.da[k] - sign / t) <= 1e-12);
        CHECK(std::abs(d.dp[k] + c.mass * sign / (t * t)) <= 1e-12);
      }
      CHECK(std::abs(hamiltonian(s, c)) < 1e-12);
    }
  }
  CHECK_THROWS_AS(parabolic_solution(phi4_toda(2), 0.0), KinkError);
}

TEST_CASE("parabolic gap for n = 2 at t = 10") {
  // 2 log(kappa t) - log(M/2) = 2 log 20 + log 3.
  const auto s = parabolic_solution(phi4_toda(2), 10.0);
  CHECK(s.gaps()[0] == doctest::Approx(2 * std::log(20.0) + std::log(3.0)).epsilon(1e-14));
  CHECK(s.gaps()[0] == doctest::Approx(7.0900768358).epsilon(1e-10));
}

TEST_CASE("integrator transports the parabolic solution") {
  for (std::size_t n = 2; n <= 5; ++n) {
    const auto c = phi4_toda(n);
    const auto states = integrate(parabolic_solution(c, 10.0), c, 100.0);
    const auto exact = parabolic_solution(c, 100.0);
    for (std::size_t k = 0; k < n; ++k) {
      CHECK(std::abs(states.back().a[k] - exact.a[k]) < 1e-6);
      CHECK(std::abs(states.back().p[k] - exact.p[k]) < 1e-6);
    }
    for (const auto& s : states) CHECK(std::abs(hamiltonian(s, c)) < 1e-8);
  }
}

TEST_CASE("integration is reversible") {
  const auto c = phi4_toda(3);
  TodaState s = parabolic_solution(c, 10.0);
  s.p[0] += 0.01;
  const auto fwd = integrate(s, c, 50.0);
  const auto back = integrate(fwd.back(), c, 10.0);
  for (std::size_t k = 0; k < 3; ++k) {
    CHECK(std::abs(back.back().a[k] - s.a[k]) < 5e-9);
    CHECK(std::abs(back.back().p[k] - s.p[k]) < 5e-9);
  }
}

TEST_CASE("sampling and leapfrog") {
  const auto c = phi4_toda(3);
  TodaOptions o;
  o.sample_dt = 5.0;
  const auto states = integrate(parabolic_solution(c, 10.0), c, 30.0, o);
  REQUIRE(states.size() == 5);
  CHECK(states[2].t == doctest::Approx(20.0));
  o.method = TodaMethod::Leapfrog;
  o.leapfrog_step = 1e-2;
  const auto lf = integrate(parabolic_solution(c, 10.0), c, 30.0, o);
  REQUIRE(lf.size() == 5);
  const auto exact = parabolic_solution(c, 30.0);
  CHECK(std::abs(lf.back().a[0] - exact.a[0]) < 1e-4);
  for (const auto& s : lf) CHECK(std::abs(hamiltonian(s, c)) < 1e-5);
}

TEST_CASE("tolerance range") {
  const auto c = phi4_toda(2);
  TodaOptions o;
  o.tol = 1e-3;
  CHECK_THROWS_AS(integrate(parabolic_solution(c, 10.0), c, 20.0, o), KinkError);
}

TEST_CASE("r, z decomposition") {
  const auto c = phi4_toda(4);
  TodaState s = parabolic_solution(c, 10.0);
  s.a[1] += 0.3;
  const auto d = decompose_rz(s, c);
  const auto y = s.gaps();
  double dot = 0.0;
  for (std::size_t k = 0; k < 3; ++k) {
    CHECK(y[k] == doctest::Approx(d.r + d.z[k]));
    dot += c.sigma(static_cast<Eigen::Index>(k)) * d.z[k];
  }
  CHECK(std::abs(dot) < 1e-12);
}

TEST_CASE("critical profile") {
  for (double z : critical_profile_zcr(phi4_toda(3))) CHECK(std::abs(z) < 1e-12);
  CHECK(critical_profile_zcr(phi4_toda(2)) == std::vector<double>{0.0});
  const auto c = phi4_toda(4);
  const auto z = critical_profile_zcr(c);
  CHECK(z[0] == doctest::Approx(0.115073).epsilon(1e-5));
  CHECK(z[1] == doctest::Approx(-0.172609).epsilon(1e-5));
  // Stationarity on Pi: e^{-z} is parallel to sigma.
  for (std::size_t n = 3; n <= 8; ++n) {
    const auto cn = phi4_toda(n);
    const auto zn = critical_profile_zcr(cn);
    const double ratio = std::exp(-zn[0]) / cn.sigma(0);
    double dot = 0.0;
    for (std::size_t k = 0; k < zn.size(); ++k) {
      CHECK(std::exp(-zn[k]) / cn.sigma(static_cast<Eigen::Index>(k)) == doctest::Approx(ratio));
      dot += cn.sigma(static_cast<Eigen::Index>(k)) * zn[k];
    }
    CHECK(std::abs(dot) < 1e-12);
  }
}

TEST_CASE("coercivity constants") {
  CHECK(std::isinf(coercivity_constants(phi4_toda(2))));
  CHECK(coercivity_constants(phi4_toda(3)) == doctest::Approx(3.0));
  CHECK(coercivity_constants(phi4_toda(4)) == doctest::Approx(2.0));
  CHECK(coercivity_constants(phi4_toda(5)) == doctest::Approx((5.0 - std::sqrt(5.0)) / 2.0));
  CHECK(coercivity_constants(phi4_toda(6)) == doctest::Approx(1.0));
  for (std::size_t n = 3; n <= 10; ++n) CHECK(coercivity_constants(phi4_toda(n)) > 0.0);
}

TEST_CASE("asymptotic law matches the parabolic solution") {
  const auto c = phi4_toda(3);
  const auto law = asymptotic_law(c, 50.0);
  const auto s = parabolic_solution(c, 50.0);
  CHECK(law.gaps == s.gaps());
  CHECK(law.velocities[0] == doctest::Approx(-2.0 / 50.0));
  CHECK(law.velocities[1] == 0.0);
}

// Parabolic motions are unstable forward in time, so clusters are obtained
// backward: perturb the shape at a late time, integrate back, then forward.
TEST_CASE("clusters approach the critical profile") {
  // Earliest times before the backward leg runs into a collision; there the
  // shape is O(1) away from z_cr.
  const std::map<std::size_t, double> t_early = {{3, 1000.0}, {4, 1300.0}, {5, 2300.0}};
  for (const auto& [n, t0] : t_early) {
    const auto c = phi4_toda(n);
    std::vector<double> dz(n - 1, 0.0);
    dz.front() = 0.02;
    dz.back() = -0.01;
    const auto start = cluster_state(c, 1e4, dz, t0);
    TodaOptions o;
    o.sample_dt = 200.0;
    const auto states = integrate(start, c, 1e4, o);
    double prev = distance_to_zcr(states.front(), c);
    CHECK(prev > 0.5);
    for (const auto& s : states) {
      const double d = distance_to_zcr(s, c);
      CHECK(d <= prev + 1e-9);
      prev = d;
    }
    CHECK(prev < 0.05);
  }
}
