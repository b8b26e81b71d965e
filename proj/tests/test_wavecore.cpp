#include <cmath>

#include "doctest.h"
#include "ris/errors.hpp"
#include "ris/wavecore.hpp"

using namespace ris;

TEST_CASE("environment derived quantities") {
  auto env = WaveEnvironment::make(28e9, 1.0, 377.0, 3e8);
  CHECK(env.lambda == doctest::Approx(3e8 / 28e9).epsilon(1e-15));
  CHECK(env.k == doctest::Approx(2 * kPi / env.lambda).epsilon(1e-15));
  // P0 = |E|^2 / (2 eta0)
  CHECK(env.e_amp2() == doctest::Approx(2 * 377.0).epsilon(1e-14));
  CHECK(1.0 / std::sqrt(env.mu0() * env.eps0()) == doctest::Approx(3e8).epsilon(1e-14));
  CHECK_THROWS_AS(WaveEnvironment::make(0.0), Error);
  CHECK_THROWS_AS(WaveEnvironment::make(28e9, -1.0), Error);
}

TEST_CASE("wavevector directions") {
  auto env = WaveEnvironment::make(28e9, 1.0, 377.0, 3e8);
  const double k = env.k;
  auto a = wavevector(env, 0.0, Direction::Incident);
  CHECK(a[0] == 0.0);
  CHECK(std::abs(a[1]) < 1e-12);
  CHECK(a[2] == doctest::Approx(-k));
  auto b = wavevector(env, 0.0, Direction::Reflected);
  CHECK(b[2] == doctest::Approx(k));
  auto c = wavevector(env, deg2rad(30), Direction::Reflected);
  CHECK(c[1] == doctest::Approx(k / 2).epsilon(1e-14));
  CHECK(c[2] == doctest::Approx(k * std::sqrt(3.0) / 2).epsilon(1e-14));
  for (double t : {0.1, 0.7, 1.3}) {
    auto v = wavevector(env, t, Direction::Incident);
    CHECK(std::hypot(v[0], v[1], v[2]) == doctest::Approx(k).epsilon(1e-14));
  }
}

TEST_CASE("fraunhofer distance") {
  auto env = WaveEnvironment::make(28e9, 1.0, 377.0, 3e8);
  auto g = ScenarioGeometry::make(0, 0, 0.5, 0.25, env.lambda / 32, 100, 100);
  // snapping moves ly by less than dy/2
  CHECK(fraunhofer_distance(g, env) == doctest::Approx(233.6).epsilon(2e-3));
  auto z = g;
  z.lx = z.ly = 0;
  CHECK(fraunhofer_distance(z, env) == 0.0);
  z.ly = env.lambda;
  CHECK(fraunhofer_distance(z, env) == doctest::Approx(8 * env.lambda).epsilon(1e-14));
}

TEST_CASE("geometry sampling") {
  auto sc = reference_scenario(30);
  const auto& g = sc.geom;
  CHECK(g.n == 1493);
  CHECK(g.n * g.dy == doctest::Approx(2 * g.ly).epsilon(1e-14));
  auto y = g.samples();
  REQUIRE(y.size() == 1493u);
  CHECK(std::abs(y[746]) < 1e-15);
  CHECK(y.front() == doctest::Approx(-y.back()).epsilon(1e-14));
  CHECK(y[1] - y[0] == doctest::Approx(g.dy).epsilon(1e-12));
  CHECK_THROWS_AS(ScenarioGeometry::make(0, deg2rad(95), 0.5, 0.25, 1e-3, 1, 1), Error);
  CHECK_THROWS_AS(ScenarioGeometry::make(0, 0.5, 0.5, 0.25, 0.0, 1, 1), Error);
}
