#include <cmath>
#include <random>

#include "doctest.h"
#include "ris/errors.hpp"
#include "ris/power_analysis.hpp"
#include "ris/sheet_model.hpp"

using namespace ris;

namespace {

WaveEnvironment env28() { return WaveEnvironment::make(28e9, 1, 377.0, 3e8); }

// Aperture of exactly `periods` periods of the theta_i = 0 design, M samples per period.
ScenarioGeometry periods_geometry(const WaveEnvironment& env, double tr, double periods, int m = 64) {
  double p = design_period(0, tr, env.lambda);
  return ScenarioGeometry::make(0, tr, 0.5, periods * p / 2, p / m, 100, 100);
}

}  // namespace

TEST_CASE("local flow, reflection form") {
  auto env = env28();
  CHECK(local_flow_gamma(1.0, 0.4, 0.4, env).s == doctest::Approx(0.0));
  CHECK(local_flow_gamma(0.0, 0.4, 0.9, env).s == doctest::Approx(-std::cos(0.4)));
  const double tr = deg2rad(50);
  for (double psi : {0.0, 1.0, 2.5, kPi}) {
    auto f = local_flow_gamma(std::polar(1.0, psi), 0, tr, env);
    CHECK(f.s == doctest::Approx((std::cos(tr) - 1) * (1 + std::cos(psi))));
    CHECK(f.s <= 1e-15);
    CHECK(f.p == doctest::Approx(f.s * env.p0));
  }
}

TEST_CASE("local flow, impedance form matches reflection form") {
  auto env = env28();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ang(0, deg2rad(85)), zr(-300, 900), zi(-1500, 1500);
  for (int t = 0; t < 2000; ++t) {
    double ti = ang(rng), tr = ang(rng);
    cplx z(zr(rng), zi(rng));
    cplx g = gamma_from_impedance(z, ti, tr, env.eta0);
    double a = local_flow_gamma(g, ti, tr, env).p;
    double b = local_flow_impedance(z, ti, tr, env);
    CHECK(std::abs(a - b) <= 1e-10 * std::max(1.0, std::abs(a)));
    // sign law
    if (std::abs(z.real()) > 1e-9) CHECK((b <= 0) == (z.real() >= 0));
  }
  CHECK(local_flow_impedance(cplx(0, 80), 0.1, 1.2, env) == 0.0);
}

TEST_CASE("unit efficiency amplitude") {
  auto env = env28();
  for (double psi : {0.0, 0.7, 2.0}) CHECK(unit_efficiency_amplitude(psi, 0.5, 0.5) == doctest::Approx(1.0));
  CHECK(unit_efficiency_amplitude(kPi / 2, 0, deg2rad(60)) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ang(0, deg2rad(85)), ph(-kPi, kPi);
  for (int t = 0; t < 500; ++t) {
    double ti = ang(rng), tr = ang(rng), psi = ph(rng);
    double r = unit_efficiency_amplitude(psi, ti, tr);
    CHECK(std::abs(local_flow_gamma(std::polar(r, psi), ti, tr, env).s) <= 1e-12);
  }
}

TEST_CASE("unit reflection real part signs") {
  cplx z(0, 250);
  CHECK(unit_reflection_real_part(z, 0.3, 0.3, 377) == 0.0);
  CHECK(unit_reflection_real_part(z, 0, deg2rad(75), 377) > 0);
  CHECK(unit_reflection_real_part(z, deg2rad(75), 0, 377) < 0);
}

TEST_CASE("anomalous reflector impedance") {
  const double eta = 377, tr = deg2rad(70);
  const double c0 = 1 / std::cos(tr);
  for (double phi = -kPi; phi <= kPi; phi += 0.05) {
    CHECK(anomalous_reflector_impedance(1.0, phi, 0, tr, eta).real() >= -1e-9);
    CHECK(anomalous_numerator(1.0, phi, 0, tr) >= 0);
    double r0 = std::sqrt(c0);
    CHECK(anomalous_numerator(r0, phi, 0, tr) ==
          doctest::Approx(std::sqrt(c0) * (c0 - 1) * std::cos(phi)).epsilon(1e-12));
    // Re Z = eta0 N / (cos tr D)
    for (double rr : {0.4, 1.0, r0}) {
      cplx z = anomalous_reflector_impedance(rr, phi, 0, tr, eta);
      double expect = eta / std::cos(tr) * anomalous_numerator(rr, phi, 0, tr) / anomalous_denominator(rr, phi, 0, tr);
      CHECK(z.real() == doctest::Approx(expect).epsilon(1e-10));
    }
  }
  CHECK(std::abs(anomalous_reflector_impedance(1.0, kPi, 0.4, 0.4, eta)) < 1e-12);
}

TEST_CASE("global flow") {
  auto env = env28();
  const double tr = deg2rad(60);
  auto g = periods_geometry(env, tr, 3);
  const double r0 = std::sqrt(1 / std::cos(tr));
  auto r = constant_gamma_reflection(g, env, r0);
  CHECK(std::abs(global_flow(r, g, env)) <= 1e-9 * incident_power(g, env));

  auto gh = periods_geometry(env, tr, 3.5);
  auto rh = constant_gamma_reflection(gh, env, r0);
  CHECK(std::abs(global_flow(rh, gh, env)) > 1e-6 * incident_power(gh, env));

  auto z = constant_gamma_reflection(g, env, 0.0);
  CHECK(global_flow(z, g, env) == doctest::Approx(-incident_power(g, env)).epsilon(1e-12));

  // sum of local flows equals the closed form
  auto go = go_profile(g, env);
  auto p = go.profile;
  for (std::size_t n = 0; n < p.size(); ++n) p.z[n] += cplx(20.0 * std::sin(0.01 * n), 0);
  auto rep = surface_power(p, g, env);
  CHECK(rep.global == doctest::Approx(global_flow(p, g, env)).epsilon(1e-10));
}

TEST_CASE("far field flux") {
  auto env = env28();
  auto g = ScenarioGeometry::make(0, deg2rad(30), 0.5, 0.25, env.lambda / 32, 100, 100);
  auto z = constant_gamma_reflection(g, env, 0.0);
  for (double t : {-1.0, 0.0, 0.5}) CHECK(far_field_flux(z, g, env, t) == 0.0);

  // refined midpoint quadrature of the same continuous profile
  auto gamma = [&](double y) { return std::polar(1.0 + 0.2 * std::cos(2 * kPi * y / 0.5), -env.k * 0.5 * y); };
  auto r = constant_gamma_reflection(g, env, 1.0);
  for (std::size_t n = 0; n < r.size(); ++n) r.gamma_s[n] = gamma(r.y[n]);
  auto fine = ScenarioGeometry::make(0, deg2rad(30), 0.5, g.ly, g.dy / 8, 100, 100);
  auto rf = constant_gamma_reflection(fine, env, 1.0);
  for (std::size_t n = 0; n < rf.size(); ++n) rf.gamma_s[n] = gamma(rf.y[n]);
  for (double deg : {29.5, 30.0, 30.3}) {
    double a = far_field_flux(r, g, env, deg2rad(deg)), b = far_field_flux(rf, fine, env, deg2rad(deg));
    CHECK(std::abs(a - b) <= 1e-4 * b);
  }
}

TEST_CASE("radiation pattern") {
  auto sc = reference_scenario(30);
  auto go = go_profile(sc.geom, sc.env);
  auto pat = radiation_pattern(go.reflection, sc.geom, sc.env, angle_grid_deg(-90, 90, 0.1));
  auto s = summarize(pat, go.reflection, sc.geom, sc.env);
  CHECK(rad2deg(s.peak_angle) == doctest::Approx(30.0).epsilon(1e-9));
  CHECK(std::abs(s.peak_to_receiver_db) < 1e-9);
  CHECK(to_db(s.receiver) == doctest::Approx(-7.871).epsilon(0.05 / 7.871));

  auto sc75 = reference_scenario(75);
  auto go75 = go_profile(sc75.geom, sc75.env);
  auto p75 = radiation_pattern(go75.reflection, sc75.geom, sc75.env, angle_grid_deg(-90, 90, 0.1));
  auto s75 = summarize(p75, go75.reflection, sc75.geom, sc75.env);
  CHECK(rad2deg(s75.peak_angle) == doctest::Approx(74.8).epsilon(1e-9));
  CHECK(s75.peak_to_receiver_db == doctest::Approx(0.0306).epsilon(0.05));

  // real even profile at normal incidence gives a symmetric pattern
  auto r = constant_gamma_reflection(sc.geom, sc.env, 1.0);
  r.theta_r = 0.3;
  for (std::size_t n = 0; n < r.size(); ++n) r.gamma_s[n] = 0.5 + 0.4 * std::cos(100.0 * r.y[n]);
  auto grid = angle_grid_deg(-89, 89, 0.5);
  auto sym = radiation_pattern(r, sc.geom, sc.env, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double a = sym.flux[i], b = sym.flux[grid.size() - 1 - i];
    CHECK(std::abs(a - b) <= 1e-10 * std::max(a, 1e-30) + 1e-300);
  }

  CHECK_THROWS_AS(radiation_pattern(r, sc.geom, sc.env, {0.2, 0.1}), Error);
  CHECK_THROWS_AS(radiation_pattern(r, sc.geom, sc.env, {0.0, kPi / 2}), Error);
}

TEST_CASE("array factor reciprocity") {
  auto sc = reference_scenario(30);
  auto r = go_profile(sc.geom, sc.env).reflection;
  for (std::size_t n = 0; n < r.size(); ++n) r.gamma_s[n] *= 1.0 + 0.1 * std::sin(7.0 * n);
  auto m = r;
  for (std::size_t n = 0; n < r.size(); ++n) m.gamma_s[n] = std::conj(r.gamma_s[r.size() - 1 - n]);
  for (double t : {-0.5, 0.1, 0.52}) {
    cplx a = array_factor(r, sc.geom, t), b = array_factor(m, sc.geom, t);
    CHECK(std::abs(b - std::conj(a)) <= 1e-9 * std::abs(a));
  }
}

TEST_CASE("sinr") {
  CHECK(sinr(2.0, {}, 0.5) == doctest::Approx(4.0));
  CHECK(sinr(1.0, {1.0}, 1e-15) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sinr(1.0, {0.1, 0.1, 0.1}, 0.01) == doctest::Approx(1.0 / 0.31));
  CHECK_THROWS_AS(sinr(1.0, {}, 0.0), Error);
}
