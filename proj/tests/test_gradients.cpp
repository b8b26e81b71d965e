#include <cmath>
#include <functional>
#include <random>

#include "doctest.h"
#include "ris/impedance_optimizer.hpp"
#include "ris/power_analysis.hpp"

using namespace ris;

namespace {

struct Case {
  WaveEnvironment env;
  ScenarioGeometry geom;
  SurfaceProfile p;
};

Case random_case(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> ang(0, deg2rad(80)), u(0.05, 2.0), v(-2.0, 2.0);
  Case c{WaveEnvironment::make(28e9, 1, 377.0, 3e8), {}, {}};
  double dy = c.env.lambda / 32;
  c.geom = ScenarioGeometry::make(ang(rng), ang(rng), 0.5, 32 * dy, dy, 100, 100);
  c.p.y = c.geom.samples();
  c.p.theta_i = c.geom.theta_i;
  c.p.theta_r = c.geom.theta_r;
  for (std::size_t n = 0; n < c.p.y.size(); ++n) c.p.z.emplace_back(u(rng) * c.env.eta0, v(rng) * c.env.eta0);
  return c;
}

// Norm-wise relative error of g against central differences of f.
double fd_error(const std::function<double(const SurfaceProfile&)>& f, const SurfaceProfile& p,
                const std::vector<cplx>& g, double h) {
  double num = 0, den = 0;
  for (std::size_t n = 0; n < p.size(); ++n) {
    auto q = p;
    q.z[n] = p.z[n] + h;
    double fp = f(q);
    q.z[n] = p.z[n] - h;
    double fm = f(q);
    q.z[n] = p.z[n] + cplx(0, h);
    double gp = f(q);
    q.z[n] = p.z[n] - cplx(0, h);
    double gm = f(q);
    cplx fd((fp - fm) / (2 * h), (gp - gm) / (2 * h));
    num += std::norm(fd - g[n]);
    den += std::norm(fd);
  }
  return std::sqrt(num / den);
}

}  // namespace

TEST_CASE("analytic gradients match central differences") {
  std::mt19937_64 rng(2024);
  double worst[3] = {0, 0, 0};
  for (int t = 0; t < 100; ++t) {
    auto c = random_case(rng);
    REQUIRE(c.p.size() == 64u);
    const double h = 1e-4 * c.env.eta0;

    auto gf = global_flow_gradient(c.p, c.geom, c.env);
    worst[0] = std::max(worst[0], fd_error([&](const SurfaceProfile& q) { return global_flow(q, c.geom, c.env); },
                                           c.p, gf, h));

    auto gp = flux_gradient(c.p, c.geom, c.env, c.p.theta_r);
    worst[1] = std::max(
        worst[1],
        fd_error([&](const SurfaceProfile& q) { return far_field_flux(reflection_of(q, c.env), c.geom, c.env, q.theta_r); },
                 c.p, gp, h));

    std::uniform_real_distribution<double> w(0, 1);
    std::vector<double> wt(c.p.size() - 2);
    for (auto& x : wt) x = w(rng);
    auto gh = helmholtz_gradient(c.p, c.geom, c.env, wt);
    worst[2] = std::max(worst[2], fd_error(
                                      [&](const SurfaceProfile& q) {
                                        auto hs = helmholtz_residual(q, c.geom, c.env);
                                        double s = 0;
                                        for (std::size_t i = 0; i < hs.size(); ++i) s += wt[i] * hs[i];
                                        return s;
                                      },
                                      c.p, gh, h));
  }
  CHECK(worst[0] <= 1e-5);
  CHECK(worst[1] <= 1e-5);
  CHECK(worst[2] <= 1e-5);
}

TEST_CASE("helmholtz gradient with the incidence sine factor") {
  std::mt19937_64 rng(99);
  auto c = random_case(rng);
  std::vector<double> wt(c.p.size() - 2, 1.0);
  auto g = helmholtz_gradient(c.p, c.geom, c.env, wt, SineFactor::ThetaI);
  double err = fd_error(
      [&](const SurfaceProfile& q) {
        double s = 0;
        for (double v : helmholtz_residual(q, c.geom, c.env, SineFactor::ThetaI)) s += v;
        return s;
      },
      c.p, g, 1e-4 * c.env.eta0);
  CHECK(err <= 1e-5);
}

TEST_CASE("central-difference error of the helmholtz gradient shrinks with the step") {
  std::mt19937_64 rng(2024);
  double worst = 0;
  for (int t = 0; t < 100; ++t) {
    auto c = random_case(rng);
    std::uniform_real_distribution<double> w(0, 1);
    std::vector<double> wt(c.p.size() - 2);
    for (auto& x : wt) x = w(rng);
    auto gh = helmholtz_gradient(c.p, c.geom, c.env, wt);
    worst = std::max(worst, fd_error(
                                [&](const SurfaceProfile& q) {
                                  auto hs = helmholtz_residual(q, c.geom, c.env);
                                  double s = 0;
                                  for (std::size_t i = 0; i < hs.size(); ++i) s += wt[i] * hs[i];
                                  return s;
                                },
                                c.p, gh, 1e-6 * c.env.eta0));
  }
  CHECK(worst <= 1e-8);
}
