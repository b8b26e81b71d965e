// SPDX-License-Identifier: Apache-2.0
#include "ris/wavecore.hpp"

#include <cmath>

#include "ris/errors.hpp"

namespace ris {

WaveEnvironment WaveEnvironment::make(double frequency, double p0, double eta0, double c) {
  if (!(frequency > 0) || !(p0 > 0) || !(eta0 > 0) || !(c > 0))
    throw Error(ErrorKind::Config, "wave environment: all parameters must be positive");
  WaveEnvironment env;
  env.frequency = frequency;
  env.c = c;
  env.lambda = c / frequency;
  env.k = 2.0 * kPi / env.lambda;
  env.eta0 = eta0;
  env.p0 = p0;
  env.e_amp = std::sqrt(2.0 * p0 * eta0);
  return env;
}

ScenarioGeometry ScenarioGeometry::make(double theta_i, double theta_r, double lx, double ly, double dy,
                                        double r_rx, double r_obs) {
  auto in_range = [](double t) { return t >= 0 && t < kPi / 2; };
  if (!in_range(theta_i) || !in_range(theta_r))
    throw Error(ErrorKind::Config, "geometry: elevations must lie in [0, 90) deg");
  if (!(lx >= 0) || !(ly > 0) || !(dy > 0) || !(r_rx > 0) || !(r_obs > 0))
    throw Error(ErrorKind::Config, "geometry: lengths must be positive");
  ScenarioGeometry g;
  g.theta_i = theta_i;
  g.theta_r = theta_r;
  g.lx = lx;
  g.dy = dy;
  g.n = static_cast<int>(std::lround(2.0 * ly / dy));
  if (g.n < 1) throw Error(ErrorKind::Config, "geometry: aperture shorter than one sample");
  g.ly = g.n * dy / 2.0;
  g.r_rx = r_rx;
  g.r_obs = r_obs;
  return g;
}

std::vector<double> ScenarioGeometry::samples() const {
  std::vector<double> y(static_cast<std::size_t>(n));
  // symmetric construction so that sum(y) vanishes
  for (int i = 0; i < n; ++i) y[i] = (i - (n - 1) / 2.0) * dy;
  return y;
}

Vec3 wavevector(const WaveEnvironment& env, double theta, Direction dir) {
  double kz = env.k * std::cos(theta);
  return {0.0, env.k * std::sin(theta), dir == Direction::Incident ? -kz : kz};
}

double fraunhofer_distance(const ScenarioGeometry& geom, const WaveEnvironment& env) {
  return 8.0 * (geom.lx * geom.lx + geom.ly * geom.ly) / env.lambda;
}

Scenario reference_scenario(double theta_r_deg, double theta_i_deg) {
  Scenario s;
  s.env = WaveEnvironment::make(28e9, 1.0, 377.0, 3e8);
  s.geom = ScenarioGeometry::make(deg2rad(theta_i_deg), deg2rad(theta_r_deg), 0.5, 0.25,
                                  s.env.lambda / 32.0, 100.0, 100.0);
  return s;
}

}  // namespace ris
