// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <complex>
#include <numbers>
#include <vector>

namespace ris {

using cplx = std::complex<double>;
using Vec3 = std::array<double, 3>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kSpeedOfLight = 299792458.0;
inline constexpr double kEta0 = 376.730313668;
inline constexpr double kMu0 = 1.25663706212e-6;

inline double deg2rad(double d) { return d * kPi / 180.0; }
inline double rad2deg(double r) { return r * 180.0 / kPi; }

struct WaveEnvironment {
  double frequency = 0;  // Hz
  double lambda = 0;     // m
  double k = 0;          // rad/m
  double eta0 = kEta0;   // ohm
  double e_amp = 0;      // |E^i_x0|, V/m
  double p0 = 0;         // W/m^2
  double c = kSpeedOfLight;

  // Throws ErrorKind::Config on non-positive inputs.
  static WaveEnvironment make(double frequency, double p0 = 1.0, double eta0 = kEta0,
                              double c = kSpeedOfLight);

  double omega() const { return 2.0 * kPi * frequency; }
  double e_amp2() const { return e_amp * e_amp; }
  double mu0() const { return eta0 / c; }
  double eps0() const { return 1.0 / (eta0 * c); }
};

struct ScenarioGeometry {
  double theta_i = 0;
  double theta_r = 0;
  double phi_i = kPi / 2;
  double phi_r = kPi / 2;
  double lx = 0;
  double ly = 0;
  double dy = 0;
  int n = 0;
  double r_rx = 0;
  double r_obs = 0;

  // N = round(2 ly / dy); ly is then snapped so that N dy = 2 ly exactly.
  static ScenarioGeometry make(double theta_i, double theta_r, double lx, double ly, double dy,
                               double r_rx, double r_obs);

  double y(int idx) const { return -ly - dy / 2 + dy * (idx + 1); }  // idx is 0-based
  std::vector<double> samples() const;
};

enum class Direction { Incident, Reflected };

Vec3 wavevector(const WaveEnvironment& env, double theta, Direction dir);

double fraunhofer_distance(const ScenarioGeometry& geom, const WaveEnvironment& env);

struct Scenario {
  WaveEnvironment env;
  ScenarioGeometry geom;
};

// 28 GHz, P0 = 1 W/m^2, Lx = 0.5 m, Ly = 0.25 m, dy = lambda/32, R = 100 m.
// Uses c = 3e8 and eta0 = 377.
Scenario reference_scenario(double theta_r_deg, double theta_i_deg = 0.0);

}  // namespace ris
