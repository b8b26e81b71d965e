// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ris/wavecore.hpp"

namespace ris {

inline constexpr double kOpenBoundaryZ = 1e9;

struct SurfaceProfile {
  std::vector<double> y;
  std::vector<cplx> z;
  double theta_i = 0;
  double theta_r = 0;

  std::size_t size() const { return z.size(); }
};

struct ReflectionProfile {
  std::vector<double> y;
  std::vector<cplx> gamma_s;  // surface reflection coefficient
  double theta_i = 0;
  double theta_r = 0;
  double k = 0;

  std::size_t size() const { return gamma_s.size(); }
  // exp(-jk(sin tr - sin ti) y)
  cplx geometric_phase(std::size_t n) const;
  // Gamma_n = Gamma_S,n / geometric phase
  cplx correction(std::size_t n) const;
};

struct FloquetSpectrum {
  double period = 0;
  std::vector<int> index;
  std::vector<cplx> mu;
  std::vector<double> ky;
  std::vector<bool> propagating;
  std::vector<double> theta;  // NaN for evanescent modes

  int propagating_count() const;
};

enum class SineFactor { ThetaR, ThetaI };

cplx impedance_from_gamma(cplx gamma_s, double theta_i, double theta_r, double eta0);
cplx gamma_from_impedance(cplx z, double theta_i, double theta_r, double eta0);
cplx load_reflection_coefficient(cplx z, double theta_i, double eta0);
double passivity_threshold(cplx z, double theta_i, double theta_r, double eta0);

ReflectionProfile reflection_of(const SurfaceProfile& p, const WaveEnvironment& env);
SurfaceProfile profile_of(const ReflectionProfile& r, const WaveEnvironment& env);

// Gamma_S(y) = gamma0 exp(-jk(sin tr - sin ti) y) on the geometry samples.
ReflectionProfile constant_gamma_reflection(const ScenarioGeometry& geom, const WaveEnvironment& env,
                                            cplx gamma0);

struct GoSolution {
  ReflectionProfile reflection;
  SurfaceProfile profile;
  std::size_t clipped = 0;
};

GoSolution go_profile(const ScenarioGeometry& geom, const WaveEnvironment& env);

std::vector<double> helmholtz_residual(const SurfaceProfile& p, const ScenarioGeometry& geom,
                                       const WaveEnvironment& env, SineFactor s = SineFactor::ThetaR);
std::vector<double> helmholtz_residual(const ReflectionProfile& r, const ScenarioGeometry& geom,
                                       const WaveEnvironment& env, SineFactor s = SineFactor::ThetaR);

// Samples of one period of Gamma_S on a uniform grid; period from the design angles.
FloquetSpectrum floquet_spectrum(const ReflectionProfile& one_period, double theta_i_actual,
                                 const WaveEnvironment& env, int n_max = -1);
// Same with an explicit period, for hypothetical profiles.
FloquetSpectrum floquet_spectrum(const std::vector<double>& y, const std::vector<cplx>& gamma_s,
                                 double period, double theta_i_actual, const WaveEnvironment& env,
                                 int n_max = -1);

double design_period(double theta_i, double theta_r, double lambda);

// Uniform midpoint grid of m samples over one period centred at 0.
std::vector<double> period_grid(double period, int m);

// sin(theta_r) = N/n for every n in ns with n > N; returns radians.
std::vector<double> admissible_steering_angles(int cells_per_wavelength, const std::vector<int>& ns);

void write_profile_csv(std::ostream& os, const SurfaceProfile& p);
SurfaceProfile read_profile_csv(std::istream& is, double theta_i, double theta_r);

}  // namespace ris
