// SPDX-License-Identifier: Apache-2.0
#include "ris/sheet_model.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "ris/errors.hpp"

namespace ris {

namespace {

constexpr double kDenomTol = 1e-12;
constexpr double kGoDenomTol = 1e-9;

double phase_slope(double k, double theta_i, double theta_r) {
  return k * (std::sin(theta_r) - std::sin(theta_i));
}

}  // namespace

cplx ReflectionProfile::geometric_phase(std::size_t n) const {
  return std::polar(1.0, -phase_slope(k, theta_i, theta_r) * y[n]);
}

cplx ReflectionProfile::correction(std::size_t n) const {
  return gamma_s[n] * std::conj(geometric_phase(n));
}

int FloquetSpectrum::propagating_count() const {
  int c = 0;
  for (bool b : propagating) c += b ? 1 : 0;
  return c;
}

cplx impedance_from_gamma(cplx gamma_s, double theta_i, double theta_r, double eta0) {
  cplx den = std::cos(theta_i) - gamma_s * std::cos(theta_r);
  if (std::abs(den) <= kDenomTol)
    throw Error(ErrorKind::OpenBoundary, "impedance_from_gamma: open boundary (denominator ~ 0)");
  return eta0 * (1.0 + gamma_s) / den;
}

cplx gamma_from_impedance(cplx z, double theta_i, double theta_r, double eta0) {
  cplx den = z * std::cos(theta_r) + eta0;
  if (std::abs(den) <= kDenomTol * eta0)
    throw Error(ErrorKind::ResonantDenominator, "gamma_from_impedance: resonant denominator");
  return (z * std::cos(theta_i) - eta0) / den;
}

cplx load_reflection_coefficient(cplx z, double theta_i, double eta0) {
  cplx den = z * std::cos(theta_i) + eta0;
  if (std::abs(den) <= kDenomTol * eta0)
    throw Error(ErrorKind::ResonantDenominator, "load_reflection_coefficient: resonant denominator");
  return (z * std::cos(theta_i) - eta0) / den;
}

double passivity_threshold(cplx z, double theta_i, double theta_r, double eta0) {
  double m2 = std::norm(z);
  if (m2 == 0) return std::numeric_limits<double>::infinity();
  return z.real() / m2 - (std::cos(theta_i) - std::cos(theta_r)) / (2.0 * eta0);
}

ReflectionProfile reflection_of(const SurfaceProfile& p, const WaveEnvironment& env) {
  ReflectionProfile r;
  r.y = p.y;
  r.theta_i = p.theta_i;
  r.theta_r = p.theta_r;
  r.k = env.k;
  r.gamma_s.resize(p.size());
  for (std::size_t n = 0; n < p.size(); ++n)
    r.gamma_s[n] = gamma_from_impedance(p.z[n], p.theta_i, p.theta_r, env.eta0);
  return r;
}

SurfaceProfile profile_of(const ReflectionProfile& r, const WaveEnvironment& env) {
  SurfaceProfile p;
  p.y = r.y;
  p.theta_i = r.theta_i;
  p.theta_r = r.theta_r;
  p.z.resize(r.size());
  for (std::size_t n = 0; n < r.size(); ++n)
    p.z[n] = impedance_from_gamma(r.gamma_s[n], r.theta_i, r.theta_r, env.eta0);
  return p;
}

ReflectionProfile constant_gamma_reflection(const ScenarioGeometry& geom, const WaveEnvironment& env,
                                            cplx gamma0) {
  ReflectionProfile r;
  r.y = geom.samples();
  r.theta_i = geom.theta_i;
  r.theta_r = geom.theta_r;
  r.k = env.k;
  r.gamma_s.resize(r.y.size());
  for (std::size_t n = 0; n < r.y.size(); ++n) r.gamma_s[n] = gamma0 * r.geometric_phase(n);
  return r;
}

GoSolution go_profile(const ScenarioGeometry& geom, const WaveEnvironment& env) {
  GoSolution go;
  go.reflection = constant_gamma_reflection(geom, env, 1.0);
  SurfaceProfile& p = go.profile;
  p.y = go.reflection.y;
  p.theta_i = geom.theta_i;
  p.theta_r = geom.theta_r;
  p.z.resize(p.y.size());
  double ci = std::cos(geom.theta_i), cr = std::cos(geom.theta_r);
  for (std::size_t n = 0; n < p.y.size(); ++n) {
    cplx g = go.reflection.gamma_s[n];
    cplx num = env.eta0 * (1.0 + g);
    cplx den = ci - g * cr;
    if (std::abs(den) < kGoDenomTol) {
      cplx dir = num * std::conj(den);
      if (std::abs(dir) == 0) dir = num;
      if (std::abs(dir) == 0) dir = 1.0;
      p.z[n] = kOpenBoundaryZ * dir / std::abs(dir);
      ++go.clipped;
    } else {
      p.z[n] = num / den;
    }
  }
  return go;
}

std::vector<double> helmholtz_residual(const ReflectionProfile& r, const ScenarioGeometry& geom,
                                       const WaveEnvironment& env, SineFactor s) {
  const std::size_t n = r.size();
  if (n < 3) throw Error(ErrorKind::Config, "helmholtz_residual: need at least 3 samples");
  const double k = env.k;
  const double sn = std::sin(s == SineFactor::ThetaR ? r.theta_r : r.theta_i);
  const double dy = geom.dy;
  std::vector<cplx> f(n);
  for (std::size_t i = 0; i < n; ++i) f[i] = r.correction(i);
  std::vector<double> h(n - 2);
  for (std::size_t i = 0; i + 2 < n; ++i) {
    cplx d1 = (f[i + 1] - f[i]) / dy;
    cplx d1n = (f[i + 2] - f[i + 1]) / dy;
    cplx d2 = (d1n - d1) / dy;
    cplx res = d2 - cplx(0, 2.0 * k * sn) * d1;
    double g = std::abs(r.gamma_s[i]);
    h[i] = g > 0 ? std::abs(res) / (k * k * g) : std::numeric_limits<double>::infinity();
  }
  return h;
}

std::vector<double> helmholtz_residual(const SurfaceProfile& p, const ScenarioGeometry& geom,
                                       const WaveEnvironment& env, SineFactor s) {
  return helmholtz_residual(reflection_of(p, env), geom, env, s);
}

double design_period(double theta_i, double theta_r, double lambda) {
  double d = std::abs(std::sin(theta_i) - std::sin(theta_r));
  if (d == 0) throw Error(ErrorKind::Config, "specular design has no finite period");
  return lambda / d;
}

std::vector<double> period_grid(double period, int m) {
  std::vector<double> y(static_cast<std::size_t>(m));
  double dy = period / m;
  for (int i = 0; i < m; ++i) y[i] = -period / 2 + dy * (i + 0.5);
  return y;
}

FloquetSpectrum floquet_spectrum(const std::vector<double>& y, const std::vector<cplx>& gamma_s,
                                 double period, double theta_i_actual, const WaveEnvironment& env,
                                 int n_max) {
  const std::size_t m = y.size();
  if (m < 2 || gamma_s.size() != m) throw Error(ErrorKind::Config, "floquet: need >= 2 samples");
  double dy = (y.back() - y.front()) / static_cast<double>(m - 1);
  double span = dy * static_cast<double>(m);
  if (std::abs(span - period) > dy / 2)
    throw Error(ErrorKind::PeriodMismatch, "floquet: samples do not span one period");
  int min_nmax = static_cast<int>(std::ceil(period / env.lambda)) + 2;
  if (n_max < 0) n_max = static_cast<int>(std::ceil(period / env.lambda)) + 4;
  if (n_max < min_nmax) throw Error(ErrorKind::Config, "floquet: n_max too small for this period");

  FloquetSpectrum fs;
  fs.period = period;
  const double k = env.k;
  for (int idx = -n_max; idx <= n_max; ++idx) {
    // periodic trapezoid rule on the midpoint grid
    cplx acc = 0;
    for (std::size_t i = 0; i < m; ++i)
      acc += gamma_s[i] * std::polar(1.0, 2.0 * kPi * idx * y[i] / period);
    double ky = k * (std::sin(theta_i_actual) + idx * env.lambda / period);
    bool prop = k >= std::abs(ky);
    fs.index.push_back(idx);
    fs.mu.push_back(acc / static_cast<double>(m));
    fs.ky.push_back(ky);
    fs.propagating.push_back(prop);
    fs.theta.push_back(prop ? std::atan2(ky, std::sqrt(k * k - ky * ky))
                            : std::numeric_limits<double>::quiet_NaN());
  }
  return fs;
}

FloquetSpectrum floquet_spectrum(const ReflectionProfile& one_period, double theta_i_actual,
                                 const WaveEnvironment& env, int n_max) {
  double period = design_period(one_period.theta_i, one_period.theta_r, env.lambda);
  return floquet_spectrum(one_period.y, one_period.gamma_s, period, theta_i_actual, env, n_max);
}

std::vector<double> admissible_steering_angles(int cells_per_wavelength, const std::vector<int>& ns) {
  if (cells_per_wavelength < 2) throw Error(ErrorKind::Config, "steering angles: N must be >= 2");
  std::vector<double> out;
  for (int n : ns)
    if (n > cells_per_wavelength)
      out.push_back(std::asin(static_cast<double>(cells_per_wavelength) / n));
  return out;
}

void write_profile_csv(std::ostream& os, const SurfaceProfile& p) {
  os << "y_m,re_z_ohm,im_z_ohm\n";
  os << std::setprecision(17);
  for (std::size_t n = 0; n < p.size(); ++n)
    os << p.y[n] << ',' << p.z[n].real() << ',' << p.z[n].imag() << '\n';
}

SurfaceProfile read_profile_csv(std::istream& is, double theta_i, double theta_r) {
  SurfaceProfile p;
  p.theta_i = theta_i;
  p.theta_r = theta_r;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#' || line[0] == 'y') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    double y, re, im;
    if (!(ls >> y >> re >> im)) throw Error(ErrorKind::Config, "profile csv: malformed line: " + line);
    p.y.push_back(y);
    p.z.emplace_back(re, im);
  }
  if (p.z.empty()) throw Error(ErrorKind::Config, "profile csv: no samples");
  return p;
}

}  // namespace ris
