// SPDX-License-Identifier: Apache-2.0
#include "ris/power_analysis.hpp"

#include <algorithm>
#include <iomanip>
#include <ostream>

#include "ris/errors.hpp"
#include "ris/kernels.hpp"

namespace ris {

std::size_t PowerFluxPattern::peak_index() const {
  return static_cast<std::size_t>(std::max_element(flux.begin(), flux.end()) - flux.begin());
}

LocalFlow local_flow_gamma(cplx gamma_s, double theta_i, double theta_r, const WaveEnvironment& env) {
  double ci = std::cos(theta_i), cr = std::cos(theta_r);
  LocalFlow f;
  f.s = std::norm(gamma_s) * cr - ci + gamma_s.real() * (cr - ci);
  f.p = env.e_amp2() * f.s / (2.0 * env.eta0);
  return f;
}

double local_flow_impedance(cplx z, double theta_i, double theta_r, const WaveEnvironment& env) {
  double ci = std::cos(theta_i), cr = std::cos(theta_r);
  cplx den = z * cr + env.eta0;
  if (std::abs(den) <= 1e-12 * env.eta0)
    throw Error(ErrorKind::ResonantDenominator, "local_flow_impedance: resonant denominator");
  return -(env.e_amp2() / 2.0) * std::norm((ci + cr) / den) * z.real();
}

double unit_efficiency_amplitude(double psi, double theta_i, double theta_r) {
  double f = std::cos(theta_i) / std::cos(theta_r);
  double a = std::cos(psi) * (f - 1.0);
  return 0.5 * a + 0.5 * std::sqrt(a * a + 4.0 * f);
}

double unit_reflection_real_part(cplx z, double theta_i, double theta_r, double eta0) {
  return std::norm(z) * (std::cos(theta_i) - std::cos(theta_r)) / (2.0 * eta0);
}

cplx anomalous_reflector_impedance(double r0, double phi_s, double theta_i, double theta_r, double eta0) {
  double cr = std::cos(theta_r);
  double c0 = std::cos(theta_i) / cr;
  cplx w = std::polar(r0, phi_s);
  cplx den = c0 - w;
  if (std::abs(den) <= 1e-12)
    throw Error(ErrorKind::ResonantDenominator, "anomalous_reflector_impedance: resonant denominator");
  return (eta0 / cr) * (1.0 + w) / den;
}

double anomalous_numerator(double r0, double phi_s, double theta_i, double theta_r) {
  double c0 = std::cos(theta_i) / std::cos(theta_r);
  return c0 - r0 * r0 + (c0 - 1.0) * r0 * std::cos(phi_s);
}

double anomalous_denominator(double r0, double phi_s, double theta_i, double theta_r) {
  double c0 = std::cos(theta_i) / std::cos(theta_r);
  return c0 * c0 + r0 * r0 - 2.0 * c0 * r0 * std::cos(phi_s);
}

SurfacePowerReport surface_power(const SurfaceProfile& p, const ScenarioGeometry& geom,
                                 const WaveEnvironment& env) {
  SurfacePowerReport rep;
  const std::size_t n = p.size();
  rep.p_local.resize(n);
  rep.s_local.resize(n);
  rep.cls.resize(n);
  double acc = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double pl = local_flow_impedance(p.z[i], p.theta_i, p.theta_r, env);
    rep.p_local[i] = pl;
    rep.s_local[i] = pl * 2.0 * env.eta0 / env.e_amp2();
    double re = p.z[i].real();
    if (std::abs(re) <= 1e-9 * std::abs(p.z[i]))
      rep.cls[i] = FlowClass::LosslessBoundary;
    else
      rep.cls[i] = re > 0 ? FlowClass::Passive : FlowClass::Active;
    acc += pl;
  }
  rep.global = acc * geom.dy * 2.0 * geom.lx;
  return rep;
}

double incident_power(const ScenarioGeometry& geom, const WaveEnvironment& env) {
  return env.e_amp2() / env.eta0 * 2.0 * geom.lx * geom.ly * std::cos(geom.theta_i);
}

double global_flow(const ReflectionProfile& r, const ScenarioGeometry& geom, const WaveEnvironment& env) {
  double ci = std::cos(r.theta_i), cr = std::cos(r.theta_r);
  double acc = 0;
  for (const cplx& g : r.gamma_s) acc += std::norm(g) * cr + g.real() * (cr - ci);
  return env.e_amp2() * geom.lx / env.eta0 * (-2.0 * geom.ly * ci + geom.dy * acc);
}

double global_flow(const SurfaceProfile& p, const ScenarioGeometry& geom, const WaveEnvironment& env) {
  return global_flow(reflection_of(p, env), geom, env);
}

cplx array_factor(const ReflectionProfile& r, const ScenarioGeometry& geom, double theta_o) {
  const double kk = r.k * (std::sin(r.theta_i) - std::sin(theta_o));
  cplx acc = 0;
  for (std::size_t n = 0; n < r.size(); ++n) acc += r.gamma_s[n] * std::polar(1.0, -kk * r.y[n]);
  return geom.dy * acc;
}

double flux_prefactor(const ScenarioGeometry& geom, const WaveEnvironment& env) {
  return env.k * env.k / env.eta0 * env.e_amp2() * geom.lx * geom.lx /
         (8.0 * kPi * kPi * geom.r_obs * geom.r_obs);
}

double far_field_flux(const ReflectionProfile& r, const ScenarioGeometry& geom, const WaveEnvironment& env,
                      double theta_o) {
  double ob = std::cos(r.theta_r) + std::cos(theta_o);
  return flux_prefactor(geom, env) * std::norm(array_factor(r, geom, theta_o)) * ob * ob;
}

PowerFluxPattern radiation_pattern(const ReflectionProfile& r, const ScenarioGeometry& geom,
                                   const WaveEnvironment& env, const std::vector<double>& theta_o) {
  for (std::size_t i = 0; i < theta_o.size(); ++i) {
    if (!(theta_o[i] > -kPi / 2 && theta_o[i] < kPi / 2) || (i > 0 && !(theta_o[i] > theta_o[i - 1])))
      throw Error(ErrorKind::Config, "radiation_pattern: grid must be increasing within (-90, 90) deg");
  }
  const std::size_t n = r.size();
  std::vector<double> gr(n), gi(n), wr(n), wi(n);
  for (std::size_t i = 0; i < n; ++i) {
    gr[i] = r.gamma_s[i].real();
    gi[i] = r.gamma_s[i].imag();
  }
  const auto& kt = kernels::active();
  const double pre = flux_prefactor(geom, env);
  const double cr = std::cos(r.theta_r), si = std::sin(r.theta_i);
  PowerFluxPattern pat;
  pat.theta = theta_o;
  pat.r_obs = geom.r_obs;
  pat.flux.resize(theta_o.size());
  for (std::size_t a = 0; a < theta_o.size(); ++a) {
    const double kk = r.k * (si - std::sin(theta_o[a]));
    for (std::size_t i = 0; i < n; ++i) {
      wr[i] = std::cos(kk * r.y[i]);
      wi[i] = -std::sin(kk * r.y[i]);
    }
    cplx af = geom.dy * kt.cdot(gr.data(), gi.data(), wr.data(), wi.data(), n);
    double ob = cr + std::cos(theta_o[a]);
    pat.flux[a] = pre * std::norm(af) * ob * ob;
  }
  return pat;
}

std::vector<double> angle_grid_deg(double lo, double hi, double step) {
  std::vector<double> g;
  long cnt = std::lround((hi - lo) / step);
  for (long i = 0; i <= cnt; ++i) {
    double d = lo + step * static_cast<double>(i);
    if (d <= -90.0 || d >= 90.0) continue;
    g.push_back(deg2rad(d));
  }
  return g;
}

PatternSummary summarize(const PowerFluxPattern& pat, const ReflectionProfile& r, const ScenarioGeometry& geom,
                         const WaveEnvironment& env) {
  PatternSummary s;
  s.peak_angle = pat.peak_angle();
  s.peak = pat.peak_value();
  s.receiver = far_field_flux(r, geom, env, r.theta_r);
  s.specular = far_field_flux(r, geom, env, r.theta_i);
  s.peak_to_receiver_db = to_db(s.peak / s.receiver);
  s.receiver_to_specular_db = to_db(s.receiver / s.specular);
  return s;
}

double sinr(double intended, const std::vector<double>& interferers, double noise) {
  if (!(noise > 0)) throw Error(ErrorKind::Config, "sinr: noise power must be positive");
  double acc = noise;
  for (double p : interferers) acc += p;
  return intended / acc;
}

void write_pattern_csv(std::ostream& os, const PowerFluxPattern& pat) {
  os << "theta_o_deg,flux_w_per_m2,flux_db\n" << std::setprecision(17);
  for (std::size_t i = 0; i < pat.theta.size(); ++i)
    os << rad2deg(pat.theta[i]) << ',' << pat.flux[i] << ',' << to_db(pat.flux[i]) << '\n';
}

}  // namespace ris
