// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <iosfwd>
#include <vector>

#include "ris/sheet_model.hpp"

namespace ris {

struct LocalFlow {
  double s = 0;  // normalized
  double p = 0;  // W/m^2
};

enum class FlowClass { Active, Passive, LosslessBoundary };

struct SurfacePowerReport {
  std::vector<double> p_local;
  std::vector<double> s_local;
  std::vector<FlowClass> cls;
  double global = 0;  // W
};

struct PowerFluxPattern {
  std::vector<double> theta;  // rad
  std::vector<double> flux;   // W/m^2
  double r_obs = 0;

  std::size_t peak_index() const;
  double peak_angle() const { return theta[peak_index()]; }
  double peak_value() const { return flux[peak_index()]; }
};

struct PatternSummary {
  double peak_angle = 0;  // rad
  double peak = 0;
  double receiver = 0;
  double specular = 0;
  double peak_to_receiver_db = 0;
  double receiver_to_specular_db = 0;
};

LocalFlow local_flow_gamma(cplx gamma_s, double theta_i, double theta_r, const WaveEnvironment& env);
double local_flow_impedance(cplx z, double theta_i, double theta_r, const WaveEnvironment& env);
double unit_efficiency_amplitude(double psi, double theta_i, double theta_r);
double unit_reflection_real_part(cplx z, double theta_i, double theta_r, double eta0);

cplx anomalous_reflector_impedance(double r0, double phi_s, double theta_i, double theta_r, double eta0);
double anomalous_numerator(double r0, double phi_s, double theta_i, double theta_r);
double anomalous_denominator(double r0, double phi_s, double theta_i, double theta_r);

SurfacePowerReport surface_power(const SurfaceProfile& p, const ScenarioGeometry& geom,
                                 const WaveEnvironment& env);

double global_flow(const ReflectionProfile& r, const ScenarioGeometry& geom, const WaveEnvironment& env);
double global_flow(const SurfaceProfile& p, const ScenarioGeometry& geom, const WaveEnvironment& env);
double incident_power(const ScenarioGeometry& geom, const WaveEnvironment& env);

cplx array_factor(const ReflectionProfile& r, const ScenarioGeometry& geom, double theta_o);
double flux_prefactor(const ScenarioGeometry& geom, const WaveEnvironment& env);
double far_field_flux(const ReflectionProfile& r, const ScenarioGeometry& geom,
                      const WaveEnvironment& env, double theta_o);

PowerFluxPattern radiation_pattern(const ReflectionProfile& r, const ScenarioGeometry& geom,
                                   const WaveEnvironment& env, const std::vector<double>& theta_o);
std::vector<double> angle_grid_deg(double lo, double hi, double step);
PatternSummary summarize(const PowerFluxPattern& pat, const ReflectionProfile& r,
                         const ScenarioGeometry& geom, const WaveEnvironment& env);

double sinr(double intended, const std::vector<double>& interferers, double noise);

inline double to_db(double x) { return 10.0 * std::log10(x); }

void write_pattern_csv(std::ostream& os, const PowerFluxPattern& pat);

}  // namespace ris
