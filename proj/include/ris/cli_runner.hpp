// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "ris/impedance_optimizer.hpp"

namespace ris::cli {

enum ExitCode : int { kOk = 0, kConfigError = 2, kNonConvergence = 3, kNumericalFailure = 4 };

struct ExperimentConfig {
  // [scenario]
  double frequency = 28e9;
  double light_speed = 3e8;
  double eta0 = 377.0;
  double p0 = 1.0;
  double theta_i = 0.0;  // deg
  double theta_r = 30.0;
  double lx = 0.5;
  double ly = 0.25;
  double samples_per_lambda = 32;
  double r_rx = 100.0;
  double r_obs = 100.0;
  // [problem]
  std::string model = "sheet";
  std::string kind = "go";
  std::string epsilon = "5e-2";  // or "inactive"
  std::string helmholtz_sine = "theta_r";
  std::string masks;  // "lo:hi:step:delta;..." in deg and W/m^2
  std::string profile;  // input profile for the pattern problem
  // [pattern]
  double pattern_min = -90.0;
  double pattern_max = 90.0;
  double pattern_step = 0.1;
  // [solver]
  int max_outer = 60;
  int max_inner = 3000;
  int lbfgs_memory = 10;
  double mu0 = 1e-4;
  double mu_growth = 3.0;
  double feas_tol = 1e-3;
  // [floquet]
  int samples_per_period = 32;
  int n_max = -1;
  double theta_i_actual = -1.0;  // deg; negative: design value
  // [discrete]
  std::string alphabet;  // file; empty: two-state example alphabet
  int cells_x = 8;
  int cells_y = 8;
  double cell_size = 0.5;  // in wavelengths
  double tx_distance = 2.0;  // m
  double tx_angle = 30.0;  // deg
  double rx_distance = 2.0;
  double rx_angle = 45.0;
  double gain_tx = 2.0;
  double gain_rx = 2.0;
  int sweeps = 20;
  // [channel]
  std::string network;  // file; empty: dipole layout below
  int ris_elements = 4;
  double element_spacing = 0.25;  // wavelengths
  double link_distance = 10.0;    // wavelengths
  double wire_radius = 1e-3;      // wavelengths
  double z_gen = 50.0;
  double z_load = 50.0;
  double load_resistance = 1.0;
  double reactance_min = -300.0;
  double reactance_max = 300.0;
  double reactance_step = 50.0;
  // [output]
  std::string out = "ris_out";
};

struct Key {
  std::string section;
  std::string name;
  std::string flag;
  std::string help;
  std::function<std::string(const ExperimentConfig&)> get;
  std::function<void(ExperimentConfig&, const std::string&)> set;
};

const std::vector<Key>& keys();

// Throws Error(Config) on unknown keys or bad values.
void apply(ExperimentConfig& cfg, const std::string& fullname, const std::string& value);
void load_ini(ExperimentConfig& cfg, std::istream& is);
void dump_ini(std::ostream& os, const ExperimentConfig& cfg);
bool same(const ExperimentConfig& a, const ExperimentConfig& b);

Scenario scenario_of(const ExperimentConfig& cfg);
std::vector<MaskSector> parse_masks(const std::string& s);

// Executes the configured experiment and writes artifacts under cfg.out.
int run(const ExperimentConfig& cfg, std::ostream& log);
// Compares two run directories, writes compare.csv into out_dir.
int compare(const std::string& dir_a, const std::string& dir_b, const std::string& out_dir, std::ostream& log);

// Entry point shared by the executable and tests.
int main(int argc, char** argv);

}  // namespace ris::cli
