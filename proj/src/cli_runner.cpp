// SPDX-License-Identifier: Apache-2.0
#include "ris/cli_runner.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "ris/coupled_channel.hpp"
#include "ris/discrete_model.hpp"
#include "ris/errors.hpp"

namespace ris::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fmt_double(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

double to_double(const std::string& key, const std::string& s) {
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorKind::Config, "config: '" + key + "' expects a number, got '" + s + "'");
  }
}

int to_int(const std::string& key, const std::string& s) {
  int v = 0;
  auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size())
    throw Error(ErrorKind::Config, "config: '" + key + "' expects an integer, got '" + s + "'");
  return v;
}

Key dkey(const char* sec, const char* name, const char* flag, const char* help, double ExperimentConfig::*m) {
  std::string full = std::string(sec) + "." + name;
  return {sec, name, flag, help, [m](const ExperimentConfig& c) { return fmt_double(c.*m); },
          [m, full](ExperimentConfig& c, const std::string& v) { c.*m = to_double(full, v); }};
}

Key ikey(const char* sec, const char* name, const char* flag, const char* help, int ExperimentConfig::*m) {
  std::string full = std::string(sec) + "." + name;
  return {sec, name, flag, help, [m](const ExperimentConfig& c) { return std::to_string(c.*m); },
          [m, full](ExperimentConfig& c, const std::string& v) { c.*m = to_int(full, v); }};
}

Key skey(const char* sec, const char* name, const char* flag, const char* help, std::string ExperimentConfig::*m) {
  return {sec, name, flag, help, [m](const ExperimentConfig& c) { return c.*m; },
          [m](ExperimentConfig& c, const std::string& v) { c.*m = v; }};
}

std::vector<Key> make_keys() {
  using C = ExperimentConfig;
  return {
      dkey("scenario", "frequency", "--frequency", "carrier frequency [Hz]", &C::frequency),
      dkey("scenario", "light_speed", "--light-speed", "speed of light [m/s]", &C::light_speed),
      dkey("scenario", "eta0", "--eta0", "free-space impedance [ohm]", &C::eta0),
      dkey("scenario", "p0", "--p0", "incident power density [W/m^2]", &C::p0),
      dkey("scenario", "theta_i", "--theta-i", "incidence elevation [deg]", &C::theta_i),
      dkey("scenario", "theta_r", "--theta-r", "reflection elevation [deg]", &C::theta_r),
      dkey("scenario", "lx", "--lx", "aperture half-length along x [m]", &C::lx),
      dkey("scenario", "ly", "--ly", "aperture half-length along y [m]", &C::ly),
      dkey("scenario", "samples_per_lambda", "--samples-per-lambda", "lambda / dy", &C::samples_per_lambda),
      dkey("scenario", "r_rx", "--r-rx", "receiver distance [m]", &C::r_rx),
      dkey("scenario", "r_obs", "--r-obs", "observation distance [m]", &C::r_obs),
      skey("problem", "model", "--model", "sheet | discrete | coupled", &C::model),
      skey("problem", "kind", "--problem",
           "go | global | reactive | global-masked | reactive-masked | floquet | pattern", &C::kind),
      skey("problem", "epsilon", "--epsilon", "Helmholtz bound or 'inactive'", &C::epsilon),
      skey("problem", "helmholtz_sine", "--helmholtz-sine", "theta_r | theta_i", &C::helmholtz_sine),
      skey("problem", "masks", "--masks", "lo:hi:step:delta;... [deg, W/m^2]", &C::masks),
      skey("problem", "profile", "--profile", "profile csv for the pattern problem", &C::profile),
      dkey("pattern", "min", "--pattern-min", "first observation angle [deg]", &C::pattern_min),
      dkey("pattern", "max", "--pattern-max", "last observation angle [deg]", &C::pattern_max),
      dkey("pattern", "step", "--pattern-step", "observation step [deg]", &C::pattern_step),
      ikey("solver", "max_outer", "--max-outer", "outer iterations", &C::max_outer),
      ikey("solver", "max_inner", "--max-inner", "inner iterations per outer step", &C::max_inner),
      ikey("solver", "lbfgs_memory", "--lbfgs-memory", "quasi-Newton memory", &C::lbfgs_memory),
      dkey("solver", "mu0", "--mu0", "initial penalty", &C::mu0),
      dkey("solver", "mu_growth", "--mu-growth", "penalty growth factor", &C::mu_growth),
      dkey("solver", "feas_tol", "--feas-tol", "relative feasibility tolerance", &C::feas_tol),
      ikey("floquet", "samples_per_period", "--samples-per-period", "samples in one period", &C::samples_per_period),
      ikey("floquet", "n_max", "--n-max", "highest harmonic, -1 for default", &C::n_max),
      dkey("floquet", "theta_i_actual", "--theta-i-actual", "actual incidence [deg], negative: design",
           &C::theta_i_actual),
      skey("discrete", "alphabet", "--alphabet", "alphabet file", &C::alphabet),
      ikey("discrete", "cells_x", "--cells-x", "cells per row", &C::cells_x),
      ikey("discrete", "cells_y", "--cells-y", "cells per column", &C::cells_y),
      dkey("discrete", "cell_size", "--cell-size", "cell size [wavelengths]", &C::cell_size),
      dkey("discrete", "tx_distance", "--tx-distance", "transmitter distance [m]", &C::tx_distance),
      dkey("discrete", "tx_angle", "--tx-angle", "transmitter elevation [deg]", &C::tx_angle),
      dkey("discrete", "rx_distance", "--rx-distance", "receiver distance [m]", &C::rx_distance),
      dkey("discrete", "rx_angle", "--rx-angle", "receiver elevation [deg]", &C::rx_angle),
      dkey("discrete", "gain_tx", "--gain-tx", "transmit gain [linear]", &C::gain_tx),
      dkey("discrete", "gain_rx", "--gain-rx", "receive gain [linear]", &C::gain_rx),
      ikey("discrete", "sweeps", "--sweeps", "coordinate-ascent sweeps", &C::sweeps),
      skey("channel", "network", "--network", "impedance network file", &C::network),
      ikey("channel", "ris_elements", "--ris-elements", "RIS dipoles", &C::ris_elements),
      dkey("channel", "element_spacing", "--element-spacing", "RIS spacing [wavelengths]", &C::element_spacing),
      dkey("channel", "link_distance", "--link-distance", "Tx/Rx to RIS distance [wavelengths]", &C::link_distance),
      dkey("channel", "wire_radius", "--wire-radius", "wire radius [wavelengths]", &C::wire_radius),
      dkey("channel", "z_gen", "--z-gen", "generator resistance [ohm]", &C::z_gen),
      dkey("channel", "z_load", "--z-load", "load resistance [ohm]", &C::z_load),
      dkey("channel", "load_resistance", "--load-resistance", "tunable load resistance [ohm]", &C::load_resistance),
      dkey("channel", "reactance_min", "--reactance-min", "tunable reactance grid start [ohm]", &C::reactance_min),
      dkey("channel", "reactance_max", "--reactance-max", "tunable reactance grid end [ohm]", &C::reactance_max),
      dkey("channel", "reactance_step", "--reactance-step", "tunable reactance grid step [ohm]", &C::reactance_step),
      skey("output", "dir", "--out", "output directory", &C::out),
  };
}

std::optional<double> epsilon_of(const ExperimentConfig& c) {
  if (c.epsilon == "inactive" || c.epsilon == "none") return std::nullopt;
  return to_double("problem.epsilon", c.epsilon);
}

SineFactor sine_of(const ExperimentConfig& c) {
  if (c.helmholtz_sine == "theta_r") return SineFactor::ThetaR;
  if (c.helmholtz_sine == "theta_i") return SineFactor::ThetaI;
  throw Error(ErrorKind::Config, "problem.helmholtz_sine must be theta_r or theta_i");
}

SolverSettings solver_of(const ExperimentConfig& c) {
  SolverSettings s;
  s.max_outer = c.max_outer;
  s.max_inner = c.max_inner;
  s.lbfgs_memory = c.lbfgs_memory;
  s.mu0 = c.mu0;
  s.mu_growth = c.mu_growth;
  s.feas_tol = c.feas_tol;
  if (s.max_outer < 1 || s.max_inner < 1 || s.lbfgs_memory < 1 || !(s.mu0 > 0) || !(s.mu_growth >= 1) ||
      !(s.feas_tol > 0))
    throw Error(ErrorKind::Config, "solver settings out of range");
  return s;
}

json scenario_json(const ExperimentConfig& c) {
  json j;
  for (const auto& k : keys())
    if (k.section == "scenario") j[k.name] = to_double(k.name, k.get(c));
  return j;
}

json summary_json(const PatternSummary& s, const ReflectionProfile& r, const ScenarioGeometry& g,
                  const WaveEnvironment& env) {
  return {{"peak_angle_deg", rad2deg(s.peak_angle)},
          {"peak_db", to_db(s.peak)},
          {"receiver_w_per_m2", s.receiver},
          {"receiver_db", to_db(s.receiver)},
          {"specular_w_per_m2", s.specular},
          {"specular_db", to_db(s.specular)},
          {"peak_to_receiver_db", s.peak_to_receiver_db},
          {"receiver_to_specular_db", s.receiver_to_specular_db},
          {"global_flow_w", global_flow(r, g, env)},
          {"max_helmholtz", [&] {
             auto h = helmholtz_residual(r, g, env);
             return *std::max_element(h.begin(), h.end());
           }()}};
}

json solver_json(const SolveReport& r) {
  return {{"converged", r.converged},         {"objective", r.objective},
          {"iterations", r.iterations},       {"outer_iterations", r.outer_iterations},
          {"max_helmholtz", r.max_helmholtz}, {"max_mask_violation", r.max_mask_violation},
          {"wall_time_s", r.wall_time}};
}

void write_text(const fs::path& p, const std::function<void(std::ostream&)>& body) {
  std::ofstream os(p);
  if (!os) throw Error(ErrorKind::Config, "cannot write " + p.string());
  body(os);
}

struct CompareRow {
  std::string metric;
  double a, b;
  bool ratio;
};

void write_compare(const fs::path& p, const std::string& la, const std::string& lb, const json& a,
                   const json& b) {
  std::vector<CompareRow> rows{
      {"receiver_flux_db", a["receiver_db"], b["receiver_db"], true},
      {"specular_flux_db", a["specular_db"], b["specular_db"], true},
      {"peak_angle_deg", a["peak_angle_deg"], b["peak_angle_deg"], false},
      {"peak_to_receiver_db", a["peak_to_receiver_db"], b["peak_to_receiver_db"], false},
      {"receiver_to_specular_db", a["receiver_to_specular_db"], b["receiver_to_specular_db"], false},
  };
  write_text(p, [&](std::ostream& os) {
    os << "# a=" << la << " b=" << lb << "\nmetric,a,b,a_over_b_db\n" << std::setprecision(10);
    for (const auto& r : rows) {
      os << r.metric << ',' << r.a << ',' << r.b << ',';
      if (r.ratio) os << r.a - r.b;
      os << '\n';
    }
  });
}

json write_design(const fs::path& dir, const std::string& stem, const SurfaceProfile& p, const ScenarioGeometry& g,
                  const WaveEnvironment& env, const std::vector<double>& grid) {
  ReflectionProfile r = reflection_of(p, env);
  PowerFluxPattern pat = radiation_pattern(r, g, env, grid);
  write_text(dir / (stem.empty() ? "pattern.csv" : stem + "_pattern.csv"),
             [&](std::ostream& os) { write_pattern_csv(os, pat); });
  write_text(dir / (stem.empty() ? "profile.csv" : stem + "_profile.csv"),
             [&](std::ostream& os) { write_profile_csv(os, p); });
  return summary_json(summarize(pat, r, g, env), r, g, env);
}

int run_sheet(const ExperimentConfig& cfg, std::ostream& log) {
  Scenario sc = scenario_of(cfg);
  const auto& env = sc.env;
  const auto& g = sc.geom;
  fs::path dir(cfg.out);
  fs::create_directories(dir);
  json rep;
  rep["scenario"] = scenario_json(cfg);
  rep["problem"] = cfg.kind;
  rep["n"] = g.n;
  rep["ly_snapped_m"] = g.ly;
  double fr = fraunhofer_distance(g, env);
  rep["fraunhofer_distance_m"] = fr;
  if (g.r_obs < fr) {
    rep["warnings"].push_back("observation distance below the Fraunhofer threshold");
    log << "warning: R_obs = " << g.r_obs << " m < Fraunhofer distance " << fr << " m\n";
  }
  auto grid = angle_grid_deg(cfg.pattern_min, cfg.pattern_max, cfg.pattern_step);
  int code = kOk;

  if (cfg.kind == "floquet") {
    double period = design_period(g.theta_i, g.theta_r, env.lambda);
    ReflectionProfile one;
    one.y = period_grid(period, cfg.samples_per_period);
    one.theta_i = g.theta_i;
    one.theta_r = g.theta_r;
    one.k = env.k;
    for (std::size_t i = 0; i < one.y.size(); ++i) one.gamma_s.push_back(one.geometric_phase(i));
    double ti = cfg.theta_i_actual < 0 ? g.theta_i : deg2rad(cfg.theta_i_actual);
    FloquetSpectrum fsp = floquet_spectrum(one, ti, env, cfg.n_max);
    write_text(dir / "floquet.csv", [&](std::ostream& os) {
      os << "n,abs_mu,ky_rad_per_m,propagating,theta_deg\n" << std::setprecision(12);
      for (std::size_t i = 0; i < fsp.index.size(); ++i) {
        os << fsp.index[i] << ',' << std::abs(fsp.mu[i]) << ',' << fsp.ky[i] << ',' << (fsp.propagating[i] ? 1 : 0)
           << ',';
        if (fsp.propagating[i]) os << rad2deg(fsp.theta[i]);
        os << '\n';
      }
    });
    rep["period_m"] = period;
    for (std::size_t i = 0; i < fsp.index.size(); ++i)
      if (fsp.propagating[i]) rep["modes_deg"].push_back(rad2deg(fsp.theta[i]));
    log << "floquet: " << fsp.propagating_count() << " propagating modes\n";
  } else if (cfg.kind == "pattern") {
    if (cfg.profile.empty()) throw Error(ErrorKind::Config, "pattern problem needs problem.profile");
    std::ifstream is(cfg.profile);
    if (!is) throw Error(ErrorKind::Config, "cannot open profile " + cfg.profile);
    SurfaceProfile p = read_profile_csv(is, g.theta_i, g.theta_r);
    if (static_cast<int>(p.size()) != g.n) throw Error(ErrorKind::Config, "profile length does not match scenario");
    rep["summary"] = write_design(dir, "", p, g, env, grid);
  } else {
    GoSolution go = go_profile(g, env);
    json go_sum = write_design(dir, cfg.kind == "go" ? "" : "go", go.profile, g, env, grid);
    rep["go"] = go_sum;
    if (go.clipped) rep["go_clipped_samples"] = go.clipped;
    if (cfg.kind == "go") {
      rep["summary"] = go_sum;
      log << "go: receiver " << go_sum["receiver_db"].get<double>() << " dB, specular "
          << go_sum["specular_db"].get<double>() << " dB\n";
    } else {
      bool masked = cfg.kind == "global-masked" || cfg.kind == "reactive-masked";
      bool reactive = cfg.kind == "reactive" || cfg.kind == "reactive-masked";
      if (!masked && !reactive && cfg.kind != "global")
        throw Error(ErrorKind::Config, "unknown problem kind '" + cfg.kind + "'");
      DesignProblem prob;
      prob.objective = ObjectiveKind::GlobalFlow;
      prob.epsilon = epsilon_of(cfg);
      prob.masks = parse_masks(cfg.masks);
      if (masked && prob.masks.empty()) prob.masks.push_back(specular_mask());
      prob.init = go.profile;
      prob.solver = solver_of(cfg);
      prob.sine = sine_of(cfg);
      SolveReport glo = solve_global(prob, g, env);
      json glo_sum = write_design(dir, reactive ? "global" : "", glo.profile, g, env, grid);
      rep["global"] = glo_sum;
      rep["global_solver"] = solver_json(glo);
      write_compare(dir / (reactive ? "compare_global_go.csv" : "compare.csv"), "global", "go", glo_sum, go_sum);
      log << "global: receiver " << glo_sum["receiver_db"].get<double>() << " dB ("
          << glo_sum["receiver_db"].get<double>() - go_sum["receiver_db"].get<double>() << " dB over go)\n";
      json final_sum = glo_sum;
      bool conv = glo.converged;
      if (reactive) {
        DesignProblem rp = prob;
        rp.objective = ObjectiveKind::FluxMatch;
        rp.reactive = true;
        rp.reference = glo.profile;
        rp.init = zero_real_part(glo.profile);
        SolveReport rea = solve_reactive(rp, g, env);
        json rea_sum = write_design(dir, "", rea.profile, g, env, grid);
        rep["reactive_solver"] = solver_json(rea);
        write_compare(dir / "compare.csv", "reactive", "global", rea_sum, glo_sum);
        log << "reactive: receiver " << rea_sum["receiver_db"].get<double>() << " dB (loss "
            << glo_sum["receiver_db"].get<double>() - rea_sum["receiver_db"].get<double>() << " dB)\n";
        final_sum = rea_sum;
        conv = conv && rea.converged;
      }
      rep["summary"] = final_sum;
      rep["converged"] = conv;
      if (!conv) {
        log << "solver did not converge\n";
        code = kNonConvergence;
      }
    }
  }
  write_text(dir / "report.json", [&](std::ostream& os) { os << std::setw(2) << rep << '\n'; });
  return code;
}

DiscreteLinkGeometry link_of(const ExperimentConfig& c) {
  DiscreteLinkGeometry l;
  double at = deg2rad(c.tx_angle), ar = deg2rad(c.rx_angle);
  l.tx = {0.0, -c.tx_distance * std::sin(at), c.tx_distance * std::cos(at)};
  l.rx = {0.0, c.rx_distance * std::sin(ar), c.rx_distance * std::cos(ar)};
  l.g_tx = c.gain_tx;
  l.g_rx = c.gain_rx;
  return l;
}

int run_discrete(const ExperimentConfig& cfg, std::ostream& log) {
  WaveEnvironment env = WaveEnvironment::make(cfg.frequency, cfg.p0, cfg.eta0, cfg.light_speed);
  RisAlphabet alpha;
  if (cfg.alphabet.empty()) {
    alpha.reflection = {{0.9, AmplitudeUnit::Linear, 165.0}, {0.7, AmplitudeUnit::Linear, 0.0}};
  } else {
    std::ifstream is(cfg.alphabet);
    if (!is) throw Error(ErrorKind::Config, "cannot open alphabet " + cfg.alphabet);
    alpha = read_alphabet(is);
  }
  auto ris = DiscreteRisConfiguration::uniform(cfg.cells_x, cfg.cells_y, cfg.cell_size * env.lambda,
                                               cfg.cell_size * env.lambda);
  auto link = link_of(cfg);
  double p_init = received_power(link, ris, alpha, env);
  auto opt = optimize_alphabet(link, ris, alpha, env, cfg.sweeps);
  fs::path dir(cfg.out);
  fs::create_directories(dir);
  write_text(dir / "states.csv", [&](std::ostream& os) {
    for (int i = 0; i < opt.config.m; ++i) {
      for (int j = 0; j < opt.config.n; ++j) os << (j ? "," : "") << opt.config.at(i, j);
      os << '\n';
    }
  });
  json rep{{"problem", "discrete"},
           {"initial_power_ratio", p_init},
           {"optimized_power_ratio", opt.power},
           {"gain_db", to_db(opt.power / p_init)},
           {"sweeps", opt.sweeps},
           {"trace", opt.trace}};
  write_text(dir / "report.json", [&](std::ostream& os) { os << std::setw(2) << rep << '\n'; });
  log << "discrete: P_Rx/P_Tx " << to_db(p_init) << " dB -> " << to_db(opt.power) << " dB\n";
  return kOk;
}

int run_channel(const ExperimentConfig& cfg, std::ostream& log) {
  WaveEnvironment env = WaveEnvironment::make(cfg.frequency, cfg.p0, cfg.eta0, cfg.light_speed);
  ImpedanceNetwork net;
  if (!cfg.network.empty()) {
    std::ifstream is(cfg.network);
    if (!is) throw Error(ErrorKind::Config, "cannot open network " + cfg.network);
    net = read_network(is);
  } else {
    const double lam = env.lambda;
    auto dip = [&](double x, double y) { return Dipole{{x * lam, y * lam, 0.0}, 0.5 * lam, cfg.wire_radius * lam}; };
    std::vector<Dipole> ris;
    for (int i = 0; i < cfg.ris_elements; ++i)
      ris.push_back(dip(0.0, (i - (cfg.ris_elements - 1) / 2.0) * cfg.element_spacing));
    net = build_network({dip(-cfg.link_distance, cfg.link_distance)}, ris, {dip(cfg.link_distance, cfg.link_distance)},
                        env, cfg.z_gen, cfg.z_load, cplx(cfg.load_resistance, 0.0));
  }
  std::vector<cplx> cands;
  long cnt = std::lround((cfg.reactance_max - cfg.reactance_min) / cfg.reactance_step);
  for (long i = 0; i <= cnt; ++i)
    cands.emplace_back(cfg.load_resistance, cfg.reactance_min + cfg.reactance_step * static_cast<double>(i));
  fs::path dir(cfg.out);
  fs::create_directories(dir);
  write_text(dir / "network.txt", [&](std::ostream& os) { write_network(os, net); });
  json rep{{"problem", "channel"}};
  CMat h0 = end_to_end_channel(net);
  rep["h_initial"] = {h0(0, 0).real(), h0(0, 0).imag()};
  if (net.m0() == 1 && net.l0() == 1) {
    auto opt = optimize_tunable_loads(net, cands, cfg.sweeps);
    net.set_tunable(opt.loads);
    FarFieldChannel ff = far_field_channel(net);
    rep["gain_optimized"] = opt.gain;
    rep["gain_initial"] = std::abs(h0(0, 0));
    rep["far_field_gain"] = std::abs(ff.total()(0, 0));
    for (const auto& l : opt.loads) rep["loads"].push_back({l.real(), l.imag()});
    log << "channel: |H| " << std::abs(h0(0, 0)) << " -> " << opt.gain << '\n';
  }
  write_text(dir / "report.json", [&](std::ostream& os) { os << std::setw(2) << rep << '\n'; });
  return kOk;
}

json read_report(const std::string& dir) {
  std::ifstream is(fs::path(dir) / "report.json");
  if (!is) throw Error(ErrorKind::Config, "no report.json in " + dir);
  try {
    return json::parse(is);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Config, std::string("bad report.json: ") + e.what());
  }
}

}  // namespace

const std::vector<Key>& keys() {
  static const std::vector<Key> k = make_keys();
  return k;
}

void apply(ExperimentConfig& cfg, const std::string& fullname, const std::string& value) {
  for (const auto& k : keys())
    if (k.section + "." + k.name == fullname) {
      k.set(cfg, value);
      return;
    }
  throw Error(ErrorKind::Config, "config: unknown key '" + fullname + "'");
}

void load_ini(ExperimentConfig& cfg, std::istream& is) {
  std::vector<CLI::ConfigItem> items;
  try {
    items = CLI::ConfigINI().from_config(is);
  } catch (const CLI::Error& e) {
    throw Error(ErrorKind::Config, std::string("config: ") + e.what());
  }
  for (const auto& it : items) {
    if (it.name == "++" || it.name == "--") continue;
    if (it.inputs.size() != 1) throw Error(ErrorKind::Config, "config: '" + it.fullname() + "' needs one value");
    apply(cfg, it.fullname(), it.inputs.front());
  }
}

void dump_ini(std::ostream& os, const ExperimentConfig& cfg) {
  std::string sec;
  for (const auto& k : keys()) {
    if (k.section != sec) {
      os << (sec.empty() ? "" : "\n") << '[' << k.section << "]\n";
      sec = k.section;
    }
    os << "# " << k.help << '\n' << k.name << " = \"" << k.get(cfg) << "\"\n";
  }
}

bool same(const ExperimentConfig& a, const ExperimentConfig& b) {
  for (const auto& k : keys())
    if (k.get(a) != k.get(b)) return false;
  return true;
}

Scenario scenario_of(const ExperimentConfig& c) {
  Scenario s;
  s.env = WaveEnvironment::make(c.frequency, c.p0, c.eta0, c.light_speed);
  if (!(c.samples_per_lambda > 0)) throw Error(ErrorKind::Config, "samples_per_lambda must be positive");
  s.geom = ScenarioGeometry::make(deg2rad(c.theta_i), deg2rad(c.theta_r), c.lx, c.ly,
                                  s.env.lambda / c.samples_per_lambda, c.r_rx, c.r_obs);
  return s;
}

std::vector<MaskSector> parse_masks(const std::string& s) {
  std::vector<MaskSector> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ';')) {
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    std::replace(item.begin(), item.end(), ':', ' ');
    std::istringstream is(item);
    double lo, hi, step, delta;
    std::string rest;
    if (!(is >> lo >> hi >> step >> delta) || (is >> rest))
      throw Error(ErrorKind::Config, "mask sector must be lo:hi:step:delta");
    if (!(hi > lo) || !(step > 0) || !(delta > 0)) throw Error(ErrorKind::Config, "mask sector out of range");
    out.push_back({deg2rad(lo), deg2rad(hi), deg2rad(step), delta});
  }
  return out;
}

int run(const ExperimentConfig& cfg, std::ostream& log) {
  if (cfg.model == "discrete") return run_discrete(cfg, log);
  if (cfg.model == "coupled") return run_channel(cfg, log);
  if (cfg.model != "sheet") throw Error(ErrorKind::Config, "unknown model '" + cfg.model + "'");
  return run_sheet(cfg, log);
}

int compare(const std::string& dir_a, const std::string& dir_b, const std::string& out_dir, std::ostream& log) {
  json a = read_report(dir_a), b = read_report(dir_b);
  json sa = a["scenario"], sb = b["scenario"];
  if (!sa.is_null() || !sb.is_null()) {
    if (sa != sb) throw Error(ErrorKind::Config, "compare: reports do not share a scenario");
  }
  if (!a.contains("summary") || !b.contains("summary"))
    throw Error(ErrorKind::Config, "compare: reports lack a pattern summary");
  fs::create_directories(out_dir);
  write_compare(fs::path(out_dir) / "compare.csv", dir_a, dir_b, a["summary"], b["summary"]);
  log << "compare: receiver ratio "
      << a["summary"]["receiver_db"].get<double>() - b["summary"]["receiver_db"].get<double>() << " dB\n";
  return kOk;
}

int main(int argc, char** argv) {
  CLI::App app{"RIS surface-impedance toolkit"};
  app.require_subcommand(1);
  ExperimentConfig cfg;
  std::map<std::string, std::string> flag_values;
  std::string config_path;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "INI configuration file");
    for (const auto& k : keys()) sub->add_option(k.flag, flag_values[k.section + "." + k.name], k.help);
  };
  struct Sub {
    const char* name;
    const char* help;
    const char* model;
    const char* kind;
  };
  const Sub subs[] = {{"run", "run the configured experiment", nullptr, nullptr},
                      {"go", "geometrical-optics baseline", "sheet", "go"},
                      {"optimize", "global/reactive design (set --problem)", "sheet", nullptr},
                      {"floquet", "Floquet mode table", "sheet", "floquet"},
                      {"pattern", "radiation pattern of a profile file", "sheet", "pattern"},
                      {"discrete", "discrete alphabet optimization", "discrete", nullptr},
                      {"channel", "coupled-dipole channel and load optimization", "coupled", nullptr}};
  std::vector<CLI::App*> run_subs;
  for (const auto& s : subs) {
    auto* sub = app.add_subcommand(s.name, s.help);
    add_common(sub);
    run_subs.push_back(sub);
  }
  auto* cmp = app.add_subcommand("compare", "compare two run directories");
  std::string dir_a, dir_b, cmp_out;
  cmp->add_option("a", dir_a, "first run directory")->required();
  cmp->add_option("b", dir_b, "second run directory")->required();
  cmp->add_option("--out", cmp_out, "output directory (default: first run)");
  auto* dump = app.add_subcommand("dump-defaults", "print the default configuration");
  add_common(dump);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kConfigError;
  }

  try {
    if (cmp->parsed()) return compare(dir_a, dir_b, cmp_out.empty() ? dir_a : cmp_out, std::cout);
    const Sub* chosen = nullptr;
    for (std::size_t i = 0; i < run_subs.size(); ++i)
      if (run_subs[i]->parsed()) chosen = &subs[i];
    if (chosen) {
      if (chosen->model) cfg.model = chosen->model;
      if (chosen->kind) cfg.kind = chosen->kind;
      if (std::string(chosen->name) == "optimize") cfg.kind = "global";
    }
    if (!config_path.empty()) {
      std::ifstream is(config_path);
      if (!is) throw Error(ErrorKind::Config, "cannot open config " + config_path);
      load_ini(cfg, is);
    }
    for (const auto& [key, val] : flag_values)
      if (!val.empty()) apply(cfg, key, val);
    if (chosen && chosen->model) cfg.model = chosen->model;
    if (chosen && chosen->kind) cfg.kind = chosen->kind;
    if (dump->parsed()) {
      dump_ini(std::cout, cfg);
      return kOk;
    }
    return run(cfg, std::cout);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.kind() == ErrorKind::Config ? kConfigError : kNumericalFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumericalFailure;
  }
}

}  // namespace ris::cli
