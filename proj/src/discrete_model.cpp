// SPDX-License-Identifier: Apache-2.0
#include "ris/discrete_model.hpp"

#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "ris/errors.hpp"

namespace ris {

namespace {

double dist(const Vec3& a, const Vec3& b) {
  double dx = a[0] - b[0], dy = a[1] - b[1], dz = a[2] - b[2];
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

AmplitudeUnit parse_unit(const std::string& s) {
  if (s == "linear" || s == "lin") return AmplitudeUnit::Linear;
  if (s == "dB" || s == "db") return AmplitudeUnit::Decibel;
  throw Error(ErrorKind::Config, "alphabet: unknown amplitude unit '" + s + "'");
}

const char* unit_name(AmplitudeUnit u) { return u == AmplitudeUnit::Linear ? "linear" : "dB"; }

void check_link(const DiscreteLinkGeometry& link) {
  if (!(link.tx[2] > 0) || !(link.rx[2] > 0))
    throw Error(ErrorKind::DegenerateGeometry, "discrete link: transmitter and receiver need z > 0");
}

// sum_{m,n} sqrt(F) Gamma exp(-jk(rt + rr)) / (rt rr) for one cell
cplx cell_term(const DiscreteLinkGeometry& link, const DiscreteRisConfiguration& ris, int i, int j, cplx g,
               double k) {
  Vec3 c = ris.center(i, j);
  double rt = dist(link.tx, c), rr = dist(link.rx, c);
  double f = cell_gain_factor(link, ris, i, j);
  // path length relative to the centre path; the common phase drops out of |sum|^2
  auto excess = [&](const Vec3& p, double r) {
    double c2 = c[0] * c[0] + c[1] * c[1] + c[2] * c[2];
    double pc = p[0] * c[0] + p[1] * c[1] + p[2] * c[2];
    return (c2 - 2.0 * pc) / (r + std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]));
  };
  return std::sqrt(f) * g * std::polar(1.0, -k * (excess(link.tx, rt) + excess(link.rx, rr))) / (rt * rr);
}

}  // namespace

cplx AlphabetEntry::value() const {
  double a = unit == AmplitudeUnit::Linear ? amplitude : std::pow(10.0, amplitude / 20.0);
  return std::polar(a, deg2rad(phase_deg));
}

RisAlphabet read_alphabet(std::istream& is) {
  RisAlphabet a;
  std::string line;
  while (std::getline(is, line)) {
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::istringstream ls(line);
    AlphabetEntry e;
    std::string unit;
    if (!(ls >> e.amplitude)) continue;
    if (!(ls >> unit >> e.phase_deg)) throw Error(ErrorKind::Config, "alphabet: malformed record: " + line);
    e.unit = parse_unit(unit);
    if (e.unit == AmplitudeUnit::Linear && e.amplitude < 0)
      throw Error(ErrorKind::Config, "alphabet: negative linear amplitude");
    a.reflection.push_back(e);
    AlphabetEntry t;
    if (ls >> t.amplitude >> unit >> t.phase_deg) {
      t.unit = parse_unit(unit);
      a.transmission.push_back(t);
    }
  }
  if (a.reflection.empty()) throw Error(ErrorKind::Config, "alphabet: no entries");
  return a;
}

void write_alphabet(std::ostream& os, const RisAlphabet& a) {
  os << "# amplitude unit phase_deg [t_amplitude t_unit t_phase_deg]\n" << std::setprecision(17);
  for (std::size_t s = 0; s < a.reflection.size(); ++s) {
    const auto& e = a.reflection[s];
    os << e.amplitude << ' ' << unit_name(e.unit) << ' ' << e.phase_deg;
    if (s < a.transmission.size()) {
      const auto& t = a.transmission[s];
      os << ' ' << t.amplitude << ' ' << unit_name(t.unit) << ' ' << t.phase_deg;
    }
    os << '\n';
  }
}

DiscreteRisConfiguration DiscreteRisConfiguration::uniform(int m, int n, double dx, double dy, int s) {
  if (m < 1 || n < 1) throw Error(ErrorKind::Config, "discrete RIS: M and N must be >= 1");
  DiscreteRisConfiguration c;
  c.m = m;
  c.n = n;
  c.dx = dx;
  c.dy = dy;
  c.state.assign(static_cast<std::size_t>(m) * n, s);
  return c;
}

Vec3 DiscreteRisConfiguration::center(int i, int j) const {
  return {(i - (m - 1) / 2.0) * dx, (j - (n - 1) / 2.0) * dy, 0.0};
}

double cell_gain_factor(const DiscreteLinkGeometry& link, const DiscreteRisConfiguration& ris, int i, int j) {
  if (i < 0 || i >= ris.m || j < 0 || j >= ris.n) throw Error(ErrorKind::Config, "cell index out of range");
  check_link(link);
  const Vec3 origin{0, 0, 0};
  Vec3 c = ris.center(i, j);
  double rt = dist(link.tx, c), rr = dist(link.rx, c);
  double d0t = dist(link.tx, origin), d0r = dist(link.rx, origin);
  double d = dist(c, origin);
  if (rt <= 0 || rr <= 0 || d0t <= 0 || d0r <= 0)
    throw Error(ErrorKind::DegenerateGeometry, "cell_gain_factor: zero distance");
  double ct = (d0t * d0t + rt * rt - d * d) / (2.0 * d0t * rt);
  double cr = (d0r * d0r + rr * rr - d * d) / (2.0 * d0r * rr);
  return std::pow(ct, -1.0 + link.g_tx / 2.0) * (link.tx[2] / rt) * (link.rx[2] / rr) *
         std::pow(cr, -1.0 + link.g_rx / 2.0);
}

double received_power(const DiscreteLinkGeometry& link, const DiscreteRisConfiguration& ris,
                      const RisAlphabet& alphabet, const WaveEnvironment& env) {
  check_link(link);
  cplx acc = 0;
  for (int i = 0; i < ris.m; ++i)
    for (int j = 0; j < ris.n; ++j) {
      int s = ris.at(i, j);
      if (s < 0 || static_cast<std::size_t>(s) >= alphabet.size())
        throw Error(ErrorKind::Config, "state index outside the alphabet");
      acc += cell_term(link, ris, i, j, alphabet.gamma(s), env.k);
    }
  double a = ris.dx * ris.dy;
  return link.g_tx * link.g_rx * a * a / (16.0 * kPi * kPi) * std::norm(acc);
}

AlphabetOptimum optimize_alphabet(const DiscreteLinkGeometry& link, const DiscreteRisConfiguration& ris,
                                  const RisAlphabet& alphabet, const WaveEnvironment& env, int sweeps) {
  if (sweeps < 1) throw Error(ErrorKind::Config, "optimize_alphabet: sweeps must be >= 1");
  if (alphabet.size() < 1) throw Error(ErrorKind::Config, "optimize_alphabet: empty alphabet");
  AlphabetOptimum out;
  out.config = ris;
  auto& cfg = out.config;
  const int cells = ris.m * ris.n;
  // per-cell contributions without the state, so a single update is O(Sigma)
  std::vector<cplx> base(static_cast<std::size_t>(cells));
  cplx total = 0;
  for (int i = 0; i < ris.m; ++i)
    for (int j = 0; j < ris.n; ++j) {
      base[i * ris.n + j] = cell_term(link, ris, i, j, 1.0, env.k);
      total += base[i * ris.n + j] * alphabet.gamma(cfg.at(i, j));
    }
  for (int sw = 0; sw < sweeps; ++sw) {
    bool changed = false;
    for (int c = 0; c < cells; ++c) {
      int cur = cfg.state[c];
      cplx rest = total - base[c] * alphabet.gamma(cur);
      int best = cur;
      double best_val = std::norm(rest + base[c] * alphabet.gamma(cur));
      for (std::size_t s = 0; s < alphabet.size(); ++s) {
        double v = std::norm(rest + base[c] * alphabet.gamma(s));
        if (v > best_val) {
          best_val = v;
          best = static_cast<int>(s);
        }
      }
      if (best != cur) {
        cfg.state[c] = best;
        total = rest + base[c] * alphabet.gamma(best);
        changed = true;
      }
    }
    out.sweeps = sw + 1;
    out.trace.push_back(received_power(link, cfg, alphabet, env));
    if (!changed) break;
  }
  out.power = received_power(link, cfg, alphabet, env);
  return out;
}

}  // namespace ris
