// SPDX-License-Identifier: Apache-2.0
#include "ris/coupled_channel.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <algorithm>
#include <cmath>
#include <functional>
#include <iomanip>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include "ris/errors.hpp"

namespace ris {

namespace {

bool is_z_directed(const Vec3& o) {
  double n = std::sqrt(o[0] * o[0] + o[1] * o[1] + o[2] * o[2]);
  return n > 0 && std::abs(o[0]) <= 1e-12 * n && std::abs(o[1]) <= 1e-12 * n;
}

void check_dipole(const Dipole& d) {
  if (!(d.length > 0) || !(d.radius > 0)) throw Error(ErrorKind::Config, "dipole: length and radius must be positive");
  if (!(d.radius < d.length / 50.0)) throw Error(ErrorKind::Config, "dipole: radius must be < length/50");
  if (!is_z_directed(d.orientation))
    throw Error(ErrorKind::UnsupportedGeometry, "dipole: only z-directed parallel dipoles are supported");
}

double integrate(const std::function<double(double)>& f, const std::vector<double>& pts) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  double s = 0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) s += GK::integrate(f, pts[i], pts[i + 1], 15, 1e-10);
  return s;
}

double condition_number(const CMat& a) {
  Eigen::JacobiSVD<CMat> svd(a);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0) return 0;
  double lo = sv(sv.size() - 1);
  return lo > 0 ? sv(0) / lo : std::numeric_limits<double>::infinity();
}

CMat diag_inverse(const CMat& d, const char* what) {
  CMat out = CMat::Zero(d.rows(), d.cols());
  for (Eigen::Index i = 0; i < d.rows(); ++i) {
    if (std::abs(d(i, i)) == 0) throw SingularNetworkError(std::string(what) + ": zero diagonal load", std::numeric_limits<double>::infinity());
    out(i, i) = 1.0 / d(i, i);
  }
  return out;
}

void write_block(std::ostream& os, const char* name, const CMat& m) {
  os << '[' << name << ' ' << m.rows() << ' ' << m.cols() << "]\n";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      os << (j ? " " : "") << m(i, j).real() << ',' << m(i, j).imag();
    os << '\n';
  }
}

}  // namespace

void ImpedanceNetwork::validate() const {
  auto shape = [](const CMat& m, Eigen::Index r, Eigen::Index c, const char* name) {
    if (m.rows() != r || m.cols() != c)
      throw Error(ErrorKind::Config, std::string("impedance network: block ") + name + " has wrong shape");
  };
  auto diag = [](const CMat& m, const char* name) {
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j)
        if (i != j && m(i, j) != cplx(0))
          throw Error(ErrorKind::Config, std::string("impedance network: ") + name + " must be diagonal");
  };
  const auto a = m0(), b = p(), c = l0();
  shape(ztt, a, a, "ztt");
  shape(zts, a, b, "zts");
  shape(ztr, a, c, "ztr");
  shape(zst, b, a, "zst");
  shape(zss, b, b, "zss");
  shape(zsr, b, c, "zsr");
  shape(zrt, c, a, "zrt");
  shape(zrs, c, b, "zrs");
  shape(zrr, c, c, "zrr");
  shape(zt, a, a, "zt");
  shape(zr, c, c, "zr");
  shape(ztun, b, b, "ztun");
  diag(zt, "zt");
  diag(zr, "zr");
  diag(ztun, "ztun");
}

void ImpedanceNetwork::set_tunable(const std::vector<cplx>& loads) {
  if (static_cast<Eigen::Index>(loads.size()) != p()) throw Error(ErrorKind::Config, "set_tunable: wrong count");
  ztun = CMat::Zero(p(), p());
  for (Eigen::Index i = 0; i < p(); ++i) ztun(i, i) = loads[static_cast<std::size_t>(i)];
}

cplx mutual_impedance(const Dipole& a, const Dipole& b, const WaveEnvironment& env) {
  check_dipole(a);
  check_dipole(b);
  const double k = env.k;
  const double h1 = a.length / 2, h2 = b.length / 2;
  double rho = std::hypot(b.pos[0] - a.pos[0], b.pos[1] - a.pos[1]);
  rho = std::max(rho, std::max(a.radius, b.radius));
  const double dz = b.pos[2] - a.pos[2];
  const double s1 = std::sin(k * h1), s2 = std::sin(k * h2);
  if (std::abs(s1) < 1e-9 || std::abs(s2) < 1e-9)
    throw Error(ErrorKind::UnsupportedGeometry, "dipole: base current vanishes (length multiple of a wavelength)");
  const double c1 = std::cos(k * h1);
  // field of a at (rho, u) along b, t is the coordinate on b
  auto kernel = [&](double t) {
    double u = dz + t;
    double r0 = std::sqrt(rho * rho + u * u);
    double r1 = std::sqrt(rho * rho + (u - h1) * (u - h1));
    double r2 = std::sqrt(rho * rho + (u + h1) * (u + h1));
    cplx e = std::polar(1.0 / r1, -k * r1) + std::polar(1.0 / r2, -k * r2) - 2.0 * c1 * std::polar(1.0 / r0, -k * r0);
    return std::sin(k * (h2 - std::abs(t))) * e;
  };
  std::vector<double> pts{-h2, h2, 0.0};
  for (double c : {-dz, -dz - h1, -dz + h1})
    if (c > -h2 && c < h2) pts.push_back(c);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  double re = integrate([&](double t) { return kernel(t).real(); }, pts);
  double im = integrate([&](double t) { return kernel(t).imag(); }, pts);
  return cplx(0, env.eta0 / (4.0 * kPi)) * cplx(re, im) / (s1 * s2);
}

CMat impedance_block(const std::vector<Dipole>& rows, const std::vector<Dipole>& cols, const WaveEnvironment& env) {
  CMat m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) m(i, j) = mutual_impedance(rows[i], cols[j], env);
  return m;
}

ImpedanceNetwork build_network(const std::vector<Dipole>& tx, const std::vector<Dipole>& ris,
                               const std::vector<Dipole>& rx, const WaveEnvironment& env, cplx z_gen, cplx z_load,
                               cplx z_tun) {
  // one integral per unordered pair, mirrored for reciprocity
  std::vector<Dipole> all;
  all.insert(all.end(), tx.begin(), tx.end());
  all.insert(all.end(), ris.begin(), ris.end());
  all.insert(all.end(), rx.begin(), rx.end());
  const auto n = static_cast<Eigen::Index>(all.size());
  CMat z(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i; j < n; ++j) {
      z(i, j) = mutual_impedance(all[i], all[j], env);
      z(j, i) = z(i, j);
    }
  const auto a = static_cast<Eigen::Index>(tx.size()), b = static_cast<Eigen::Index>(ris.size()),
             c = static_cast<Eigen::Index>(rx.size());
  ImpedanceNetwork net;
  net.ztt = z.block(0, 0, a, a);
  net.zts = z.block(0, a, a, b);
  net.ztr = z.block(0, a + b, a, c);
  net.zst = z.block(a, 0, b, a);
  net.zss = z.block(a, a, b, b);
  net.zsr = z.block(a, a + b, b, c);
  net.zrt = z.block(a + b, 0, c, a);
  net.zrs = z.block(a + b, a, c, b);
  net.zrr = z.block(a + b, a + b, c, c);
  net.zt = CMat::Identity(a, a) * z_gen;
  net.zr = CMat::Identity(c, c) * z_load;
  net.ztun = CMat::Identity(b, b) * z_tun;
  return net;
}

CMat checked_solve(const CMat& a, const CMat& b, const char* what) {
  double cond = condition_number(a);
  if (!(cond <= kMaxCondition)) throw SingularNetworkError(std::string(what) + ": singular matrix", cond);
  return a.partialPivLu().solve(b);
}

PsiMatrices psi_matrices(const ImpedanceNetwork& net) {
  net.validate();
  const CMat a = net.zss + net.ztun;
  const CMat st = checked_solve(a, net.zst, "Zss + Ztun");
  const CMat sr = checked_solve(a, net.zsr, "Zss + Ztun");
  PsiMatrices p;
  p.tt = net.ztt - net.zts * st;
  p.tr = net.ztr - net.zts * sr;
  p.rt = net.zrt - net.zrs * st;
  p.rr = net.zrr - net.zrs * sr;
  return p;
}

CMat end_to_end_channel(const ImpedanceNetwork& net) {
  const PsiMatrices p = psi_matrices(net);
  const CMat zr_inv = diag_inverse(net.zr, "Zr");
  const CMat a = p.tt + net.zt;
  const CMat a_inv = checked_solve(a, CMat::Identity(a.rows(), a.cols()), "Psi_tt + Zt");
  const CMat rt_a = p.rt * a_inv;
  const CMat m = CMat::Identity(net.l0(), net.l0()) + p.rr * zr_inv - rt_a * p.tr * zr_inv;
  return checked_solve(m, rt_a, "receiver coupling");
}

FarFieldChannel far_field_channel(const ImpedanceNetwork& net) {
  net.validate();
  const CMat zr_inv = diag_inverse(net.zr, "Zr");
  const CMat left = CMat::Identity(net.l0(), net.l0()) + net.zrr * zr_inv;
  const CMat tx = checked_solve(net.ztt + net.zt, CMat::Identity(net.m0(), net.m0()), "Ztt + Zt");
  const CMat s = checked_solve(net.zss + net.ztun, net.zst, "Zss + Ztun");
  FarFieldChannel h;
  h.direct = checked_solve(left, net.zrt * tx, "I + Zrr Zr^-1");
  h.ris = checked_solve(left, -(net.zrs * s) * tx, "I + Zrr Zr^-1");
  return h;
}

LoadOptimum optimize_tunable_loads(const ImpedanceNetwork& net, const std::vector<cplx>& candidates, int sweeps) {
  net.validate();
  if (net.m0() != 1 || net.l0() != 1) throw Error(ErrorKind::Config, "optimize_tunable_loads: needs M0 = L0 = 1");
  if (candidates.empty() || sweeps < 1) throw Error(ErrorKind::Config, "optimize_tunable_loads: empty candidate set");
  const auto p = static_cast<std::size_t>(net.p());
  std::vector<std::size_t> idx(p, 0);
  ImpedanceNetwork work = net;
  auto gain = [&](const std::vector<std::size_t>& sel) {
    std::vector<cplx> loads(p);
    for (std::size_t i = 0; i < p; ++i) loads[i] = candidates[sel[i]];
    work.set_tunable(loads);
    try {
      return std::abs(end_to_end_channel(work)(0, 0));
    } catch (const SingularNetworkError&) {
      return -std::numeric_limits<double>::infinity();
    }
  };
  double best = gain(idx);
  LoadOptimum out;
  for (int sw = 0; sw < sweeps; ++sw) {
    bool changed = false;
    for (std::size_t e = 0; e < p; ++e) {
      std::size_t keep = idx[e];
      for (std::size_t c = 0; c < candidates.size(); ++c) {
        if (c == keep) continue;
        auto trial = idx;
        trial[e] = c;
        double g = gain(trial);
        if (g > best) {
          best = g;
          idx = trial;
          changed = true;
        }
      }
    }
    out.sweeps = sw + 1;
    if (!changed) break;
  }
  for (std::size_t i = 0; i < p; ++i) out.loads.push_back(candidates[idx[i]]);
  out.gain = best;
  return out;
}

void write_network(std::ostream& os, const ImpedanceNetwork& net) {
  os << std::setprecision(17);
  write_block(os, "ztt", net.ztt);
  write_block(os, "zts", net.zts);
  write_block(os, "ztr", net.ztr);
  write_block(os, "zst", net.zst);
  write_block(os, "zss", net.zss);
  write_block(os, "zsr", net.zsr);
  write_block(os, "zrt", net.zrt);
  write_block(os, "zrs", net.zrs);
  write_block(os, "zrr", net.zrr);
  write_block(os, "zt", net.zt);
  write_block(os, "zr", net.zr);
  write_block(os, "ztun", net.ztun);
}

ImpedanceNetwork read_network(std::istream& is) {
  std::map<std::string, CMat> blocks;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (line[0] != '[') throw Error(ErrorKind::Config, "network file: expected block header, got: " + line);
    std::istringstream hs(line.substr(1, line.find(']') - 1));
    std::string name;
    Eigen::Index r = 0, c = 0;
    if (!(hs >> name >> r >> c) || r < 0 || c < 0) throw Error(ErrorKind::Config, "network file: bad header: " + line);
    CMat m(r, c);
    for (Eigen::Index i = 0; i < r; ++i) {
      if (!std::getline(is, line)) throw Error(ErrorKind::Config, "network file: truncated block " + name);
      std::istringstream ls(line);
      for (Eigen::Index j = 0; j < c; ++j) {
        std::string tok;
        double re, im;
        char comma;
        if (!(ls >> tok)) throw Error(ErrorKind::Config, "network file: short row in " + name);
        std::istringstream ts(tok);
        if (!(ts >> re >> comma >> im) || comma != ',')
          throw Error(ErrorKind::Config, "network file: bad entry '" + tok + "' in " + name);
        m(i, j) = cplx(re, im);
      }
    }
    blocks[name] = m;
  }
  auto get = [&](const char* n) {
    auto it = blocks.find(n);
    if (it == blocks.end()) throw Error(ErrorKind::Config, std::string("network file: missing block ") + n);
    return it->second;
  };
  ImpedanceNetwork net{get("ztt"), get("zts"), get("ztr"), get("zst"), get("zss"), get("zsr"),
                       get("zrt"), get("zrs"), get("zrr"), get("zt"),  get("zr"),  get("ztun")};
  net.validate();
  return net;
}

}  // namespace ris
