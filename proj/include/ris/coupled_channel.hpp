// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <vector>

#include "ris/wavecore.hpp"

namespace ris {

using CMat = Eigen::MatrixXcd;

inline constexpr double kMaxCondition = 1e12;

struct ImpedanceNetwork {
  CMat ztt, zts, ztr;
  CMat zst, zss, zsr;
  CMat zrt, zrs, zrr;
  CMat zt, zr, ztun;  // diagonal

  Eigen::Index m0() const { return ztt.rows(); }
  Eigen::Index p() const { return zss.rows(); }
  Eigen::Index l0() const { return zrr.rows(); }

  // Throws ErrorKind::Config on inconsistent shapes or non-diagonal loads.
  void validate() const;
  void set_tunable(const std::vector<cplx>& loads);
};

struct Dipole {
  Vec3 pos{0, 0, 0};
  double length = 0;
  double radius = 0;
  Vec3 orientation{0, 0, 1};
};

// Induced-EMF mutual impedance of two parallel z-directed thin dipoles with
// sinusoidal currents. Self impedance when a and b coincide.
cplx mutual_impedance(const Dipole& a, const Dipole& b, const WaveEnvironment& env);

CMat impedance_block(const std::vector<Dipole>& rows, const std::vector<Dipole>& cols,
                     const WaveEnvironment& env);

ImpedanceNetwork build_network(const std::vector<Dipole>& tx, const std::vector<Dipole>& ris,
                               const std::vector<Dipole>& rx, const WaveEnvironment& env,
                               cplx z_gen = 50.0, cplx z_load = 50.0, cplx z_tun = 50.0);

struct PsiMatrices {
  CMat tt, tr, rt, rr;
};

PsiMatrices psi_matrices(const ImpedanceNetwork& net);
CMat end_to_end_channel(const ImpedanceNetwork& net);

struct FarFieldChannel {
  CMat direct;
  CMat ris;
  CMat total() const { return direct + ris; }
};

FarFieldChannel far_field_channel(const ImpedanceNetwork& net);

struct LoadOptimum {
  std::vector<cplx> loads;
  double gain = 0;  // |H|
  int sweeps = 0;
};

LoadOptimum optimize_tunable_loads(const ImpedanceNetwork& net, const std::vector<cplx>& candidates,
                                   int sweeps);

// Pivoted solve A X = B; throws SingularNetworkError when cond(A) > kMaxCondition.
CMat checked_solve(const CMat& a, const CMat& b, const char* what);

// Sections "[name rows cols]" followed by rows of "re,im" pairs separated by spaces.
void write_network(std::ostream& os, const ImpedanceNetwork& net);
ImpedanceNetwork read_network(std::istream& is);

}  // namespace ris
