// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <vector>

#include "ris/wavecore.hpp"

namespace ris {

enum class AmplitudeUnit { Linear, Decibel };

struct AlphabetEntry {
  double amplitude = 1;
  AmplitudeUnit unit = AmplitudeUnit::Linear;
  double phase_deg = 0;

  cplx value() const;  // dB amplitudes are field ratios: 10^(dB/20)
};

struct RisAlphabet {
  std::vector<AlphabetEntry> reflection;
  std::vector<AlphabetEntry> transmission;  // parsed, unused by the received-power model

  std::size_t size() const { return reflection.size(); }
  cplx gamma(std::size_t s) const { return reflection.at(s).value(); }
};

// One record per line: amplitude unit phase_deg [t_amplitude t_unit t_phase_deg].
// '#' starts a comment; unit is "linear" or "dB".
RisAlphabet read_alphabet(std::istream& is);
void write_alphabet(std::ostream& os, const RisAlphabet& a);

struct DiscreteRisConfiguration {
  int m = 1;  // cells per row (x)
  int n = 1;  // cells per column (y)
  double dx = 0;
  double dy = 0;
  std::vector<int> state;  // row-major m x n indices into the alphabet

  static DiscreteRisConfiguration uniform(int m, int n, double dx, double dy, int s = 0);
  int& at(int i, int j) { return state[static_cast<std::size_t>(i) * n + j]; }
  int at(int i, int j) const { return state[static_cast<std::size_t>(i) * n + j]; }
  Vec3 center(int i, int j) const;  // 0-based, RIS centred at the origin
};

struct DiscreteLinkGeometry {
  Vec3 tx{0, 0, 1};
  Vec3 rx{0, 0, 1};
  double g_tx = 1;
  double g_rx = 1;
};

// 0-based indices.
double cell_gain_factor(const DiscreteLinkGeometry& link, const DiscreteRisConfiguration& ris, int i, int j);

// P_Rx / P_Tx.
double received_power(const DiscreteLinkGeometry& link, const DiscreteRisConfiguration& ris,
                      const RisAlphabet& alphabet, const WaveEnvironment& env);

struct AlphabetOptimum {
  DiscreteRisConfiguration config;
  double power = 0;
  int sweeps = 0;
  std::vector<double> trace;  // power after each sweep
};

AlphabetOptimum optimize_alphabet(const DiscreteLinkGeometry& link, const DiscreteRisConfiguration& ris,
                                  const RisAlphabet& alphabet, const WaveEnvironment& env, int sweeps);

}  // namespace ris
