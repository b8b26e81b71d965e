// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace ris {

enum class ErrorKind {
  Config,
  DegenerateGeometry,
  SingularNetwork,
  ResonantDenominator,
  OpenBoundary,
  PeriodMismatch,
  UnsupportedGeometry,
  NonConvergence,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Singular matrix with the offending condition estimate attached.
class SingularNetworkError : public Error {
 public:
  SingularNetworkError(const std::string& what, double cond)
      : Error(ErrorKind::SingularNetwork, what + " (cond ~ " + std::to_string(cond) + ")"), cond_(cond) {}
  double condition() const noexcept { return cond_; }

 private:
  double cond_;
};

}  // namespace ris
