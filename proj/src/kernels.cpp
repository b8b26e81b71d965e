// SPDX-License-Identifier: Apache-2.0
#include "ris/kernels.hpp"

#include <cstdlib>
#include <string_view>

namespace ris::kernels {

namespace {

std::complex<double> cdot_scalar(const double* ar, const double* ai, const double* br, const double* bi,
                                 std::size_t n) {
  double sr = 0, si = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sr += ar[i] * br[i] - ai[i] * bi[i];
    si += ar[i] * bi[i] + ai[i] * br[i];
  }
  return {sr, si};
}

double flow_sum_scalar(const double* gr, const double* gi, std::size_t n, double cr, double ci) {
  double s = 0;
  const double d = cr - ci;
  for (std::size_t i = 0; i < n; ++i) s += (gr[i] * gr[i] + gi[i] * gi[i]) * cr + gr[i] * d;
  return s;
}

void gamma_of_z_scalar(const double* u, const double* v, std::size_t n, double ci, double cr, double* gr,
                       double* gi, double* dgr, double* dgi) {
  const double sc = ci + cr;
  for (std::size_t i = 0; i < n; ++i) {
    // numerator a = z ci - 1, denominator b = z cr + 1
    double ar = u[i] * ci - 1.0, ai = v[i] * ci;
    double br = u[i] * cr + 1.0, bi = v[i] * cr;
    double inv = 1.0 / (br * br + bi * bi);
    gr[i] = (ar * br + ai * bi) * inv;
    gi[i] = (ai * br - ar * bi) * inv;
    // sc / b^2 = sc conj(b)^2 / |b|^4
    double cr2 = br * br - bi * bi, ci2 = -2.0 * br * bi;
    double s = sc * inv * inv;
    dgr[i] = cr2 * s;
    dgi[i] = ci2 * s;
  }
}

void axpy_conj_scalar(double sr, double si, const double* ar, const double* ai, std::size_t n, double* outr,
                      double* outi) {
  for (std::size_t i = 0; i < n; ++i) {
    outr[i] += sr * ar[i] + si * ai[i];
    outi[i] += si * ar[i] - sr * ai[i];
  }
}

const Table kScalar{cdot_scalar, flow_sum_scalar, gamma_of_z_scalar, axpy_conj_scalar, "scalar"};

const Table* initial() {
  if (const char* e = std::getenv("RIS_KERNELS"); e && std::string_view(e) == "scalar") return &kScalar;
  if (cpu_has_avx2() && avx2()) return avx2();
  return &kScalar;
}

const Table*& current() {
  static const Table* t = initial();
  return t;
}

}  // namespace

const Table& scalar() { return kScalar; }

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const Table& active() { return *current(); }

bool select(std::string_view name) {
  if (name == "scalar") {
    current() = &kScalar;
    return true;
  }
  if (name == "avx2" && cpu_has_avx2() && avx2()) {
    current() = avx2();
    return true;
  }
  return false;
}

}  // namespace ris::kernels
