// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstddef>
#include <string_view>

// Hot loops over split (re, im) arrays. Each has a scalar reference and an
// AVX2/FMA variant; the active table is chosen once at startup.
namespace ris::kernels {

struct Table {
  // sum_n (ar + j ai)(br + j bi)
  std::complex<double> (*cdot)(const double* ar, const double* ai, const double* br,
                               const double* bi, std::size_t n);
  // sum_n |g|^2 cr + Re(g) (cr - ci)
  double (*flow_sum)(const double* gr, const double* gi, std::size_t n, double cr, double ci);
  // g = (z ci - 1) / (z cr + 1), dg = (ci + cr) / (z cr + 1)^2 for z = u + j v
  void (*gamma_of_z)(const double* u, const double* v, std::size_t n, double ci, double cr,
                     double* gr, double* gi, double* dgr, double* dgi);
  // out += s * conj(a), complex scalar s
  void (*axpy_conj)(double sr, double si, const double* ar, const double* ai, std::size_t n,
                    double* outr, double* outi);
  const char* name;
};

const Table& scalar();
const Table* avx2();  // nullptr when not compiled in
const Table& active();

// "scalar" or "avx2"; returns false if unavailable.
bool select(std::string_view name);
bool cpu_has_avx2();

}  // namespace ris::kernels
