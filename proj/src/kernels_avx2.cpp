// SPDX-License-Identifier: Apache-2.0
#include "ris/kernels.hpp"

#if defined(RIS_HAVE_AVX2)
#include <immintrin.h>

namespace ris::kernels {

namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d sh = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

std::complex<double> cdot_avx2(const double* ar, const double* ai, const double* br, const double* bi,
                               std::size_t n) {
  __m256d sr = _mm256_setzero_pd(), si = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d xr = _mm256_loadu_pd(ar + i), xi = _mm256_loadu_pd(ai + i);
    __m256d yr = _mm256_loadu_pd(br + i), yi = _mm256_loadu_pd(bi + i);
    sr = _mm256_fmadd_pd(xr, yr, sr);
    sr = _mm256_fnmadd_pd(xi, yi, sr);
    si = _mm256_fmadd_pd(xr, yi, si);
    si = _mm256_fmadd_pd(xi, yr, si);
  }
  double r = hsum(sr), m = hsum(si);
  for (; i < n; ++i) {
    r += ar[i] * br[i] - ai[i] * bi[i];
    m += ar[i] * bi[i] + ai[i] * br[i];
  }
  return {r, m};
}

double flow_sum_avx2(const double* gr, const double* gi, std::size_t n, double cr, double ci) {
  const __m256d vcr = _mm256_set1_pd(cr), vd = _mm256_set1_pd(cr - ci);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d xr = _mm256_loadu_pd(gr + i), xi = _mm256_loadu_pd(gi + i);
    __m256d m2 = _mm256_fmadd_pd(xr, xr, _mm256_mul_pd(xi, xi));
    acc = _mm256_fmadd_pd(m2, vcr, acc);
    acc = _mm256_fmadd_pd(xr, vd, acc);
  }
  double s = hsum(acc);
  const double d = cr - ci;
  for (; i < n; ++i) s += (gr[i] * gr[i] + gi[i] * gi[i]) * cr + gr[i] * d;
  return s;
}

void gamma_of_z_avx2(const double* u, const double* v, std::size_t n, double ci, double cr, double* gr,
                     double* gi, double* dgr, double* dgi) {
  const __m256d vci = _mm256_set1_pd(ci), vcr = _mm256_set1_pd(cr), one = _mm256_set1_pd(1.0);
  const __m256d sc = _mm256_set1_pd(ci + cr), two = _mm256_set1_pd(2.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d uu = _mm256_loadu_pd(u + i), vv = _mm256_loadu_pd(v + i);
    __m256d ar = _mm256_fmsub_pd(uu, vci, one), ai = _mm256_mul_pd(vv, vci);
    __m256d br = _mm256_fmadd_pd(uu, vcr, one), bi = _mm256_mul_pd(vv, vcr);
    __m256d inv = _mm256_div_pd(one, _mm256_fmadd_pd(br, br, _mm256_mul_pd(bi, bi)));
    _mm256_storeu_pd(gr + i, _mm256_mul_pd(_mm256_fmadd_pd(ar, br, _mm256_mul_pd(ai, bi)), inv));
    _mm256_storeu_pd(gi + i, _mm256_mul_pd(_mm256_fmsub_pd(ai, br, _mm256_mul_pd(ar, bi)), inv));
    __m256d s = _mm256_mul_pd(sc, _mm256_mul_pd(inv, inv));
    __m256d c2r = _mm256_fmsub_pd(br, br, _mm256_mul_pd(bi, bi));
    __m256d c2i = _mm256_mul_pd(_mm256_mul_pd(two, br), bi);
    _mm256_storeu_pd(dgr + i, _mm256_mul_pd(c2r, s));
    _mm256_storeu_pd(dgi + i, _mm256_sub_pd(_mm256_setzero_pd(), _mm256_mul_pd(c2i, s)));
  }
  if (i < n) scalar().gamma_of_z(u + i, v + i, n - i, ci, cr, gr + i, gi + i, dgr + i, dgi + i);
}

void axpy_conj_avx2(double sr, double si, const double* ar, const double* ai, std::size_t n, double* outr,
                    double* outi) {
  const __m256d vsr = _mm256_set1_pd(sr), vsi = _mm256_set1_pd(si);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d xr = _mm256_loadu_pd(ar + i), xi = _mm256_loadu_pd(ai + i);
    __m256d orr = _mm256_loadu_pd(outr + i), oii = _mm256_loadu_pd(outi + i);
    orr = _mm256_fmadd_pd(vsr, xr, orr);
    orr = _mm256_fmadd_pd(vsi, xi, orr);
    oii = _mm256_fmadd_pd(vsi, xr, oii);
    oii = _mm256_fnmadd_pd(vsr, xi, oii);
    _mm256_storeu_pd(outr + i, orr);
    _mm256_storeu_pd(outi + i, oii);
  }
  if (i < n) scalar().axpy_conj(sr, si, ar + i, ai + i, n - i, outr + i, outi + i);
}

const Table kAvx2{cdot_avx2, flow_sum_avx2, gamma_of_z_avx2, axpy_conj_avx2, "avx2"};

}  // namespace

const Table* avx2() { return &kAvx2; }

}  // namespace ris::kernels

#else

namespace ris::kernels {
const Table* avx2() { return nullptr; }
}  // namespace ris::kernels

#endif
