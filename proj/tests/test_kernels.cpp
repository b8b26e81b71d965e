#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "ris/kernels.hpp"

using namespace ris;

namespace {

std::vector<double> rnd(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}



}  // namespace

TEST_CASE("scalar kernels match direct evaluation") {
  const auto& k = kernels::scalar();
  std::mt19937_64 rng(1);
  const std::size_t n = 37;
  auto ar = rnd(rng, n, -1, 1), ai = rnd(rng, n, -1, 1), br = rnd(rng, n, -1, 1), bi = rnd(rng, n, -1, 1);
  std::complex<double> ref = 0;
  double fs = 0;
  for (std::size_t i = 0; i < n; ++i) {
    ref += std::complex<double>(ar[i], ai[i]) * std::complex<double>(br[i], bi[i]);
    fs += (ar[i] * ar[i] + ai[i] * ai[i]) * 0.3 + ar[i] * (0.3 - 0.9);
  }
  CHECK(std::abs(k.cdot(ar.data(), ai.data(), br.data(), bi.data(), n) - ref) < 1e-13);
  CHECK(k.flow_sum(ar.data(), ai.data(), n, 0.3, 0.9) == doctest::Approx(fs).epsilon(1e-13));

  std::vector<double> gr(n), gi(n), dr(n), di(n);
  k.gamma_of_z(ar.data(), ai.data(), n, 0.9, 0.3, gr.data(), gi.data(), dr.data(), di.data());
  for (std::size_t i = 0; i < n; ++i) {
    std::complex<double> z(ar[i], ai[i]);
    auto g = (z * 0.9 - 1.0) / (z * 0.3 + 1.0);
    auto d = (0.9 + 0.3) / ((z * 0.3 + 1.0) * (z * 0.3 + 1.0));
    CHECK(std::abs(std::complex<double>(gr[i], gi[i]) - g) < 1e-13);
    CHECK(std::abs(std::complex<double>(dr[i], di[i]) - d) < 1e-13);
  }
}

TEST_CASE("avx2 kernels agree with scalar kernels") {
  const kernels::Table* v = kernels::avx2();
  if (!v || !kernels::cpu_has_avx2()) {
    MESSAGE("avx2 kernels unavailable on this build or cpu; skipped");
    return;
  }
  const auto& s = kernels::scalar();
  std::mt19937_64 rng(2);
  for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 8u, 15u, 64u, 1493u}) {
    auto ar = rnd(rng, n, -3, 3), ai = rnd(rng, n, -3, 3), br = rnd(rng, n, -1, 1), bi = rnd(rng, n, -1, 1);
    auto a = s.cdot(ar.data(), ai.data(), br.data(), bi.data(), n);
    auto b = v->cdot(ar.data(), ai.data(), br.data(), bi.data(), n);
    double scale = 0;
    for (std::size_t i = 0; i < n; ++i) scale += std::hypot(ar[i], ai[i]) * std::hypot(br[i], bi[i]);
    CHECK(std::abs(a - b) <= 1e-14 * std::max(scale, 1.0));

    double fa = s.flow_sum(ar.data(), ai.data(), n, 0.25, 1.0);
    double fb = v->flow_sum(ar.data(), ai.data(), n, 0.25, 1.0);
    CHECK(std::abs(fa - fb) <= 1e-14 * std::max(1.0, 10.0 * n));

    std::vector<double> g1(n), g2(n), g3(n), g4(n), h1(n), h2(n), h3(n), h4(n);
    s.gamma_of_z(ar.data(), ai.data(), n, 1.0, 0.26, g1.data(), g2.data(), g3.data(), g4.data());
    v->gamma_of_z(ar.data(), ai.data(), n, 1.0, 0.26, h1.data(), h2.data(), h3.data(), h4.data());
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(std::abs(g1[i] - h1[i]) <= 1e-13);
      CHECK(std::abs(g2[i] - h2[i]) <= 1e-13);
      CHECK(std::abs(g3[i] - h3[i]) <= 1e-12 * std::max(1.0, std::abs(g3[i])));
      CHECK(std::abs(g4[i] - h4[i]) <= 1e-12 * std::max(1.0, std::abs(g4[i])));
    }

    std::vector<double> o1 = br, o2 = bi, p1 = br, p2 = bi;
    s.axpy_conj(0.7, -1.3, ar.data(), ai.data(), n, o1.data(), o2.data());
    v->axpy_conj(0.7, -1.3, ar.data(), ai.data(), n, p1.data(), p2.data());
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(std::abs(o1[i] - p1[i]) <= 1e-14);
      CHECK(std::abs(o2[i] - p2[i]) <= 1e-14);
    }
  }
}

TEST_CASE("kernel selection") {
  const char* before = kernels::active().name;
  CHECK(kernels::select("scalar"));
  CHECK(std::string(kernels::active().name) == "scalar");
  CHECK_FALSE(kernels::select("neon"));
  if (kernels::avx2() && kernels::cpu_has_avx2()) {
    CHECK(kernels::select("avx2"));
    CHECK(std::string(kernels::active().name) == "avx2");
  }
  kernels::select(before);
}
