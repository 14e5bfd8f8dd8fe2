#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "opuc/kernels.hpp"

namespace k = opuc::kernels;

namespace {

std::vector<double> random_vec(std::size_t n, std::uint64_t seed, double scale = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-scale, scale);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

}  // namespace

TEST_CASE("compensated sum survives cancellation") {
  std::vector<double> x{1e16, 1.0, -1e16, 1.0};
  CHECK(k::scalar::sum(x) == 2.0);
  CHECK(k::sum(x) == 2.0);
}

TEST_CASE("scalar and avx2 kernels agree") {
  if (!k::avx2_available()) {
    MESSAGE("avx2 not available; equivalence skipped");
    return;
  }
  for (std::size_t n : {0u, 1u, 3u, 4u, 7u, 64u, 1001u, 4096u}) {
    const auto a = random_vec(n, 11 + n, 1e3);
    const auto b = random_vec(n, 29 + n);
    const double s0 = k::scalar::sum(a), s1 = k::avx2::sum(a);
    CHECK(std::abs(s0 - s1) <= 1e-15 * (1 + std::abs(s0)) * 8);
    const double d0 = k::scalar::dot(a, b), d1 = k::avx2::dot(a, b);
    CHECK(std::abs(d0 - d1) <= 1e-15 * (1 + std::abs(d0)) * 8);

    if (n == 0) continue;
    std::vector<double> re(n), im(n);
    for (std::size_t j = 0; j < n; ++j) {
      const double th = 2 * opuc::pi * (static_cast<double>(j) + 0.5) / static_cast<double>(std::max<std::size_t>(n, 1));
      re[j] = std::cos(th);
      im[j] = std::sin(th);
    }
    for (opuc::cplx z : {opuc::cplx{0.3, -0.2}, opuc::cplx{0.0, 0.95}}) {
      const auto c0 = k::scalar::cauchy_mean(re, im, b, z);
      const auto c1 = k::avx2::cauchy_mean(re, im, b, z);
      CHECK(std::abs(c0 - c1) <= 1e-13 * (1 + std::abs(c0)));
    }
  }
}

TEST_CASE("dispatch follows force_isa") {
  const auto before = k::active_isa();
  k::force_isa(k::Isa::scalar);
  CHECK(k::active_isa() == k::Isa::scalar);
  const auto x = random_vec(999, 3);
  CHECK(k::sum(x) == k::scalar::sum(x));
  if (k::avx2_available()) {
    k::force_isa(k::Isa::avx2);
    CHECK(k::sum(x) == k::avx2::sum(x));
  } else {
    CHECK_THROWS_AS(k::force_isa(k::Isa::avx2), opuc::Error);
  }
  k::force_isa(before);
}

TEST_CASE("cauchy_mean at the origin is the plain mean") {
  const std::size_t M = 256;
  std::vector<double> re(M), im(M), g(M);
  double mean = 0.0;
  for (std::size_t j = 0; j < M; ++j) {
    const double th = 2 * opuc::pi * (static_cast<double>(j) + 0.5) / M;
    re[j] = std::cos(th);
    im[j] = std::sin(th);
    g[j] = std::exp(std::cos(th));
    mean += g[j] / M;
  }
  const auto c = k::cauchy_mean(re, im, g, {0.0, 0.0});
  CHECK(c.real() == doctest::Approx(mean).epsilon(1e-14));
  CHECK(std::abs(c.imag()) < 1e-14);
}
