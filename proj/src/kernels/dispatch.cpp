#include <atomic>
#include <cstdlib>
#include <cstring>

#include "opuc/kernels.hpp"

namespace opuc::kernels {

#ifndef OPUC_BUILD_AVX2
// Fallbacks so the symbols exist; never selected when AVX2 is not built.
namespace avx2 {
double sum(std::span<const double> x) { return scalar::sum(x); }
double dot(std::span<const double> a, std::span<const double> b) { return scalar::dot(a, b); }
cplx cauchy_mean(std::span<const double> re, std::span<const double> im,
                 std::span<const double> g, cplx z) {
  return scalar::cauchy_mean(re, im, g, z);
}
}  // namespace avx2
#endif

namespace {

bool detect_avx2() {
#if defined(OPUC_BUILD_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa initial_isa() {
  if (const char* env = std::getenv("OPUC_KERNELS")) {
    if (std::strcmp(env, "scalar") == 0) return Isa::scalar;
    if (std::strcmp(env, "avx2") == 0 && detect_avx2()) return Isa::avx2;
  }
  return detect_avx2() ? Isa::avx2 : Isa::scalar;
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{initial_isa()};
  return isa;
}

}  // namespace

const char* isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

bool avx2_available() {
  static const bool available = detect_avx2();
  return available;
}

Isa active_isa() { return current().load(std::memory_order_relaxed); }

void force_isa(Isa isa) {
  if (isa == Isa::avx2 && !avx2_available())
    throw Error(ErrorKind::configuration, "AVX2 kernels requested but not available on this CPU");
  current().store(isa, std::memory_order_relaxed);
}

double sum(std::span<const double> x) {
  return active_isa() == Isa::avx2 ? avx2::sum(x) : scalar::sum(x);
}

double dot(std::span<const double> a, std::span<const double> b) {
  return active_isa() == Isa::avx2 ? avx2::dot(a, b) : scalar::dot(a, b);
}

cplx cauchy_mean(std::span<const double> re, std::span<const double> im,
                 std::span<const double> g, cplx z) {
  return active_isa() == Isa::avx2 ? avx2::cauchy_mean(re, im, g, z)
                                   : scalar::cauchy_mean(re, im, g, z);
}

}  // namespace opuc::kernels
