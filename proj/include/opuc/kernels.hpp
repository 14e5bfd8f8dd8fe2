#pragma once

// Inner loops over circle grids. Each kernel has a scalar reference
// implementation and, on x86-64, an AVX2/FMA variant picked at runtime.
// All sums are compensated (TwoSum / TwoProduct), so the variants agree
// to a few ulps of the result even though their summation orders differ.

#include <cstddef>
#include <span>

#include "opuc/error.hpp"

namespace opuc::kernels {

enum class Isa { scalar, avx2 };

const char* isa_name(Isa isa);

/// True when the AVX2 variant was compiled in and the CPU supports it.
bool avx2_available();

/// The variant used by the dispatching entry points. Chosen once from
/// cpuid; the OPUC_KERNELS environment variable ("scalar" or "avx2")
/// overrides the choice.
Isa active_isa();

/// Pins the dispatch target (tests and benchmarks). Requesting avx2 on a
/// machine without it is a configuration error.
void force_isa(Isa isa);

/// Compensated sum of x.
double sum(std::span<const double> x);

/// Compensated dot product sum_j a_j b_j.
double dot(std::span<const double> a, std::span<const double> b);

/// (1/M) sum_j (t_j + z)/(t_j - z) g_j with t_j = re_j + i im_j.
cplx cauchy_mean(std::span<const double> re, std::span<const double> im,
                 std::span<const double> g, cplx z);

namespace scalar {
double sum(std::span<const double> x);
double dot(std::span<const double> a, std::span<const double> b);
cplx cauchy_mean(std::span<const double> re, std::span<const double> im,
                 std::span<const double> g, cplx z);
}  // namespace scalar

namespace avx2 {
double sum(std::span<const double> x);
double dot(std::span<const double> a, std::span<const double> b);
cplx cauchy_mean(std::span<const double> re, std::span<const double> im,
                 std::span<const double> g, cplx z);
}  // namespace avx2

/// Running Neumaier-style accumulator built on TwoSum; used by callers
/// that produce their summands on the fly.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = s_ + x;
    const double z = t - s_;
    c_ += (s_ - (t - z)) + (x - z);
    s_ = t;
  }
  double value() const { return s_ + c_; }

 private:
  double s_ = 0.0;
  double c_ = 0.0;
};

class CompensatedComplexSum {
 public:
  void add(cplx x) {
    re_.add(x.real());
    im_.add(x.imag());
  }
  cplx value() const { return {re_.value(), im_.value()}; }

 private:
  CompensatedSum re_;
  CompensatedSum im_;
};

}  // namespace opuc::kernels
