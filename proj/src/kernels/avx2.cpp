#include <immintrin.h>

#include <array>
#include <cmath>

#include "opuc/kernels.hpp"

namespace opuc::kernels::avx2 {
namespace {

struct Acc {
  __m256d s = _mm256_setzero_pd();
  __m256d c = _mm256_setzero_pd();

  void add(__m256d x) {
    const __m256d t = _mm256_add_pd(s, x);
    const __m256d z = _mm256_sub_pd(t, s);
    const __m256d e = _mm256_add_pd(_mm256_sub_pd(s, _mm256_sub_pd(t, z)), _mm256_sub_pd(x, z));
    c = _mm256_add_pd(c, e);
    s = t;
  }

  // Lanes are folded in a fixed order so results do not depend on anything
  // but the input.
  void fold_into(CompensatedSum& out) const {
    alignas(32) std::array<double, 4> sv;
    alignas(32) std::array<double, 4> cv;
    _mm256_store_pd(sv.data(), s);
    _mm256_store_pd(cv.data(), c);
    for (double v : sv) out.add(v);
    for (double v : cv) out.add(v);
  }
};

}  // namespace

double sum(std::span<const double> x) {
  const std::size_t n = x.size();
  const std::size_t nv = n - n % 4;
  Acc acc;
  for (std::size_t j = 0; j < nv; j += 4) acc.add(_mm256_loadu_pd(x.data() + j));
  CompensatedSum out;
  acc.fold_into(out);
  for (std::size_t j = nv; j < n; ++j) out.add(x[j]);
  return out.value();
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error(ErrorKind::contract, "dot: length mismatch");
  const std::size_t n = a.size();
  const std::size_t nv = n - n % 4;
  Acc acc;
  __m256d err = _mm256_setzero_pd();
  for (std::size_t j = 0; j < nv; j += 4) {
    const __m256d va = _mm256_loadu_pd(a.data() + j);
    const __m256d vb = _mm256_loadu_pd(b.data() + j);
    const __m256d p = _mm256_mul_pd(va, vb);
    err = _mm256_add_pd(err, _mm256_fmsub_pd(va, vb, p));
    acc.add(p);
  }
  CompensatedSum out;
  acc.fold_into(out);
  alignas(32) std::array<double, 4> ev;
  _mm256_store_pd(ev.data(), err);
  double tail_err = ev[0] + ev[1] + ev[2] + ev[3];
  for (std::size_t j = nv; j < n; ++j) {
    const double p = a[j] * b[j];
    tail_err += std::fma(a[j], b[j], -p);
    out.add(p);
  }
  out.add(tail_err);
  return out.value();
}

cplx cauchy_mean(std::span<const double> re, std::span<const double> im,
                 std::span<const double> g, cplx z) {
  if (re.size() != im.size() || re.size() != g.size())
    throw Error(ErrorKind::contract, "cauchy_mean: length mismatch");
  const std::size_t n = re.size();
  const std::size_t nv = n - n % 4;
  const __m256d x = _mm256_set1_pd(z.real());
  const __m256d y = _mm256_set1_pd(z.imag());
  Acc sr;
  Acc si;
  for (std::size_t j = 0; j < nv; j += 4) {
    const __m256d a = _mm256_loadu_pd(re.data() + j);
    const __m256d b = _mm256_loadu_pd(im.data() + j);
    const __m256d apx = _mm256_add_pd(a, x);
    const __m256d amx = _mm256_sub_pd(a, x);
    const __m256d bpy = _mm256_add_pd(b, y);
    const __m256d bmy = _mm256_sub_pd(b, y);
    const __m256d nr = _mm256_add_pd(_mm256_mul_pd(apx, amx), _mm256_mul_pd(bpy, bmy));
    const __m256d ni = _mm256_sub_pd(_mm256_mul_pd(bpy, amx), _mm256_mul_pd(apx, bmy));
    const __m256d d = _mm256_add_pd(_mm256_mul_pd(amx, amx), _mm256_mul_pd(bmy, bmy));
    const __m256d w = _mm256_div_pd(_mm256_loadu_pd(g.data() + j), d);
    sr.add(_mm256_mul_pd(nr, w));
    si.add(_mm256_mul_pd(ni, w));
  }
  CompensatedSum outr;
  CompensatedSum outi;
  sr.fold_into(outr);
  si.fold_into(outi);
  const double xs = z.real();
  const double ys = z.imag();
  for (std::size_t j = nv; j < n; ++j) {
    const double a = re[j];
    const double b = im[j];
    const double nr = (a + xs) * (a - xs) + (b + ys) * (b - ys);
    const double ni = (b + ys) * (a - xs) - (a + xs) * (b - ys);
    const double d = (a - xs) * (a - xs) + (b - ys) * (b - ys);
    const double w = g[j] / d;
    outr.add(nr * w);
    outi.add(ni * w);
  }
  const double inv = 1.0 / static_cast<double>(n);
  return {outr.value() * inv, outi.value() * inv};
}

}  // namespace opuc::kernels::avx2
