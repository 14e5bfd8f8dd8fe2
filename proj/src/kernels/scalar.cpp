#include <cmath>

#include "opuc/kernels.hpp"

namespace opuc::kernels::scalar {

double sum(std::span<const double> x) {
  CompensatedSum acc;
  for (double v : x) acc.add(v);
  return acc.value();
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error(ErrorKind::contract, "dot: length mismatch");
  CompensatedSum acc;
  double err = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double p = a[j] * b[j];
    err += std::fma(a[j], b[j], -p);
    acc.add(p);
  }
  acc.add(err);
  return acc.value();
}

cplx cauchy_mean(std::span<const double> re, std::span<const double> im,
                 std::span<const double> g, cplx z) {
  if (re.size() != im.size() || re.size() != g.size())
    throw Error(ErrorKind::contract, "cauchy_mean: length mismatch");
  const double x = z.real();
  const double y = z.imag();
  CompensatedSum sr;
  CompensatedSum si;
  for (std::size_t j = 0; j < re.size(); ++j) {
    const double a = re[j];
    const double b = im[j];
    const double nr = (a + x) * (a - x) + (b + y) * (b - y);
    const double ni = (b + y) * (a - x) - (a + x) * (b - y);
    const double d = (a - x) * (a - x) + (b - y) * (b - y);
    const double w = g[j] / d;
    sr.add(nr * w);
    si.add(ni * w);
  }
  const double inv = 1.0 / static_cast<double>(re.size());
  return {sr.value() * inv, si.value() * inv};
}

}  // namespace opuc::kernels::scalar
