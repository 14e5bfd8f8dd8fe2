#include "opuc/circle.hpp"

#include <cmath>

#include <fmt/format.h>

#include "fft.hpp"
#include "opuc/kernels.hpp"

namespace opuc {
namespace {

bool is_pow2(std::size_t M) { return M != 0 && (M & (M - 1)) == 0; }

cplx node_phase(double offset, long k, std::size_t M) {
  // exp(-2 pi i offset k / M)
  return std::polar(1.0, -2.0 * pi * offset * static_cast<double>(k) / static_cast<double>(M));
}

}  // namespace

CircleGrid CircleGrid::make(std::size_t M, double offset) {
  if (M < 4 || !is_pow2(M))
    throw Error(ErrorKind::configuration, fmt::format("grid size {} is not a power of two >= 4", M));
  if (!(offset >= 0.0 && offset < 1.0))
    throw Error(ErrorKind::configuration, fmt::format("grid offset {} outside [0,1)", offset));
  CircleGrid g;
  g.offset_ = offset;
  g.theta_.resize(M);
  g.re_.resize(M);
  g.im_.resize(M);
  for (std::size_t j = 0; j < M; ++j) {
    const double th = 2.0 * pi * (static_cast<double>(j) + offset) / static_cast<double>(M);
    g.theta_[j] = th;
    g.re_[j] = std::cos(th);
    g.im_[j] = std::sin(th);
  }
  return g;
}

std::vector<cplx> CircleGrid::nodes() const {
  std::vector<cplx> t(size());
  for (std::size_t j = 0; j < size(); ++j) t[j] = node(j);
  return t;
}

CircleGrid make_grid(std::size_t M, double offset) { return CircleGrid::make(M, offset); }

double quad_mean(const CircleGrid& grid, std::span<const double> samples) {
  if (samples.size() != grid.size())
    throw Error(ErrorKind::contract,
                fmt::format("quad_mean: {} samples on a grid of {}", samples.size(), grid.size()));
  return kernels::sum(samples) / static_cast<double>(grid.size());
}

cplx quad_mean(const CircleGrid& grid, std::span<const cplx> samples) {
  if (samples.size() != grid.size())
    throw Error(ErrorKind::contract,
                fmt::format("quad_mean: {} samples on a grid of {}", samples.size(), grid.size()));
  kernels::CompensatedComplexSum acc;
  for (cplx v : samples) acc.add(v);
  return acc.value() / static_cast<double>(grid.size());
}

TrigPoly::TrigPoly(int N, std::vector<cplx> coef) : N_(N), coef_(std::move(coef)) {
  if (N < 0 || coef_.size() != static_cast<std::size_t>(2 * N + 1))
    throw Error(ErrorKind::contract, "TrigPoly: coefficient count must be 2N+1");
}

cplx TrigPoly::operator[](int j) const {
  if (j < -N_ || j > N_) return {0.0, 0.0};
  return coef_[static_cast<std::size_t>(j + N_)];
}

cplx& TrigPoly::at(int j) {
  if (j < -N_ || j > N_) throw Error(ErrorKind::index, fmt::format("TrigPoly index {} beyond degree {}", j, N_));
  return coef_[static_cast<std::size_t>(j + N_)];
}

cplx TrigPoly::operator()(cplx t) const {
  // Horner in t for the nonnegative part, in 1/t for the negative part.
  cplx pos{0.0, 0.0};
  for (int j = N_; j >= 0; --j) pos = pos * t + (*this)[j];
  cplx neg{0.0, 0.0};
  const cplx ti = 1.0 / t;
  for (int j = N_; j >= 1; --j) neg = (neg + (*this)[-j]) * ti;
  return pos + neg;
}

double TrigPoly::hermitian_defect() const {
  double d = 0.0;
  for (int j = 0; j <= N_; ++j) d = std::max(d, std::abs((*this)[-j] - std::conj((*this)[j])));
  return d;
}

bool TrigPoly::is_real(double tol) const { return hermitian_defect() <= tol; }

TrigPoly TrigPoly::operator*(const TrigPoly& other) const {
  TrigPoly out(N_ + other.N_);
  for (int i = -N_; i <= N_; ++i)
    for (int j = -other.N_; j <= other.N_; ++j) out.at(i + j) += (*this)[i] * other[j];
  return out;
}

namespace {

TrigPoly coeffs_from_fft(const CircleGrid& grid, const std::vector<cplx>& F, int K) {
  const std::size_t M = grid.size();
  TrigPoly out(K);
  for (int k = -K; k <= K; ++k) {
    const std::size_t idx = static_cast<std::size_t>((k % static_cast<long>(M) + static_cast<long>(M)) %
                                                     static_cast<long>(M));
    out.at(k) = node_phase(grid.offset(), k, M) * F[idx] / static_cast<double>(M);
  }
  return out;
}

void check_K(const CircleGrid& grid, int K) {
  if (K < 0 || static_cast<std::size_t>(2 * K) >= grid.size())
    throw Error(ErrorKind::configuration,
                fmt::format("fourier_coeffs: K={} needs K < M/2 = {}", K, grid.size() / 2));
}

}  // namespace

TrigPoly fourier_coeffs(const CircleGrid& grid, std::span<const double> samples, int K) {
  check_K(grid, K);
  if (samples.size() != grid.size()) throw Error(ErrorKind::contract, "fourier_coeffs: size mismatch");
  return coeffs_from_fft(grid, detail::fft_real(samples), K);
}

TrigPoly fourier_coeffs(const CircleGrid& grid, std::span<const cplx> samples, int K) {
  check_K(grid, K);
  if (samples.size() != grid.size()) throw Error(ErrorKind::contract, "fourier_coeffs: size mismatch");
  return coeffs_from_fft(grid, detail::fft(samples), K);
}

TrigPoly fourier_coeffs_direct(const CircleGrid& grid, std::span<const cplx> samples, int K) {
  check_K(grid, K);
  if (samples.size() != grid.size()) throw Error(ErrorKind::contract, "fourier_coeffs: size mismatch");
  TrigPoly out(K);
  for (int k = -K; k <= K; ++k) {
    kernels::CompensatedComplexSum acc;
    for (std::size_t j = 0; j < grid.size(); ++j)
      acc.add(samples[j] * std::polar(1.0, -static_cast<double>(k) * grid.theta(j)));
    out.at(k) = acc.value() / static_cast<double>(grid.size());
  }
  return out;
}

cplx schwarz_eval(const CircleGrid& grid, std::span<const double> g, cplx z, double delta_min) {
  if (g.size() != grid.size()) throw Error(ErrorKind::contract, "schwarz_eval: size mismatch");
  if (std::abs(z) > 1.0 - delta_min)
    throw Error(ErrorKind::domain,
                fmt::format("schwarz_eval: |z| = {:.17g} exceeds the limit radius {:.17g}", std::abs(z),
                            1.0 - delta_min));
  return kernels::cauchy_mean(grid.re(), grid.im(), g, z);
}

SchwarzTransform::SchwarzTransform(const CircleGrid& grid, std::span<const double> g)
    : M_(grid.size()), offset_(grid.offset()), g_(g.begin(), g.end()) {
  if (g.size() != grid.size()) throw Error(ErrorKind::contract, "SchwarzTransform: size mismatch");
  raw_ = detail::fft_real(g);
  c_.resize(M_ / 2);
  for (std::size_t k = 0; k < M_ / 2; ++k)
    c_[k] = node_phase(offset_, static_cast<long>(k), M_) * raw_[k] / static_cast<double>(M_);
}

cplx SchwarzTransform::at(cplx z) const {
  if (std::abs(z) > 1.0 + 1e-14)
    throw Error(ErrorKind::domain, fmt::format("SchwarzTransform: |z| = {:.17g} > 1", std::abs(z)));
  cplx s{0.0, 0.0};
  for (std::size_t k = c_.size() - 1; k >= 1; --k) s = s * z + c_[k];
  return c_[0] + 2.0 * z * s;
}

std::vector<cplx> SchwarzTransform::at(std::span<const cplx> z) const {
  std::vector<cplx> out(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) out[i] = at(z[i]);
  return out;
}

std::vector<cplx> SchwarzTransform::ring(double r) const {
  if (!(r >= 0.0 && r <= 1.0)) throw Error(ErrorKind::domain, fmt::format("ring radius {} outside [0,1]", r));
  std::vector<cplx> b(M_, cplx{0.0, 0.0});
  const double inv = 1.0 / static_cast<double>(M_);
  b[0] = raw_[0] * inv;
  double rk = 1.0;
  for (std::size_t k = 1; k < M_ / 2; ++k) {
    rk *= r;
    b[k] = 2.0 * rk * raw_[k] * inv;
  }
  return detail::ifft(b);
}

std::vector<cplx> SchwarzTransform::boundary() const {
  std::vector<cplx> v = ring(1.0);
  for (std::size_t j = 0; j < M_; ++j) v[j] = {g_[j], v[j].imag()};
  return v;
}

RefinementScan refinement_scan(const std::function<double(const CircleGrid&)>& f, std::size_t M,
                               double offset) {
  RefinementScan s;
  for (int level = 0; level < 3; ++level) {
    const std::size_t m = M << level;
    s.M.push_back(m);
    s.values.push_back(f(CircleGrid::make(m, offset)));
  }
  const double d1 = s.values[1] - s.values[0];
  const double d2 = s.values[2] - s.values[1];
  s.last_diff = std::abs(d2);
  s.ratio = d1 == 0.0 ? 0.0 : std::abs(d2 / d1);
  s.converged = std::isfinite(s.values[2]) &&
                (s.last_diff < scan_threshold || s.ratio <= scan_ratio_max);
  return s;
}

}  // namespace opuc
