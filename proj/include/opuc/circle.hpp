#pragma once

// Uniform grids on the unit circle, trapezoid means, Fourier coefficients
// and Schwarz-kernel integrals.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "opuc/error.hpp"

namespace opuc {

/// Nodes t_j = exp(i theta_j), theta_j = 2 pi (j + offset) / M.
class CircleGrid {
 public:
  static CircleGrid make(std::size_t M, double offset = 0.5);

  std::size_t size() const { return theta_.size(); }
  double offset() const { return offset_; }
  double theta(std::size_t j) const { return theta_[j]; }
  cplx node(std::size_t j) const { return {re_[j], im_[j]}; }
  std::span<const double> thetas() const { return theta_; }
  std::span<const double> re() const { return re_; }
  std::span<const double> im() const { return im_; }
  std::vector<cplx> nodes() const;

  template <class F>
  std::vector<double> sample(F&& f) const {
    std::vector<double> out(size());
    for (std::size_t j = 0; j < size(); ++j) out[j] = f(node(j));
    return out;
  }

 private:
  double offset_ = 0.0;
  std::vector<double> theta_;
  std::vector<double> re_;
  std::vector<double> im_;
};

CircleGrid make_grid(std::size_t M, double offset);

double quad_mean(const CircleGrid& grid, std::span<const double> samples);
cplx quad_mean(const CircleGrid& grid, std::span<const cplx> samples);

/// Laurent polynomial sum_{|j|<=N} a_j t^j.
class TrigPoly {
 public:
  TrigPoly() : coef_(1, cplx{0.0, 0.0}) {}
  explicit TrigPoly(int N) : N_(N), coef_(static_cast<std::size_t>(2 * N + 1)) {}
  /// Coefficients listed from a_{-N} to a_N.
  TrigPoly(int N, std::vector<cplx> coef);

  int degree() const { return N_; }
  cplx operator[](int j) const;
  cplx& at(int j);
  cplx operator()(cplx t) const;
  /// a_{-j} == conj(a_j) within tol.
  bool is_real(double tol = 1e-13) const;
  /// max_j |a_{-j} - conj(a_j)|.
  double hermitian_defect() const;
  TrigPoly operator*(const TrigPoly& other) const;

 private:
  int N_ = 0;
  std::vector<cplx> coef_;
};

/// a_j = mean(f t^{-j}) for |j| <= K, via FFT.
TrigPoly fourier_coeffs(const CircleGrid& grid, std::span<const double> samples, int K);
TrigPoly fourier_coeffs(const CircleGrid& grid, std::span<const cplx> samples, int K);

/// Reference O(MK) evaluation of the same coefficients.
TrigPoly fourier_coeffs_direct(const CircleGrid& grid, std::span<const cplx> samples, int K);

inline constexpr double default_delta_min = 1e-8;

/// mean over t of ((t+z)/(t-z)) g(t).
cplx schwarz_eval(const CircleGrid& grid, std::span<const double> g, cplx z,
                  double delta_min = default_delta_min);

/// Schwarz integral of real grid data through its truncated Fourier series
/// S(z) = c_0 + 2 sum_{1<=k<M/2} c_k z^k. Agrees with schwarz_eval up to
/// the aliasing error of the trapezoid rule, and extends to |z| = 1.
class SchwarzTransform {
 public:
  SchwarzTransform(const CircleGrid& grid, std::span<const double> g);

  cplx at(cplx z) const;
  std::vector<cplx> at(std::span<const cplx> z) const;
  /// Values at r t_j for every node.
  std::vector<cplx> ring(double r) const;
  /// Boundary values at the nodes: real part is g itself, imaginary part
  /// is the conjugate function.
  std::vector<cplx> boundary() const;
  /// Series value at exp(i theta).
  cplx boundary_at(double theta) const { return at(std::polar(1.0, theta)); }
  cplx coeff(std::size_t k) const { return c_[k]; }

 private:
  std::size_t M_;
  double offset_;
  std::vector<double> g_;
  std::vector<cplx> c_;   // c_0 .. c_{M/2-1}
  std::vector<cplx> raw_; // unnormalized FFT of g
};

/// Three-level refinement of a grid functional (M, 2M, 4M).
struct RefinementScan {
  std::vector<std::size_t> M;
  std::vector<double> values;
  double last_diff = 0.0;
  double ratio = 0.0;
  bool converged = false;

  double value() const { return values.back(); }
};

inline constexpr double scan_threshold = 1e-6;
inline constexpr double scan_ratio_max = 0.95;

RefinementScan refinement_scan(const std::function<double(const CircleGrid&)>& f,
                               std::size_t M, double offset);

}  // namespace opuc
