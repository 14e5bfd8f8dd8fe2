#pragma once

#include <span>
#include <vector>

#include "opuc/error.hpp"

namespace opuc {

class PSMeasure;

/// Coefficients in ascending powers; evaluation by Horner.
class Polynomial {
 public:
  Polynomial() : c_{cplx{1.0, 0.0}} {}
  explicit Polynomial(std::vector<cplx> c) : c_(std::move(c)) {}

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const std::vector<cplx>& coeffs() const { return c_; }
  cplx operator[](int k) const {
    return k >= 0 && k < static_cast<int>(c_.size()) ? c_[static_cast<std::size_t>(k)] : cplx{};
  }
  cplx operator()(cplx z) const;
  /// z^n conj(P(1/conj z)) for the given formal degree n.
  Polynomial reversed(int n) const;
  Polynomial scaled(double s) const;

 private:
  std::vector<cplx> c_;
};

/// alpha_0 .. alpha_{N-1}; reads past the end give alpha = 0.
class VerblunskySeq {
 public:
  VerblunskySeq() = default;
  explicit VerblunskySeq(std::vector<cplx> alpha);

  std::size_t size() const { return alpha_.size(); }
  std::span<const cplx> values() const { return alpha_; }
  cplx operator[](std::size_t k) const { return k < alpha_.size() ? alpha_[k] : cplx{}; }
  double rho(std::size_t k) const;
  /// A_n = prod_{k<n} rho_k.
  double A(std::size_t n) const;
  /// sum_{k<n} log rho_k.
  double log_A(std::size_t n) const;
  /// Index one past the last nonzero coefficient.
  std::size_t support() const;
  VerblunskySeq padded(std::size_t n) const;

 private:
  std::vector<cplx> alpha_;
};

struct PolyPair {
  Polynomial Phi;
  Polynomial PhiStar;
  int n = 0;
};

struct OrthoPair {
  Polynomial phi;
  Polynomial phi_star;
  double A = 1.0;
};

/// n steps of Phi_{k+1} = z Phi_k - conj(alpha_k) Phi*_k,
/// Phi*_{k+1} = Phi*_k - alpha_k z Phi_k.
PolyPair recurse(const VerblunskySeq& alpha, int n);

OrthoPair orthonormalize(const PolyPair& pair, const VerblunskySeq& alpha);

struct LevinsonResult {
  VerblunskySeq alpha;
  /// max_k |c_k - reconstructed c_k| over the moments used.
  double residual = 0.0;
};

/// Levinson recursion on moments c_0..c_n. Stable to roughly n = 200 on
/// well-conditioned inputs; the residual reports how far it drifted.
LevinsonResult verblunsky_from_moments(std::span<const cplx> c, int n);

/// Moments c_0..c_K of the Bernstein-Szego measure with these coefficients,
/// by inverting the Levinson recursion (Schur parameters back to moments).
std::vector<cplx> moments_from_verblunsky(const VerblunskySeq& alpha, int K);

/// Verblunsky coefficients of sigma from the normalized Szego recurrence on
/// the discretized measure (grid nodes with weights sigma'/M plus atoms).
/// Exact coefficients are returned when the measure knows them.
VerblunskySeq verblunsky_from_measure(const PSMeasure& sigma, int n);

/// Values of phi_n and phi*_n at a fixed point set, advanced one degree at
/// a time.
class PhiSweep {
 public:
  PhiSweep(VerblunskySeq alpha, std::vector<cplx> points);

  int n() const { return n_; }
  double A() const { return A_; }
  /// Orthonormal values phi_n, phi*_n.
  std::vector<cplx> phi() const;
  std::vector<cplx> phi_star() const;
  cplx phi_star(std::size_t i) const { return PhiStar_[i] / A_; }
  cplx phi(std::size_t i) const { return Phi_[i] / A_; }
  void advance();
  void advance_to(int n);

 private:
  VerblunskySeq alpha_;
  std::vector<cplx> z_;
  std::vector<cplx> Phi_;
  std::vector<cplx> PhiStar_;
  double A_ = 1.0;
  int n_ = 0;
};

}  // namespace opuc
