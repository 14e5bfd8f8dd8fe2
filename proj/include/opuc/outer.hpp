#pragma once

#include <optional>
#include <span>
#include <vector>

#include "opuc/circle.hpp"
#include "opuc/measures.hpp"
#include "opuc/szego.hpp"

namespace opuc {

/// K(t, z) = ((t+z)/(t-z)) q(t)/q(z).
class KernelK {
 public:
  explicit KernelK(WeightPoly weight) : weight_(std::move(weight)) {}
  const WeightPoly& weight() const { return weight_; }
  cplx operator()(cplx t, cplx z) const;

 private:
  WeightPoly weight_;
};

/// z -> S_{p g}(z) / q(z) for real grid data g, where S is the Schwarz
/// integral. This is the mean of K(., z) g. Interior points closer to the
/// circle than 40/M go through the Fourier series instead of the direct
/// trapezoid sum.
class ModifiedSchwarz {
 public:
  ModifiedSchwarz(const CircleGrid& grid, const WeightPoly& weight, std::span<const double> g);

  cplx at(cplx z, double delta_min = default_delta_min) const;
  /// Boundary values at the nodes: real part g, imaginary part H(pg)/p.
  std::vector<cplx> boundary() const;
  cplx boundary_at(double theta) const;
  /// Values at r t_j for every node, through the Fourier series.
  std::vector<cplx> ring(double r) const;

 private:
  WeightPoly weight_;
  CircleGrid grid_;
  std::vector<double> g_;
  std::vector<double> p_;
  std::vector<double> pg_;
  SchwarzTransform series_;
};

/// Classical Schwarz integral with the same routing.
class ClassicalSchwarz {
 public:
  ClassicalSchwarz(const CircleGrid& grid, std::span<const double> g);
  cplx at(cplx z, double delta_min = default_delta_min) const;
  std::vector<cplx> boundary() const { return series_.boundary(); }
  cplx boundary_at(double theta) const { return series_.boundary_at(theta); }

 private:
  CircleGrid grid_;
  std::vector<double> g_;
  SchwarzTransform series_;
};

/// Near-boundary radius below which the direct sum is used.
double direct_route_radius(std::size_t M);

/// D, D~, phi*_n, psi_n, phi~*_n and xi_n for one measure and one degree.
class OuterFunctions {
 public:
  /// log_phistar: optional precomputed log|phi*_n| at the grid nodes.
  OuterFunctions(const PSMeasure& sigma, const VerblunskySeq& alpha, int n,
                 std::optional<std::vector<double>> log_phistar = std::nullopt);

  int degree() const { return n_; }
  const PSMeasure& measure() const { return *sigma_; }

  cplx D(cplx z) const;
  cplx Dtilde(cplx z) const;
  cplx phi_star(cplx z) const { return phistar_(z); }
  cplx psi(cplx z) const { return std::exp(psi_exponent(z)); }
  cplx psi_exponent(cplx z) const;
  cplx phitilde_star(cplx z) const { return psi(z) * phi_star(z); }
  cplx xi(cplx z) const;

  /// Boundary values at the grid nodes.
  std::vector<cplx> psi_boundary() const;
  std::vector<cplx> xi_boundary() const;
  std::vector<cplx> Dtilde_boundary() const;
  cplx psi_boundary_at(double theta) const;
  /// xi_n at r t_j for every node.
  std::vector<cplx> xi_ring(double r) const;

  const std::vector<double>& log_phistar_nodes() const { return L_; }

 private:
  void check_point(cplx z) const;

  const PSMeasure* sigma_;
  int n_;
  Polynomial phistar_;
  std::vector<double> logd_;
  std::vector<double> L_;
  ModifiedSchwarz Elogd_;
  ModifiedSchwarz EL_;
  ModifiedSchwarz EH_;
  ClassicalSchwarz SL_;
  std::optional<ClassicalSchwarz> Slogd_;
};

cplx D_eval(const PSMeasure& sigma, cplx z);
cplx Dtilde_eval(const PSMeasure& sigma, cplx z);
cplx psi_eval(const PSMeasure& sigma, int n, cplx z);
cplx phitilde_star_eval(const PSMeasure& sigma, int n, cplx z);
cplx xi_eval(const PSMeasure& sigma, int n, cplx z);

/// Exponent of psi_n written as A_0 + sum_k sum_j A_{j,k} w_k^j with
/// w_k = (z + zeta_k)/(z - zeta_k), j = 1..2 kappa_k.
struct PsiCoefficients {
  cplx A0;
  std::vector<std::vector<cplx>> A;  // A[k][j-1]
  enum class Method { residue, least_squares } method = Method::residue;
  /// max relative misfit against the integral exponent at check points.
  double residual = 0.0;
  /// max of |Re A_0|, |Re A_{2,k}|, |Im A_{1,k}| (kappa = 1 only).
  double reality_defect = 0.0;

  cplx exponent(const WeightPoly& weight, cplx z) const;
};

inline constexpr double extraction_tol = 1e-6;

PsiCoefficients coeff_extract(const PSMeasure& sigma, const VerblunskySeq& alpha, int n);
PsiCoefficients coeff_extract(const PSMeasure& sigma, int n);

/// Literal example coefficients: A_n = sum_{k=0}^{n} log rho_k and
/// B_n = (i/4) Im(alpha_0 - sum_{k=1}^{n} conj(alpha_{k-1}) alpha_k).
struct P1Coefficients {
  double A = 0.0;
  cplx B;
};
P1Coefficients p1_coefficients(const VerblunskySeq& alpha, int n);

/// exp(A w + B (w^2 - 1)), w = (1+z)/(1-z), with the coefficients taken at
/// index n - 1 (psi_0 = 1). The weight must be p1.
cplx psi_p1_closed_form(const VerblunskySeq& alpha, int n, cplx z, const WeightPoly& weight = WeightPoly::p1());

}  // namespace opuc
