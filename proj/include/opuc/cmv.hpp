#pragma once

#include <Eigen/Dense>

#include "opuc/szego.hpp"

namespace opuc {

/// m x m truncation of the CMV matrix, built as L*M with
/// L = Theta_0 + Theta_2 + ..., M = 1 + Theta_1 + Theta_3 + ... and
/// Theta_k = [[conj(a_k), rho_k], [rho_k, -a_k]].
class CMVMatrix {
 public:
  CMVMatrix(VerblunskySeq alpha, int m);

  int order() const { return m_; }
  const VerblunskySeq& alpha() const { return alpha_; }
  const Eigen::MatrixXcd& dense() const { return C_; }
  cplx operator()(int i, int j) const { return C_(i, j); }
  /// max |(C*C - I)_{ij}| over rows/columns at least two away from the cut.
  double interior_unitarity_defect() const;

 private:
  VerblunskySeq alpha_;
  int m_;
  Eigen::MatrixXcd C_;
};

CMVMatrix build_cmv(const VerblunskySeq& alpha, int m);

/// Coefficients of det(zI - C_n), via interpolation at the (n+1)-th roots
/// of unity.
Polynomial char_poly(const CMVMatrix& C);

/// max |coefficient difference| between det(zI - C_n) and Phi_n.
double char_poly_check(const VerblunskySeq& alpha, int n);

/// t_0 = sum log rho_k, t_k = tr(conj(C)^k - conj(C_0)^k) for k >= 1.
struct TraceMoments {
  std::vector<cplx> t;
  int m = 0;
};

TraceMoments trace_moments(const VerblunskySeq& alpha, int kmax);

/// Re tr(P(C) - P(C_0)) for an analytic polynomial P.
double trace_P_diff(const VerblunskySeq& alpha, const Polynomial& P);

/// conj(a_0) - sum_{k>=1} conj(a_k) a_{k-1}.
cplx trace_diff_diagonal(const VerblunskySeq& alpha);

/// tr(C - C_0) summed entrywise on a stabilized truncation.
cplx trace_diff_entrywise(const VerblunskySeq& alpha);

}  // namespace opuc
