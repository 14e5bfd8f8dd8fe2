#include "opuc/cmv.hpp"

#include <cmath>

#include <fmt/format.h>

#include "opuc/kernels.hpp"

namespace opuc {
namespace {

using Mat = Eigen::MatrixXcd;

void put_theta(Mat& X, int k, const VerblunskySeq& a) {
  const int n = static_cast<int>(X.rows());
  const cplx ak = a[static_cast<std::size_t>(k)];
  const double r = a.rho(static_cast<std::size_t>(k));
  X(k, k) = std::conj(ak);
  if (k + 1 < n) {
    X(k, k + 1) = r;
    X(k + 1, k) = r;
    X(k + 1, k + 1) = -ak;
  }
}

constexpr double stabilization_tol = 1e-12;

Mat dense_cmv(const VerblunskySeq& alpha, int m) { return build_cmv(alpha, m).dense(); }

}  // namespace

CMVMatrix::CMVMatrix(VerblunskySeq alpha, int m) : alpha_(std::move(alpha)), m_(m) {
  if (m < 1) throw Error(ErrorKind::contract, fmt::format("CMV truncation order {} < 1", m));
  const int n = m + 2;
  Mat L = Mat::Zero(n, n);
  Mat M = Mat::Zero(n, n);
  for (int k = 0; k < n; k += 2) put_theta(L, k, alpha_);
  M(0, 0) = 1.0;
  for (int k = 1; k < n; k += 2) put_theta(M, k, alpha_);
  C_ = (L * M).topLeftCorner(m, m);
}

double CMVMatrix::interior_unitarity_defect() const {
  const int k = m_ - 2;
  if (k <= 0) return 0.0;
  const Mat G = C_.adjoint() * C_ - Mat::Identity(m_, m_);
  return G.topLeftCorner(k, k).cwiseAbs().maxCoeff();
}

CMVMatrix build_cmv(const VerblunskySeq& alpha, int m) { return CMVMatrix(alpha, m); }

Polynomial char_poly(const CMVMatrix& C) {
  const int n = C.order();
  const int N = n + 1;
  std::vector<cplx> det(static_cast<std::size_t>(N));
  for (int j = 0; j < N; ++j) {
    const cplx z = std::polar(1.0, 2.0 * pi * j / N);
    Mat A = -C.dense();
    A.diagonal().array() += z;
    det[static_cast<std::size_t>(j)] = A.partialPivLu().determinant();
  }
  std::vector<cplx> c(static_cast<std::size_t>(N));
  for (int k = 0; k < N; ++k) {
    kernels::CompensatedComplexSum s;
    for (int j = 0; j < N; ++j) s.add(det[static_cast<std::size_t>(j)] * std::polar(1.0, -2.0 * pi * j * k / N));
    c[static_cast<std::size_t>(k)] = s.value() / static_cast<double>(N);
  }
  return Polynomial(std::move(c));
}

double char_poly_check(const VerblunskySeq& alpha, int n) {
  if (n < 1 || n > 12) throw Error(ErrorKind::contract, fmt::format("char_poly_check: n = {} outside 1..12", n));
  const VerblunskySeq a = alpha.padded(static_cast<std::size_t>(std::max<std::size_t>(alpha.size(), n)));
  const Polynomial lhs = char_poly(build_cmv(a, n));
  const Polynomial rhs = recurse(a, n).Phi;
  double d = 0.0;
  for (int k = 0; k <= n; ++k) d = std::max(d, std::abs(lhs[k] - rhs[k]));
  return d;
}

namespace {

// tr(conj(C)^k - conj(C0)^k) for k = 1..kmax on an m x m truncation.
std::vector<cplx> raw_traces(const VerblunskySeq& alpha, int kmax, int m) {
  const Mat C = dense_cmv(alpha, m).conjugate();
  const Mat C0 = dense_cmv(VerblunskySeq(), m).conjugate();
  std::vector<cplx> t(static_cast<std::size_t>(kmax) + 1);
  Mat P = Mat::Identity(m, m);
  Mat P0 = Mat::Identity(m, m);
  for (int k = 1; k <= kmax; ++k) {
    P = P * C;
    P0 = P0 * C0;
    t[static_cast<std::size_t>(k)] = (P - P0).trace();
  }
  return t;
}

int margin(const VerblunskySeq& alpha, int deg) { return static_cast<int>(alpha.support()) + 2 * deg + 5; }

void check_stable(cplx a, cplx b, const char* what, int m) {
  if (std::abs(a - b) > stabilization_tol * std::max(1.0, std::abs(a)))
    throw Error(ErrorKind::numerical,
                fmt::format("{} not stabilized at truncation {} (change {:.3g}); use m >= {}", what, m,
                            std::abs(a - b), 2 * m));
}

}  // namespace

TraceMoments trace_moments(const VerblunskySeq& alpha, int kmax) {
  if (kmax < 0) throw Error(ErrorKind::contract, "trace_moments: kmax < 0");
  TraceMoments out;
  out.m = margin(alpha, kmax);
  out.t = raw_traces(alpha, kmax, out.m);
  const auto check = raw_traces(alpha, kmax, out.m + 1);
  for (int k = 1; k <= kmax; ++k)
    check_stable(out.t[static_cast<std::size_t>(k)], check[static_cast<std::size_t>(k)], "trace moment", out.m);
  out.t[0] = alpha.log_A(alpha.size());
  return out;
}

double trace_P_diff(const VerblunskySeq& alpha, const Polynomial& P) {
  const int deg = std::max(P.degree(), 1);
  auto eval = [&](int m) {
    const Mat C = build_cmv(alpha, m).dense();
    const Mat C0 = build_cmv(VerblunskySeq(), m).dense();
    Mat X = Mat::Identity(m, m);
    Mat X0 = Mat::Identity(m, m);
    cplx acc = P[0] * (X - X0).trace();
    for (int j = 1; j <= P.degree(); ++j) {
      X = X * C;
      X0 = X0 * C0;
      acc += P[j] * (X - X0).trace();
    }
    return acc;
  };
  const int m = margin(alpha, deg);
  const cplx a = eval(m);
  check_stable(a, eval(m + 1), "trace of P(C) - P(C0)", m);
  return a.real();
}

cplx trace_diff_diagonal(const VerblunskySeq& alpha) {
  kernels::CompensatedComplexSum s;
  s.add(std::conj(alpha[0]));
  for (std::size_t k = 1; k < alpha.size(); ++k) s.add(-std::conj(alpha[k]) * alpha[k - 1]);
  return s.value();
}

cplx trace_diff_entrywise(const VerblunskySeq& alpha) {
  const int m = margin(alpha, 1);
  const Mat C = build_cmv(alpha, m).dense();
  const Mat C0 = build_cmv(VerblunskySeq(), m).dense();
  return (C - C0).trace();
}

}  // namespace opuc
