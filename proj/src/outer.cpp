#include "opuc/outer.hpp"

#include <Eigen/Dense>
#include <cmath>

#include <fmt/format.h>

#include "opuc/kernels.hpp"

namespace opuc {

cplx KernelK::operator()(cplx t, cplx z) const { return (t + z) / (t - z) * weight_.q(t) * weight_.inv_q(z); }

double direct_route_radius(std::size_t M) { return 1.0 - 40.0 / static_cast<double>(M); }

namespace {

void check_radius(cplx z, double delta_min) {
  if (std::abs(z) > 1.0 - delta_min)
    throw Error(ErrorKind::domain, fmt::format("|z| = {:.17g} exceeds the limit radius {:.17g}", std::abs(z),
                                               1.0 - delta_min));
}

cplx route(const CircleGrid& grid, std::span<const double> g, const SchwarzTransform& series, cplx z) {
  if (std::abs(z) <= direct_route_radius(grid.size())) return kernels::cauchy_mean(grid.re(), grid.im(), g, z);
  return series.at(z);
}

std::vector<double> product(std::span<const double> a, std::span<const double> b) {
  std::vector<double> out(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) out[j] = a[j] * b[j];
  return out;
}

}  // namespace

ModifiedSchwarz::ModifiedSchwarz(const CircleGrid& grid, const WeightPoly& weight, std::span<const double> g)
    : weight_(weight),
      grid_(grid),
      g_(g.begin(), g.end()),
      p_(weight.sample(grid)),
      pg_(product(p_, g_)),
      series_(grid, pg_) {}

cplx ModifiedSchwarz::at(cplx z, double delta_min) const {
  check_radius(z, delta_min);
  const cplx iq = weight_.inv_q(z);
  if (iq == cplx{}) return {};
  return route(grid_, pg_, series_, z) * iq;
}

std::vector<cplx> ModifiedSchwarz::boundary() const {
  std::vector<cplx> b = series_.boundary();
  for (std::size_t j = 0; j < b.size(); ++j) b[j] = {g_[j], b[j].imag() / p_[j]};
  return b;
}

cplx ModifiedSchwarz::boundary_at(double theta) const {
  const cplx t = std::polar(1.0, theta);
  return series_.boundary_at(theta) / weight_(t);
}

std::vector<cplx> ModifiedSchwarz::ring(double r) const {
  std::vector<cplx> v = series_.ring(r);
  for (std::size_t j = 0; j < v.size(); ++j) v[j] *= weight_.inv_q(r * grid_.node(j));
  return v;
}

ClassicalSchwarz::ClassicalSchwarz(const CircleGrid& grid, std::span<const double> g)
    : grid_(grid), g_(g.begin(), g.end()), series_(grid, g_) {}

cplx ClassicalSchwarz::at(cplx z, double delta_min) const {
  check_radius(z, delta_min);
  return route(grid_, g_, series_, z);
}

namespace {

std::vector<double> log_abs_values(const Polynomial& P, const CircleGrid& grid) {
  std::vector<double> L(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) L[j] = std::log(std::abs(P(grid.node(j))));
  return L;
}

Polynomial phistar_poly(const VerblunskySeq& alpha, int n) {
  const VerblunskySeq a = alpha.padded(std::max<std::size_t>(alpha.size(), static_cast<std::size_t>(n)));
  return orthonormalize(recurse(a, n), a).phi_star;
}

std::vector<double> sum_2L_plus(std::span<const double> L, std::span<const double> logd) {
  std::vector<double> H(L.size());
  for (std::size_t j = 0; j < L.size(); ++j) H[j] = 2.0 * L[j] + logd[j];
  return H;
}

void require_poly_szego(const PSMeasure& sigma) {
  if (!sigma.is_poly_szego())
    throw Error(ErrorKind::class_violation, "measure is not in the polynomial Szego class");
}

}  // namespace

OuterFunctions::OuterFunctions(const PSMeasure& sigma, const VerblunskySeq& alpha, int n,
                               std::optional<std::vector<double>> log_phistar)
    : sigma_(&sigma),
      n_(n),
      phistar_(phistar_poly(alpha, n)),
      logd_(sigma.log_density()),
      L_(log_phistar ? std::move(*log_phistar) : log_abs_values(phistar_, sigma.grid())),
      Elogd_(sigma.grid(), sigma.weight(), logd_),
      EL_(sigma.grid(), sigma.weight(), L_),
      EH_(sigma.grid(), sigma.weight(), sum_2L_plus(L_, logd_)),
      SL_(sigma.grid(), L_) {
  require_poly_szego(sigma);
  if (L_.size() != sigma.grid().size()) throw Error(ErrorKind::contract, "log|phi*| samples do not match the grid");
  if (sigma.is_szego()) Slogd_.emplace(sigma.grid(), logd_);
}

void OuterFunctions::check_point(cplx z) const {
  for (const auto& zz : sigma_->weight().zeros())
    if (std::abs(z - zz.zeta) < 1e-14) throw Error(ErrorKind::pole, "evaluation point at a weight zero");
}

cplx OuterFunctions::D(cplx z) const {
  if (!Slogd_) throw Error(ErrorKind::class_violation, "D is undefined: measure is not in the Szego class");
  return std::exp(0.5 * Slogd_->at(z));
}

cplx OuterFunctions::Dtilde(cplx z) const {
  check_point(z);
  return std::exp(0.5 * Elogd_.at(z));
}

cplx OuterFunctions::psi_exponent(cplx z) const {
  check_point(z);
  return EL_.at(z) - SL_.at(z);
}

cplx OuterFunctions::xi(cplx z) const {
  check_point(z);
  return std::exp(0.5 * EH_.at(z));
}

std::vector<cplx> OuterFunctions::psi_boundary() const {
  const auto e = EL_.boundary();
  const auto s = SL_.boundary();
  std::vector<cplx> out(e.size());
  for (std::size_t j = 0; j < e.size(); ++j) out[j] = std::exp(cplx{0.0, e[j].imag() - s[j].imag()});
  return out;
}

std::vector<cplx> OuterFunctions::xi_boundary() const {
  auto e = EH_.boundary();
  for (auto& v : e) v = std::exp(0.5 * v);
  return e;
}

std::vector<cplx> OuterFunctions::Dtilde_boundary() const {
  auto e = Elogd_.boundary();
  for (auto& v : e) v = std::exp(0.5 * v);
  return e;
}

cplx OuterFunctions::psi_boundary_at(double theta) const {
  const cplx e = EL_.boundary_at(theta) - SL_.boundary_at(theta);
  return std::exp(cplx{0.0, e.imag()});
}

std::vector<cplx> OuterFunctions::xi_ring(double r) const {
  auto e = EH_.ring(r);
  for (auto& v : e) v = std::exp(0.5 * v);
  return e;
}

cplx D_eval(const PSMeasure& sigma, cplx z) {
  if (!sigma.is_szego()) throw Error(ErrorKind::class_violation, "D is undefined: measure is not in the Szego class");
  const auto logd = sigma.log_density();
  return std::exp(0.5 * ClassicalSchwarz(sigma.grid(), logd).at(z));
}

cplx Dtilde_eval(const PSMeasure& sigma, cplx z) {
  require_poly_szego(sigma);
  for (const auto& zz : sigma.weight().zeros())
    if (std::abs(z - zz.zeta) < 1e-14) throw Error(ErrorKind::pole, "evaluation point at a weight zero");
  const auto logd = sigma.log_density();
  return std::exp(0.5 * ModifiedSchwarz(sigma.grid(), sigma.weight(), logd).at(z));
}

cplx psi_eval(const PSMeasure& sigma, int n, cplx z) {
  return OuterFunctions(sigma, verblunsky_from_measure(sigma, n), n).psi(z);
}

cplx phitilde_star_eval(const PSMeasure& sigma, int n, cplx z) {
  return OuterFunctions(sigma, verblunsky_from_measure(sigma, n), n).phitilde_star(z);
}

cplx xi_eval(const PSMeasure& sigma, int n, cplx z) {
  return OuterFunctions(sigma, verblunsky_from_measure(sigma, n), n).xi(z);
}

cplx PsiCoefficients::exponent(const WeightPoly& weight, cplx z) const {
  cplx e = A0;
  for (std::size_t k = 0; k < A.size(); ++k) {
    const cplx zeta = weight.zeros()[k].zeta;
    const cplx w = (z + zeta) / (z - zeta);
    cplx wj{1.0, 0.0};
    for (const cplx a : A[k]) {
      wj *= w;
      e += a * wj;
    }
  }
  return e;
}

namespace {

std::vector<cplx> check_points() {
  std::vector<cplx> z;
  for (double r : {0.3, 0.55, 0.8})
    for (int k = 0; k < 8; ++k) z.push_back(std::polar(r, 2.0 * pi * (k + 0.25) / 8.0));
  return z;
}

void fill_residual(PsiCoefficients& c, const OuterFunctions& f, const WeightPoly& w) {
  c.residual = 0.0;
  for (const cplx z : check_points()) {
    const cplx ref = f.psi_exponent(z);
    c.residual = std::max(c.residual, std::abs(c.exponent(w, z) - ref) / std::max(1.0, std::abs(ref)));
  }
}

PsiCoefficients residue_extract(const OuterFunctions& f, const WeightPoly& W) {
  const CircleGrid& grid = f.measure().grid();
  const std::vector<double>& L = f.log_phistar_nodes();
  const auto& zeros = W.zeros();
  const std::size_t K = zeros.size();
  const double Np = W.order();
  const cplx sC = W.scale() * W.C();

  PsiCoefficients c;
  c.method = PsiCoefficients::Method::residue;
  c.A.assign(K, std::vector<cplx>(2));
  std::vector<kernels::CompensatedComplexSum> s1(K), s2(K);
  kernels::CompensatedComplexSum s0;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const cplx t = grid.node(j);
    const double pt = W(t);
    cplx a12sum{};
    for (std::size_t k = 0; k < K; ++k) {
      const cplx zeta = zeros[k].zeta;
      cplx R = pt * std::pow(zeta, Np) / sC;
      cplx dlog = Np / zeta;
      for (std::size_t i = 0; i < K; ++i) {
        if (i == k) continue;
        R /= (zeta - zeros[i].zeta) * (zeta - zeros[i].zeta);
        dlog -= 2.0 / (zeta - zeros[i].zeta);
      }
      const cplx g = (t + zeta) / (t - zeta);
      const cplx dg = 2.0 * t / ((t - zeta) * (t - zeta));
      const cplx c2 = g * R;
      const cplx c1 = dg * R + g * R * dlog;
      const cplx a2 = c2 / (4.0 * zeta * zeta);
      const cplx a1 = c1 / (2.0 * zeta) - c2 / (2.0 * zeta * zeta);
      s1[k].add(a1 * L[j]);
      s2[k].add(a2 * L[j]);
      a12sum += a1 + a2;
    }
    s0.add((1.0 - a12sum) * L[j]);
  }
  const double inv = 1.0 / static_cast<double>(grid.size());
  c.A0 = s0.value() * inv;
  c.reality_defect = std::abs(c.A0.real());
  for (std::size_t k = 0; k < K; ++k) {
    c.A[k][0] = s1[k].value() * inv;
    c.A[k][1] = s2[k].value() * inv;
    c.reality_defect = std::max({c.reality_defect, std::abs(c.A[k][0].imag()), std::abs(c.A[k][1].real())});
  }
  return c;
}

PsiCoefficients least_squares_extract(const OuterFunctions& f, const WeightPoly& W) {
  std::vector<cplx> z;
  for (double r : {0.6, 0.85})
    for (int k = 0; k < 64; ++k) z.push_back(std::polar(r, 2.0 * pi * (k + 0.5) / 64.0));
  int cols = 1;
  for (const auto& zz : W.zeros()) cols += 2 * zz.kappa;
  Eigen::MatrixXcd B(static_cast<Eigen::Index>(z.size()), cols);
  Eigen::VectorXcd y(static_cast<Eigen::Index>(z.size()));
  for (std::size_t i = 0; i < z.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    B(r, 0) = 1.0;
    int col = 1;
    for (const auto& zz : W.zeros()) {
      const cplx w = (z[i] + zz.zeta) / (z[i] - zz.zeta);
      cplx wj{1.0, 0.0};
      for (int j = 1; j <= 2 * zz.kappa; ++j) {
        wj *= w;
        B(r, col++) = wj;
      }
    }
    y(r) = f.psi_exponent(z[i]);
  }
  const Eigen::VectorXcd x = B.colPivHouseholderQr().solve(y);
  PsiCoefficients c;
  c.method = PsiCoefficients::Method::least_squares;
  c.A0 = x(0);
  int col = 1;
  for (const auto& zz : W.zeros()) {
    std::vector<cplx> a;
    for (int j = 1; j <= 2 * zz.kappa; ++j) a.push_back(x(col++));
    c.A.push_back(std::move(a));
  }
  c.reality_defect = std::abs(c.A0.real());
  bool all_simple = true;
  for (const auto& zz : W.zeros()) all_simple = all_simple && zz.kappa == 1;
  if (all_simple)
    for (const auto& a : c.A) c.reality_defect = std::max({c.reality_defect, std::abs(a[0].imag()), std::abs(a[1].real())});
  return c;
}

}  // namespace

PsiCoefficients coeff_extract(const PSMeasure& sigma, const VerblunskySeq& alpha, int n) {
  const OuterFunctions f(sigma, alpha, n);
  const WeightPoly& W = sigma.weight();
  bool all_simple = true;
  for (const auto& zz : W.zeros()) all_simple = all_simple && zz.kappa == 1;
  PsiCoefficients c = all_simple ? residue_extract(f, W) : least_squares_extract(f, W);
  fill_residual(c, f, W);
  if (c.residual > extraction_tol)
    throw Error(ErrorKind::extraction,
                fmt::format("psi_{} coefficient fit residual {:.3g} exceeds {:.0e}", n, c.residual, extraction_tol));
  return c;
}

PsiCoefficients coeff_extract(const PSMeasure& sigma, int n) {
  return coeff_extract(sigma, verblunsky_from_measure(sigma, n), n);
}

P1Coefficients p1_coefficients(const VerblunskySeq& alpha, int n) {
  P1Coefficients c;
  if (n < 0) return c;
  kernels::CompensatedSum A;
  for (int k = 0; k <= n; ++k) {
    const double a = std::abs(alpha[static_cast<std::size_t>(k)]);
    A.add(0.5 * (std::log1p(-a) + std::log1p(a)));
  }
  c.A = A.value();
  cplx s = alpha[0];
  for (int k = 1; k <= n; ++k)
    s -= std::conj(alpha[static_cast<std::size_t>(k - 1)]) * alpha[static_cast<std::size_t>(k)];
  c.B = cplx{0.0, 0.25 * s.imag()};
  return c;
}

cplx psi_p1_closed_form(const VerblunskySeq& alpha, int n, cplx z, const WeightPoly& weight) {
  if (!weight.is_p1()) throw Error(ErrorKind::contract, "psi_p1_closed_form needs the weight 1 - cos(theta)");
  if (n <= 0) return {1.0, 0.0};
  const P1Coefficients c = p1_coefficients(alpha, n - 1);
  const cplx w = (1.0 + z) / (1.0 - z);
  return std::exp(c.A * w + c.B * (w * w - 1.0));
}

}  // namespace opuc
