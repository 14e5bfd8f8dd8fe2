#include "opuc/szego.hpp"

#include <cmath>

#include <fmt/format.h>

#include "opuc/kernels.hpp"
#include "opuc/measures.hpp"

namespace opuc {

cplx Polynomial::operator()(cplx z) const {
  cplx s{0.0, 0.0};
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) s = s * z + *it;
  return s;
}

Polynomial Polynomial::reversed(int n) const {
  if (n < degree()) throw Error(ErrorKind::contract, "reversed: formal degree below actual degree");
  std::vector<cplx> r(static_cast<std::size_t>(n + 1));
  for (int k = 0; k <= n; ++k) r[static_cast<std::size_t>(k)] = std::conj((*this)[n - k]);
  return Polynomial(std::move(r));
}

Polynomial Polynomial::scaled(double s) const {
  std::vector<cplx> r = c_;
  for (auto& v : r) v *= s;
  return Polynomial(std::move(r));
}

VerblunskySeq::VerblunskySeq(std::vector<cplx> alpha) : alpha_(std::move(alpha)) {
  for (std::size_t k = 0; k < alpha_.size(); ++k)
    if (!(std::abs(alpha_[k]) < 1.0))
      throw Error(ErrorKind::domain, fmt::format("|alpha_{}| = {:.17g} is not below 1", k, std::abs(alpha_[k])));
}

double VerblunskySeq::rho(std::size_t k) const {
  const double a = std::abs((*this)[k]);
  return std::sqrt((1.0 - a) * (1.0 + a));
}

double VerblunskySeq::log_A(std::size_t n) const {
  kernels::CompensatedSum s;
  for (std::size_t k = 0; k < std::min(n, alpha_.size()); ++k) {
    const double a = std::abs(alpha_[k]);
    s.add(0.5 * (std::log1p(-a) + std::log1p(a)));
  }
  return s.value();
}

double VerblunskySeq::A(std::size_t n) const {
  double p = 1.0;
  for (std::size_t k = 0; k < std::min(n, alpha_.size()); ++k) p *= rho(k);
  return p;
}

std::size_t VerblunskySeq::support() const {
  std::size_t s = alpha_.size();
  while (s > 0 && alpha_[s - 1] == cplx{}) --s;
  return s;
}

VerblunskySeq VerblunskySeq::padded(std::size_t n) const {
  std::vector<cplx> a(n);
  for (std::size_t k = 0; k < n; ++k) a[k] = (*this)[k];
  return VerblunskySeq(std::move(a));
}

PolyPair recurse(const VerblunskySeq& alpha, int n) {
  if (n < 0 || static_cast<std::size_t>(n) > alpha.size())
    throw Error(ErrorKind::index,
                fmt::format("recurse: degree {} needs {} coefficients, have {}", n, n, alpha.size()));
  std::vector<cplx> Phi{cplx{1.0, 0.0}};
  std::vector<cplx> Star{cplx{1.0, 0.0}};
  for (int k = 0; k < n; ++k) {
    const cplx a = alpha[static_cast<std::size_t>(k)];
    std::vector<cplx> P2(Phi.size() + 1);
    std::vector<cplx> S2(Phi.size() + 1);
    for (std::size_t j = 0; j < Phi.size(); ++j) {
      P2[j + 1] += Phi[j];
      P2[j] -= std::conj(a) * Star[j];
      S2[j] += Star[j];
      S2[j + 1] -= a * Phi[j];
    }
    Phi = std::move(P2);
    Star = std::move(S2);
  }
  return {Polynomial(std::move(Phi)), Polynomial(std::move(Star)), n};
}

OrthoPair orthonormalize(const PolyPair& pair, const VerblunskySeq& alpha) {
  if (pair.Phi.degree() != pair.n || pair.PhiStar.degree() != pair.n)
    throw Error(ErrorKind::contract, "orthonormalize: degree mismatch");
  const double A = alpha.A(static_cast<std::size_t>(pair.n));
  return {pair.Phi.scaled(1.0 / A), pair.PhiStar.scaled(1.0 / A), A};
}

namespace {

constexpr double alpha_cap = 1.0 - 1e-12;

}  // namespace

LevinsonResult verblunsky_from_moments(std::span<const cplx> c, int n) {
  if (n < 0 || c.size() < static_cast<std::size_t>(n) + 1)
    throw Error(ErrorKind::index, fmt::format("verblunsky_from_moments: {} coefficients need {} moments", n, n + 1));
  if (std::abs(c[0] - 1.0) > 1e-10)
    throw Error(ErrorKind::contract, fmt::format("c_0 = {:.17g} is not 1", std::abs(c[0])));
  std::vector<cplx> Phi{cplx{1.0, 0.0}};
  std::vector<cplx> alpha;
  for (int m = 0; m < n; ++m) {
    // conj(alpha_m) = int z Phi_m dsigma / int Phi*_m dsigma
    kernels::CompensatedComplexSum num;
    kernels::CompensatedComplexSum den;
    const std::size_t d = Phi.size() - 1;
    for (std::size_t j = 0; j <= d; ++j) {
      num.add(Phi[j] * std::conj(c[j + 1]));
      den.add(std::conj(Phi[d - j]) * std::conj(c[j]));
    }
    if (std::abs(den.value()) == 0.0)
      throw Error(ErrorKind::ill_conditioned, fmt::format("Levinson step {}: vanishing denominator", m));
    const cplx ab = num.value() / den.value();
    if (std::abs(ab) >= alpha_cap)
      throw Error(ErrorKind::ill_conditioned,
                  fmt::format("Levinson step {}: |alpha_{}| = {:.17g} reached 1 - 1e-12", m, m, std::abs(ab)));
    alpha.push_back(std::conj(ab));
    std::vector<cplx> next(Phi.size() + 1);
    for (std::size_t j = 0; j <= d; ++j) {
      next[j + 1] += Phi[j];
      next[j] -= ab * std::conj(Phi[d - j]);
    }
    Phi = std::move(next);
  }
  LevinsonResult out{VerblunskySeq(alpha), 0.0};
  const auto rebuilt = moments_from_verblunsky(out.alpha, n);
  for (int k = 0; k <= n; ++k)
    out.residual = std::max(out.residual, std::abs(rebuilt[static_cast<std::size_t>(k)] - c[static_cast<std::size_t>(k)]));
  return out;
}

std::vector<cplx> moments_from_verblunsky(const VerblunskySeq& alpha, int K) {
  std::vector<cplx> c(static_cast<std::size_t>(K) + 1);
  c[0] = 1.0;
  std::vector<cplx> Phi{cplx{1.0, 0.0}};
  for (int m = 0; m < K; ++m) {
    const std::size_t d = Phi.size() - 1;
    kernels::CompensatedComplexSum den;
    for (std::size_t j = 0; j <= d; ++j) den.add(std::conj(Phi[d - j]) * std::conj(c[j]));
    const cplx ab = std::conj(alpha[static_cast<std::size_t>(m)]);
    // Phi_m is monic, so the top term of the numerator isolates conj(c_{m+1}).
    kernels::CompensatedComplexSum lower;
    for (std::size_t j = 0; j < d; ++j) lower.add(Phi[j] * std::conj(c[j + 1]));
    c[static_cast<std::size_t>(m) + 1] = std::conj(ab * den.value() - lower.value());
    std::vector<cplx> next(Phi.size() + 1);
    for (std::size_t j = 0; j <= d; ++j) {
      next[j + 1] += Phi[j];
      next[j] -= ab * std::conj(Phi[d - j]);
    }
    Phi = std::move(next);
  }
  return c;
}

VerblunskySeq verblunsky_from_measure(const PSMeasure& sigma, int n) {
  if (n < 0) throw Error(ErrorKind::index, "verblunsky_from_measure: negative count");
  if (sigma.known_verblunsky()) return sigma.known_verblunsky()->padded(static_cast<std::size_t>(n));

  const CircleGrid& grid = sigma.grid();
  const std::vector<double> dens = sigma.density();
  std::vector<cplx> z = grid.nodes();
  std::vector<double> w(dens.size());
  for (std::size_t j = 0; j < dens.size(); ++j) w[j] = dens[j] / static_cast<double>(grid.size());
  for (const Atom& a : sigma.atoms()) {
    z.push_back(a.location());
    w.push_back(a.mass);
  }
  std::vector<cplx> ph(z.size(), cplx{1.0, 0.0});
  std::vector<cplx> ps(z.size(), cplx{1.0, 0.0});
  std::vector<cplx> alpha;
  alpha.reserve(static_cast<std::size_t>(n));
  for (int m = 0; m < n; ++m) {
    kernels::CompensatedSum nrm;
    for (std::size_t j = 0; j < z.size(); ++j) nrm.add(w[j] * std::norm(ps[j]));
    const double s = 1.0 / std::sqrt(nrm.value());
    kernels::CompensatedComplexSum acc;
    for (std::size_t j = 0; j < z.size(); ++j) {
      ph[j] *= s;
      ps[j] *= s;
      acc.add(w[j] * z[j] * ph[j] * std::conj(ps[j]));
    }
    const cplx ab = acc.value();
    if (std::abs(ab) >= alpha_cap)
      throw Error(ErrorKind::ill_conditioned,
                  fmt::format("Szego recurrence step {}: |alpha_{}| = {:.17g}", m, m, std::abs(ab)));
    alpha.push_back(std::conj(ab));
    for (std::size_t j = 0; j < z.size(); ++j) {
      const cplx zp = z[j] * ph[j];
      const cplx nph = zp - ab * ps[j];
      ps[j] = ps[j] - std::conj(ab) * zp;
      ph[j] = nph;
    }
  }
  return VerblunskySeq(std::move(alpha));
}

PhiSweep::PhiSweep(VerblunskySeq alpha, std::vector<cplx> points)
    : alpha_(std::move(alpha)),
      z_(std::move(points)),
      Phi_(z_.size(), cplx{1.0, 0.0}),
      PhiStar_(z_.size(), cplx{1.0, 0.0}) {}

std::vector<cplx> PhiSweep::phi() const {
  std::vector<cplx> v(Phi_.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = Phi_[i] / A_;
  return v;
}

std::vector<cplx> PhiSweep::phi_star() const {
  std::vector<cplx> v(PhiStar_.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = PhiStar_[i] / A_;
  return v;
}

void PhiSweep::advance() {
  const cplx a = alpha_[static_cast<std::size_t>(n_)];
  for (std::size_t i = 0; i < z_.size(); ++i) {
    const cplx zp = z_[i] * Phi_[i];
    const cplx nP = zp - std::conj(a) * PhiStar_[i];
    PhiStar_[i] = PhiStar_[i] - a * zp;
    Phi_[i] = nP;
  }
  A_ *= alpha_.rho(static_cast<std::size_t>(n_));
  ++n_;
}

void PhiSweep::advance_to(int n) {
  if (n < n_) throw Error(ErrorKind::contract, "PhiSweep cannot move backwards");
  while (n_ < n) advance();
}

}  // namespace opuc
