#include "opuc/variational.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <random>

#include <fmt/format.h>

#include "opuc/kernels.hpp"

namespace opuc {

OuterPoly::OuterPoly(std::vector<cplx> roots, double scale) : roots_(std::move(roots)), scale_(scale) {
  if (!(scale > 0.0)) throw Error(ErrorKind::domain, fmt::format("outer polynomial scale {} must be positive", scale));
  for (std::size_t j = 0; j < roots_.size(); ++j)
    if (!(std::abs(roots_[j]) > 1.0))
      throw Error(ErrorKind::domain, fmt::format("outer polynomial root {} has modulus {:.17g} <= 1", j,
                                                 std::abs(roots_[j])));
}

cplx OuterPoly::operator()(cplx z) const {
  cplx v = scale_;
  for (cplx r : roots_) v *= 1.0 - z / r;
  return v;
}

Polynomial OuterPoly::coefficients() const {
  std::vector<cplx> c{cplx{scale_, 0.0}};
  for (cplx r : roots_) {
    std::vector<cplx> next(c.size() + 1);
    for (std::size_t k = 0; k < c.size(); ++k) {
      next[k] += c[k];
      next[k + 1] -= c[k] / r;
    }
    c = std::move(next);
  }
  return Polynomial(std::move(c));
}

NormalizedWeight::NormalizedWeight(const WeightPoly& weight, const CircleGrid& grid) : weight_(weight) {
  const double m = quad_mean(grid, weight.sample(grid));
  if (!(m > 0.0)) throw Error(ErrorKind::domain, "weight has zero mean");
  C0_ = 1.0 / m;
}

std::vector<double> NormalizedWeight::sample(const CircleGrid& grid) const {
  auto v = weight_.sample(grid);
  for (double& x : v) x *= C0_;
  return v;
}

TrigPoly NormalizedWeight::trig() const {
  TrigPoly p = weight_.trig();
  for (int j = -p.degree(); j <= p.degree(); ++j) p.at(j) *= C0_;
  return p;
}

double lambda_eval(const OuterPoly& g, const NormalizedWeight& p0, const CircleGrid& grid) {
  const auto w = p0.sample(grid);
  const auto lg = grid.sample([&](cplx t) { return std::log(std::abs(g(t))); });
  return std::exp(kernels::dot(w, lg) / static_cast<double>(grid.size()));
}

double sigma_norm_sq(const PSMeasure& sigma, const OuterPoly& g) {
  const CircleGrid& grid = sigma.grid();
  const auto logd = sigma.log_density();
  kernels::CompensatedSum acc;
  for (std::size_t j = 0; j < grid.size(); ++j) acc.add(std::exp(2.0 * std::log(std::abs(g(grid.node(j)))) + logd[j]));
  double v = acc.value() / static_cast<double>(grid.size());
  for (const Atom& a : sigma.atoms()) v += a.mass * std::norm(g(a.location()));
  return v;
}

SandwichReport sandwich_check(const PSMeasure& sigma, const NormalizedWeight& p0,
                              const std::vector<OuterPoly>& candidates, const VerblunskySeq& alpha, int n_max) {
  if (!sigma.is_poly_szego()) throw Error(ErrorKind::class_violation, "sandwich_check needs a (pS) measure");
  const CircleGrid& grid = sigma.grid();
  const double M = static_cast<double>(grid.size());
  const auto w = p0.sample(grid);
  const auto logd = sigma.log_density();
  std::vector<double> lo(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) lo[j] = logd[j] - std::log(w[j]);
  SandwichReport r;
  r.lower = std::exp(kernels::dot(w, lo) / M);
  r.upper = std::exp(kernels::dot(w, logd) / M);
  r.best_candidate = std::numeric_limits<double>::infinity();
  r.best_witness = std::numeric_limits<double>::infinity();
  r.min_slack = std::numeric_limits<double>::infinity();
  for (const OuterPoly& g : candidates) {
    const double lam = lambda_eval(g, p0, grid);
    const double v = sigma_norm_sq(sigma, g) / (lam * lam);
    r.candidate_values.push_back(v);
    r.best_candidate = std::min(r.best_candidate, v);
    r.min_slack = std::min(r.min_slack, v - r.lower);
  }
  PhiSweep sweep(alpha.padded(std::max<std::size_t>(alpha.size(), static_cast<std::size_t>(n_max))), grid.nodes());
  std::vector<double> L(grid.size());
  for (int n = 0; n <= n_max; ++n) {
    sweep.advance_to(n);
    for (std::size_t j = 0; j < grid.size(); ++j) L[j] = std::log(std::abs(sweep.phi_star(j)));
    const double v = std::exp(-2.0 * kernels::dot(w, L) / M);
    r.witness_values.push_back(v);
    r.best_witness = std::min(r.best_witness, v);
    r.min_slack = std::min(r.min_slack, v - r.lower);
  }
  if (r.min_slack < -sandwich_slack) {
    for (std::size_t i = 0; i < r.candidate_values.size(); ++i)
      if (r.candidate_values[i] - r.lower < -sandwich_slack)
        throw Error(ErrorKind::numerical,
                    fmt::format("candidate {} (degree {}, scale {:.6g}) violates the lower bound by {:.3g}", i,
                                candidates[i].roots().size(), candidates[i].scale(),
                                r.lower - r.candidate_values[i]));
    throw Error(ErrorKind::numerical, fmt::format("a witness phi*_n violates the lower bound by {:.3g}", -r.min_slack));
  }
  return r;
}

std::vector<OuterPoly> random_outer_polys(std::size_t count, int max_degree, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> deg(1, std::max(1, max_degree));
  std::uniform_real_distribution<double> mod(1.05, 4.0);
  std::uniform_real_distribution<double> ang(0.0, 2.0 * pi);
  std::uniform_real_distribution<double> sc(0.2, 2.0);
  std::vector<OuterPoly> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const int d = deg(rng);
    std::vector<cplx> roots;
    for (int k = 0; k < d; ++k) {
      const double m = mod(rng);
      roots.push_back(std::polar(m, ang(rng)));
    }
    out.emplace_back(std::move(roots), sc(rng));
  }
  return out;
}

double classical_distance_from_moments(const std::vector<cplx>& c, int n) {
  if (n < 0 || c.size() < static_cast<std::size_t>(n) + 1)
    throw Error(ErrorKind::index, "classical_distance: not enough moments");
  Eigen::MatrixXcd T(n + 1, n + 1);
  for (int j = 0; j <= n; ++j)
    for (int k = 0; k <= n; ++k) {
      const int d = k - j;
      T(j, k) = d >= 0 ? c[static_cast<std::size_t>(d)] : std::conj(c[static_cast<std::size_t>(-d)]);
    }
  Eigen::LLT<Eigen::MatrixXcd> llt(T);
  if (llt.info() != Eigen::Success)
    throw Error(ErrorKind::ill_conditioned, fmt::format("Toeplitz moment matrix of order {} is not positive definite", n + 1));
  Eigen::VectorXcd e = Eigen::VectorXcd::Zero(n + 1);
  e(0) = 1.0;
  const Eigen::VectorXcd x = llt.solve(e);
  const double v = x(0).real();
  if (!(v > 0.0) || !std::isfinite(v))
    throw Error(ErrorKind::ill_conditioned, "classical_distance: normal equations are singular");
  return 1.0 / v;
}

double classical_distance(const PSMeasure& sigma, int n) {
  return classical_distance_from_moments(moments(sigma, n), n);
}

double nu_phase(const NormalizedWeight& p0, double s) {
  if (s < 0.0 || s > 2.0 * pi) throw Error(ErrorKind::domain, fmt::format("nu_phase: s = {} outside [0, 2 pi]", s));
  const TrigPoly p = p0.trig();
  cplx v = p[0] * s;
  for (int j = 1; j <= p.degree(); ++j) {
    const cplx e = std::polar(1.0, j * s) - 1.0;
    v += p[j] * e / cplx{0.0, static_cast<double>(j)};
    v += p[-j] * std::conj(e) / cplx{0.0, -static_cast<double>(j)};
  }
  return v.real();
}

}  // namespace opuc
