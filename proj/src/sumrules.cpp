#include "opuc/sumrules.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "opuc/cmv.hpp"
#include "opuc/kernels.hpp"

namespace opuc {

AnalyticPart build_P(const WeightPoly& weight) {
  const TrigPoly p = weight.trig();
  std::vector<cplx> c(static_cast<std::size_t>(p.degree()) + 1);
  for (int j = 1; j <= p.degree(); ++j) c[static_cast<std::size_t>(j)] = 2.0 * p[j] / static_cast<double>(j);
  return {Polynomial(std::move(c)), 2.0 * p[0].real()};
}

ZDirect Z_direct(const PSMeasure& sigma, const WeightPoly& weight) {
  auto f = [&](const CircleGrid& g) {
    const auto L = sigma.log_density(g);
    const auto p = weight.sample(g);
    return kernels::dot(p, L) / static_cast<double>(g.size());
  };
  ZDirect z;
  z.value = f(sigma.grid());
  z.scan = refinement_scan(f, sigma.grid().size(), sigma.grid().offset());
  if (!z.scan.converged)
    throw Error(ErrorKind::class_violation,
                fmt::format("int p log sigma' dm diverges under refinement (last diff {:.3g})", z.scan.last_diff));
  return z;
}

double Z_trace(const VerblunskySeq& alpha, const WeightPoly& weight) {
  const AnalyticPart P = build_P(weight);
  return P.A0 * alpha.log_A(alpha.size()) + trace_P_diff(alpha, P.P);
}

double C1_constant(const WeightPoly& weight, const CircleGrid& grid) {
  double mx = 0.0;
  for (double v : weight.sample(grid)) mx = std::max(mx, v);
  return mx > 0.0 ? 0.99 / mx : 0.99;
}

FOriginSequence f_origin_sequence(const PSMeasure& sigma, const VerblunskySeq& alpha, int n_max) {
  if (!sigma.is_poly_szego()) throw Error(ErrorKind::class_violation, "f_n(0) needs a (pS) measure");
  const CircleGrid& grid = sigma.grid();
  const auto p = sigma.weight().sample(grid);
  FOriginSequence out;
  out.C1 = C1_constant(sigma.weight(), grid);
  out.target = 0.5 * out.C1 * Z_direct(sigma, sigma.weight()).value;
  PhiSweep sweep(alpha.padded(std::max<std::size_t>(alpha.size(), static_cast<std::size_t>(n_max))), grid.nodes());
  std::vector<double> g(grid.size());
  for (int n = 0; n <= n_max; ++n) {
    sweep.advance_to(n);
    for (std::size_t j = 0; j < grid.size(); ++j) g[j] = -2.0 * std::log(std::abs(sweep.phi_star(j)));
    out.log_f.push_back(0.5 * out.C1 * kernels::dot(p, g) / static_cast<double>(grid.size()));
  }
  out.max_increase = -std::numeric_limits<double>::infinity();
  out.first_increase = out.log_f.size();
  for (std::size_t n = 0; n + 1 < out.log_f.size(); ++n) {
    const double d = out.log_f[n + 1] - out.log_f[n];
    out.max_increase = std::max(out.max_increase, d);
    if (d > monotone_slack && out.first_increase == out.log_f.size()) out.first_increase = n;
  }
  if (out.log_f.size() < 2) out.max_increase = 0.0;
  return out;
}

SumRuleReport sum_rule(const PSMeasure& sigma, const VerblunskySeq& alpha, int n_max) {
  SumRuleReport r;
  const WeightPoly& W = sigma.weight();
  const ZDirect zd = Z_direct(sigma, W);
  r.Z_direct = zd.value;
  r.scan = zd.scan;
  r.P = build_P(W);
  const auto fs = f_origin_sequence(sigma, alpha, n_max);
  r.C1 = fs.C1;
  r.f_sequence = fs.log_f;
  double tail = -std::numeric_limits<double>::infinity();
  for (std::size_t n = static_cast<std::size_t>(n_max) / 2; n < fs.log_f.size(); ++n)
    tail = std::max(tail, 2.0 * fs.log_f[n] / fs.C1);
  r.semicontinuity_gap = tail - r.Z_direct;
  if (sigma.known_verblunsky()) {
    r.Z_trace = Z_trace(*sigma.known_verblunsky(), W);
    r.discrepancy = std::abs(r.Z_direct - r.Z_trace);
  } else {
    r.Z_trace = std::numeric_limits<double>::quiet_NaN();
    r.discrepancy = std::numeric_limits<double>::quiet_NaN();
  }
  return r;
}

}  // namespace opuc
