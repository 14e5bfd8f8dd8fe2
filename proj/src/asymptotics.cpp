#include "opuc/asymptotics.hpp"

#include <cmath>

#include <fmt/format.h>

#include "opuc/kernels.hpp"

namespace opuc {
namespace {

VerblunskySeq padded_to(const VerblunskySeq& alpha, int n) {
  return alpha.padded(std::max<std::size_t>(alpha.size(), static_cast<std::size_t>(std::max(n, 0))));
}

// phi*_n at the grid nodes, by the recurrence on values.
std::vector<cplx> phistar_nodes(const VerblunskySeq& alpha, int n, const CircleGrid& grid) {
  PhiSweep s(padded_to(alpha, n), grid.nodes());
  s.advance_to(n);
  return s.phi_star();
}

std::vector<double> log_abs(const std::vector<cplx>& v) {
  std::vector<double> out(v.size());
  for (std::size_t j = 0; j < v.size(); ++j) out[j] = std::log(std::abs(v[j]));
  return out;
}

OuterFunctions outer_at(const PSMeasure& sigma, const VerblunskySeq& alpha, int n) {
  return OuterFunctions(sigma, padded_to(alpha, n), n, log_abs(phistar_nodes(alpha, n, sigma.grid())));
}

std::vector<cplx> atom_points(const PSMeasure& sigma) {
  std::vector<cplx> z;
  for (const Atom& a : sigma.atoms()) z.push_back(a.location());
  return z;
}

double singular_mass(const PSMeasure& sigma, const VerblunskySeq& alpha, int n) {
  if (sigma.atoms().empty()) return 0.0;
  PhiSweep s(padded_to(alpha, n), atom_points(sigma));
  s.advance_to(n);
  kernels::CompensatedSum acc;
  for (std::size_t i = 0; i < sigma.atoms().size(); ++i) acc.add(sigma.atoms()[i].mass * std::norm(s.phi_star(i)));
  return acc.value();
}

double mean_sq_minus_one(const std::vector<cplx>& v) {
  kernels::CompensatedSum acc;
  for (cplx x : v) acc.add(std::norm(x - 1.0));
  return acc.value() / static_cast<double>(v.size());
}

void check_probe(const PSMeasure& sigma, cplx z) {
  if (!(std::abs(z) < 1.0)) throw Error(ErrorKind::domain, fmt::format("probe |z| = {} not inside the disk", std::abs(z)));
  for (const auto& zz : sigma.weight().zeros())
    if (std::abs(z - zz.zeta) < 1e-12) throw Error(ErrorKind::pole, "probe sits on a weight zero");
}

}  // namespace

std::vector<PointwiseRow> pointwise_table(const PSMeasure& sigma, const VerblunskySeq& alpha,
                                          const std::vector<cplx>& probes, const std::vector<int>& ns) {
  for (cplx z : probes) check_probe(sigma, z);
  std::vector<PointwiseRow> rows;
  for (int n : ns) {
    const OuterFunctions f = outer_at(sigma, alpha, n);
    for (cplx z : probes) rows.push_back({n, z, std::abs(f.xi(z) - 1.0)});
  }
  return rows;
}

L2Row l2_error(const PSMeasure& sigma, const VerblunskySeq& alpha, int n) {
  const CircleGrid& grid = sigma.grid();
  const auto ps = phistar_nodes(alpha, n, grid);
  const OuterFunctions f(sigma, padded_to(alpha, n), n, log_abs(ps));
  const auto xb = f.xi_boundary();
  const auto logd = sigma.log_density();
  L2Row r;
  r.n = n;
  r.direct = mean_sq_minus_one(xb);
  kernels::CompensatedSum mass;
  kernels::CompensatedSum re_mean;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    mass.add(std::exp(2.0 * std::log(std::abs(ps[j])) + logd[j]));
    re_mean.add(xb[j].real());
  }
  const double M = static_cast<double>(grid.size());
  r.mass_formula = mass.value() / M - 1.0;
  r.singular = singular_mass(sigma, alpha, n);
  r.expanded = 2.0 * (1.0 - re_mean.value() / M) - r.singular;
  return r;
}

BoundScan bound_scan(const PSMeasure& sigma, const VerblunskySeq& alpha, double eps, int n_max, int n_step) {
  if (!(eps > 0.0)) throw Error(ErrorKind::configuration, "bound_scan: eps must be positive");
  if (n_step < 1) throw Error(ErrorKind::configuration, "bound_scan: step must be positive");
  const CircleGrid& grid = sigma.grid();
  const double radii[] = {0.9, 0.99, 0.999};
  std::vector<std::vector<bool>> keep;
  BoundScan out;
  for (double r : radii) {
    std::vector<bool> k(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) {
      const cplx z = r * grid.node(j);
      bool ok = true;
      for (const auto& zz : sigma.weight().zeros()) ok = ok && std::abs(z - zz.zeta) > 2.0 * eps;
      k[j] = ok;
      out.probes += ok ? 1 : 0;
    }
    keep.push_back(std::move(k));
  }
  if (out.probes == 0) throw Error(ErrorKind::configuration, "bound_scan: eps leaves no probe points");
  const VerblunskySeq a = padded_to(alpha, n_max);
  PhiSweep sweep(a, grid.nodes());
  for (int n = 0; n <= n_max; n += n_step) {
    sweep.advance_to(n);
    const OuterFunctions f(sigma, a, n, log_abs(sweep.phi_star()));
    double stat = 0.0;
    for (std::size_t ri = 0; ri < 3; ++ri) {
      const auto xi = f.xi_ring(radii[ri]);
      const double fac = std::sqrt(1.0 - radii[ri]);
      for (std::size_t j = 0; j < xi.size(); ++j)
        if (keep[ri][j]) stat = std::max(stat, std::abs(xi[j]) * fac);
    }
    out.n.push_back(n);
    out.stat.push_back(stat);
    if (2 * n <= n_max) out.max_half = std::max(out.max_half, stat);
    out.max_full = std::max(out.max_full, stat);
  }
  out.growth = out.max_half > 0.0 ? out.max_full / out.max_half - 1.0 : 0.0;
  out.growth_flag = out.growth > bound_growth_limit;
  return out;
}

namespace {

double angular_distance(double x, double y) { return std::abs(std::remainder(x - y, 2.0 * pi)); }

bool in_arc(double theta, const Arc& arc) {
  double u = std::fmod(theta - arc.a, 2.0 * pi);
  if (u < 0.0) u += 2.0 * pi;
  return u <= arc.b - arc.a;
}

}  // namespace

namespace {

// Fraction of the cell [theta - h/2, theta + h/2] covered by the arc.
double cell_fraction(double theta, double h, const Arc& arc) {
  const double a = arc.a - 2.0 * pi * std::floor(arc.a / (2.0 * pi));
  const double b = a + (arc.b - arc.a);
  double covered = 0.0;
  for (int k = -1; k <= 1; ++k) {
    const double lo = std::max(theta - 0.5 * h, a + 2.0 * pi * k);
    const double hi = std::min(theta + 0.5 * h, b + 2.0 * pi * k);
    if (hi > lo) covered += hi - lo;
  }
  return covered / h;
}

}  // namespace

std::vector<ArcRow> arc_l2(const PSMeasure& sigma, const VerblunskySeq& alpha, const std::vector<Arc>& arcs,
                           double eps, int n) {
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    const Arc& arc = arcs[i];
    if (!(arc.b > arc.a) || arc.b - arc.a >= 2.0 * pi)
      throw Error(ErrorKind::configuration, fmt::format("arcs[{}]: need a < b < a + 2 pi", i));
    for (const auto& zz : sigma.weight().zeros()) {
      const double phi = std::arg(zz.zeta);
      const double d = in_arc(phi, arc) ? 0.0 : std::min(angular_distance(phi, arc.a), angular_distance(phi, arc.b));
      if (d < eps)
        throw Error(ErrorKind::domain,
                    fmt::format("arcs[{}] comes within {:.3g} of a weight zero (margin {:.3g})", i, d, eps));
    }
  }
  const CircleGrid& grid = sigma.grid();
  const OuterFunctions f = outer_at(sigma, alpha, n);
  const auto xb = f.xi_boundary();
  const double M = static_cast<double>(grid.size());
  const auto x1 = f.xi_ring(1.0 - 10.0 / M);
  const auto x2 = f.xi_ring(1.0 - 20.0 / M);
  std::vector<ArcRow> rows;
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    kernels::CompensatedSum e, m, r1, r2;
    for (std::size_t j = 0; j < grid.size(); ++j) {
      const double w = cell_fraction(grid.theta(j), 2.0 * pi / M, arcs[i]);
      if (w == 0.0) continue;
      e.add(w * std::norm(xb[j] - 1.0));
      m.add(w * std::norm(xb[j]));
      r1.add(w * std::norm(x1[j] - 1.0));
      r2.add(w * std::norm(x2[j] - 1.0));
    }
    ArcRow row;
    row.n = n;
    row.arc = i;
    row.error = e.value() / M;
    row.mass = m.value() / M;
    row.radial = (2.0 * r1.value() - r2.value()) / M;
    row.measure = (arcs[i].b - arcs[i].a) / (2.0 * pi);
    rows.push_back(row);
  }
  return rows;
}

std::vector<RakhmanovRow> rakhmanov_check(const PSMeasure& sigma, const VerblunskySeq& alpha,
                                          const std::vector<TrigPoly>& testfns, int n) {
  const CircleGrid& grid = sigma.grid();
  const VerblunskySeq a = padded_to(alpha, n);
  PhiSweep s(a, grid.nodes());
  s.advance_to(n);
  PhiSweep sa(a, atom_points(sigma));
  sa.advance_to(n);
  const auto logd = sigma.log_density();
  std::vector<double> w(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) w[j] = std::exp(2.0 * std::log(std::abs(s.phi(j))) + logd[j]);
  std::vector<RakhmanovRow> rows;
  for (std::size_t i = 0; i < testfns.size(); ++i) {
    kernels::CompensatedComplexSum acc;
    for (std::size_t j = 0; j < grid.size(); ++j) acc.add(testfns[i](grid.node(j)) * w[j]);
    cplx v = acc.value() / static_cast<double>(grid.size());
    for (std::size_t k = 0; k < sigma.atoms().size(); ++k)
      v += sigma.atoms()[k].mass * testfns[i](sigma.atoms()[k].location()) * std::norm(sa.phi(k));
    rows.push_back({n, i, v, testfns[i][0]});
  }
  return rows;
}

std::vector<double> singular_decay(const PSMeasure& sigma, const VerblunskySeq& alpha, int n_max) {
  std::vector<double> out(static_cast<std::size_t>(n_max) + 1, 0.0);
  if (sigma.atoms().empty()) return out;
  PhiSweep s(padded_to(alpha, n_max), atom_points(sigma));
  for (int n = 0; n <= n_max; ++n) {
    s.advance_to(n);
    kernels::CompensatedSum acc;
    for (std::size_t i = 0; i < sigma.atoms().size(); ++i) acc.add(sigma.atoms()[i].mass * std::norm(s.phi(i)));
    out[static_cast<std::size_t>(n)] = acc.value();
  }
  return out;
}

std::vector<WaveRow> wave_symbol_check(const PSMeasure& sigma, const VerblunskySeq& alpha, const std::vector<int>& ns,
                                       int l) {
  if (l < 1) throw Error(ErrorKind::configuration, "wave_symbol_check: shift l must be positive");
  for (const Atom& at : sigma.atoms())
    if (sigma.weight().distance_to_zeros(at.location()) < 1e-12)
      throw Error(ErrorKind::domain, "wave_symbol_check: atom at a weight zero");
  const CircleGrid& grid = sigma.grid();
  const auto logd = sigma.log_density();
  const double M = static_cast<double>(grid.size());
  std::vector<WaveRow> rows;
  for (int n : ns) {
    if (n % 2 != 0) throw Error(ErrorKind::configuration, fmt::format("wave_symbol_check: degree {} is odd", n));
    const auto ps = phistar_nodes(alpha, n, grid);
    const auto L = log_abs(ps);
    const OuterFunctions fn(sigma, padded_to(alpha, n), n, L);
    const OuterFunctions fm = outer_at(sigma, alpha, n + 2 * l);
    const auto xb = fn.xi_boundary();
    const auto pn = fn.psi_boundary();
    const auto pm = fm.psi_boundary();
    // On the circle |D~|^2 = sigma'_ac, so the density part of (a) is mean |xi_n - 1|^2.
    kernels::CompensatedSum sa, sb;
    for (std::size_t j = 0; j < grid.size(); ++j) {
      sa.add(std::norm(xb[j] - 1.0));
      sb.add(std::norm(pm[j] - pn[j]) * std::exp(2.0 * L[j] + logd[j]));
    }
    double a2 = sa.value() / M;
    double b2 = sb.value() / M;
    if (!sigma.atoms().empty()) {
      PhiSweep s(padded_to(alpha, n), atom_points(sigma));
      s.advance_to(n);
      for (std::size_t i = 0; i < sigma.atoms().size(); ++i) {
        const Atom& at = sigma.atoms()[i];
        const double w = at.mass * std::norm(s.phi_star(i));
        a2 += w;
        b2 += w * std::norm(fm.psi_boundary_at(at.angle) - fn.psi_boundary_at(at.angle));
      }
    }
    rows.push_back({n, std::sqrt(a2), std::sqrt(b2)});
  }
  return rows;
}

}  // namespace opuc
