#pragma once

#include <utility>
#include <vector>

#include "opuc/circle.hpp"
#include "opuc/measures.hpp"
#include "opuc/outer.hpp"
#include "opuc/szego.hpp"

namespace opuc {

struct PointwiseRow {
  int n = 0;
  cplx z;
  double error = 0.0;  // |xi_n(z) - 1|
};

std::vector<PointwiseRow> pointwise_table(const PSMeasure& sigma, const VerblunskySeq& alpha,
                                          const std::vector<cplx>& probes, const std::vector<int>& ns);

struct L2Row {
  int n = 0;
  /// mean |xi_n - 1|^2 over boundary values at the nodes.
  double direct = 0.0;
  /// mean(|phi*_n|^2 sigma'_ac) - 1.
  double mass_formula = 0.0;
  /// 2 (1 - Re mean xi_n) - singular mass; equals direct when xi_n is in H^2.
  double expanded = 0.0;
  /// sum mu_i |phi_n(t_i)|^2.
  double singular = 0.0;
};

L2Row l2_error(const PSMeasure& sigma, const VerblunskySeq& alpha, int n);

struct BoundScan {
  std::vector<int> n;
  std::vector<double> stat;  // max_z |xi_n(z)| sqrt(1 - |z|) on the probe set
  std::size_t probes = 0;
  double max_half = 0.0;     // max over n <= n_max/2
  double max_full = 0.0;     // max over n <= n_max
  double growth = 0.0;       // max_full / max_half - 1
  bool growth_flag = false;  // growth > 5%
};

inline constexpr double bound_growth_limit = 0.05;

/// Probes: nodes of the rings |z| in {0.9, 0.99, 0.999} at distance > 2 eps
/// from every weight zero.
BoundScan bound_scan(const PSMeasure& sigma, const VerblunskySeq& alpha, double eps, int n_max, int n_step = 1);

struct Arc {
  double a = 0.0;
  double b = 0.0;
};

struct ArcRow {
  int n = 0;
  std::size_t arc = 0;
  double error = 0.0;   // int_I |xi_n - 1|^2 dm from boundary values
  double radial = 0.0;  // same from r = 1 - 10/M and 1 - 20/M, Richardson-combined
  double mass = 0.0;    // int_I |xi_n|^2 dm
  double measure = 0.0; // m(I)
};

std::vector<ArcRow> arc_l2(const PSMeasure& sigma, const VerblunskySeq& alpha, const std::vector<Arc>& arcs,
                           double eps, int n);

struct RakhmanovRow {
  int n = 0;
  std::size_t fn = 0;
  cplx value;      // int f |phi_n|^2 dsigma
  cplx reference;  // int f dm
};

std::vector<RakhmanovRow> rakhmanov_check(const PSMeasure& sigma, const VerblunskySeq& alpha,
                                          const std::vector<TrigPoly>& testfns, int n);

/// sum_i mu_i |phi_n(t_i)|^2 for n = 0..n_max.
std::vector<double> singular_decay(const PSMeasure& sigma, const VerblunskySeq& alpha, int n_max);

struct WaveRow {
  int n = 0;
  /// ||psi_n phi*_n - chi_{E_ac}/D~||_{L^2(sigma)}.
  double a = 0.0;
  /// ||(psi_{n+2l} - psi_n) phi*_n||_{L^2(sigma)}, n even.
  double b = 0.0;
};

std::vector<WaveRow> wave_symbol_check(const PSMeasure& sigma, const VerblunskySeq& alpha,
                                       const std::vector<int>& ns, int l);

}  // namespace opuc
