#pragma once

#include <cstdint>
#include <vector>

#include "opuc/circle.hpp"
#include "opuc/measures.hpp"
#include "opuc/szego.hpp"

namespace opuc {

/// g(z) = scale * prod_j (1 - z / z_j) with every |z_j| > 1.
class OuterPoly {
 public:
  OuterPoly() = default;
  OuterPoly(std::vector<cplx> roots, double scale);

  const std::vector<cplx>& roots() const { return roots_; }
  double scale() const { return scale_; }
  cplx operator()(cplx z) const;
  Polynomial coefficients() const;

 private:
  std::vector<cplx> roots_;
  double scale_ = 1.0;
};

/// p_0 = C_0 p with mean(p_0) = 1.
class NormalizedWeight {
 public:
  NormalizedWeight(const WeightPoly& weight, const CircleGrid& grid);

  const WeightPoly& weight() const { return weight_; }
  double C0() const { return C0_; }
  double operator()(cplx t) const { return C0_ * weight_(t); }
  std::vector<double> sample(const CircleGrid& grid) const;
  /// Exact Laurent coefficients of p_0.
  TrigPoly trig() const;

 private:
  WeightPoly weight_;
  double C0_ = 1.0;
};

/// exp(mean(p_0 log|g|)).
double lambda_eval(const OuterPoly& g, const NormalizedWeight& p0, const CircleGrid& grid);

/// ||g||^2_{L^2(sigma)} with exact atom sums.
double sigma_norm_sq(const PSMeasure& sigma, const OuterPoly& g);

struct SandwichReport {
  double lower = 0.0;  // exp(mean(p_0 log(sigma'/p_0)))
  double upper = 0.0;  // exp(mean(p_0 log sigma'))
  /// ||g||^2_sigma / lambda(g)^2 for each candidate.
  std::vector<double> candidate_values;
  /// 1 / lambda(phi*_n)^2 for the witnesses n = 0..n_max.
  std::vector<double> witness_values;
  double best_candidate = 0.0;
  double best_witness = 0.0;
  /// min over candidates and witnesses of value - lower (negative = violation).
  double min_slack = 0.0;
};

inline constexpr double sandwich_slack = 1e-9;

SandwichReport sandwich_check(const PSMeasure& sigma, const NormalizedWeight& p0,
                              const std::vector<OuterPoly>& candidates, const VerblunskySeq& alpha, int n_max);

/// Seeded random outer polynomials: degree 1..max_degree, roots with
/// modulus in (1.05, 4), scale in (0.2, 2).
std::vector<OuterPoly> random_outer_polys(std::size_t count, int max_degree, std::uint64_t seed);

/// min ||f||^2_sigma over deg f <= n, f(0) = 1, i.e. 1 / (T_n^{-1})_{00}.
double classical_distance(const PSMeasure& sigma, int n);
double classical_distance_from_moments(const std::vector<cplx>& c, int n);

/// nu(s) = int_0^s p_0(e^{i u}) du, exact from the Laurent coefficients.
double nu_phase(const NormalizedWeight& p0, double s);

}  // namespace opuc
