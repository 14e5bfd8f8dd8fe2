#pragma once

#include <vector>

#include "opuc/circle.hpp"
#include "opuc/measures.hpp"
#include "opuc/szego.hpp"

namespace opuc {

/// P(z) = 2 sum_{j>=1} (a_j / j) z^j and A_0 = 2 a_0, where
/// p = a_0 + 2 Re sum_j a_j t^j.
struct AnalyticPart {
  Polynomial P;
  double A0 = 0.0;
};

AnalyticPart build_P(const WeightPoly& weight);

/// int p log sigma'_ac dm on the measure's grid, with its refinement scan.
struct ZDirect {
  double value = 0.0;
  RefinementScan scan;
};

ZDirect Z_direct(const PSMeasure& sigma, const WeightPoly& weight);

/// A_0 t_0 + Re tr(P(C) - P(C_0)).
double Z_trace(const VerblunskySeq& alpha, const WeightPoly& weight);

/// C_1 = 0.99 / max_grid p.
double C1_constant(const WeightPoly& weight, const CircleGrid& grid);

struct FOriginSequence {
  std::vector<double> log_f;  // log f_n(0), n = 0..n_max
  double target = 0.0;        // C_1 Z / 2
  double C1 = 0.0;
  /// max_n (log f_{n+1}(0) - log f_n(0)); positive means an increase.
  double max_increase = 0.0;
  std::size_t first_increase = 0;  // index n of the first step exceeding the slack, or log_f.size()
};

inline constexpr double monotone_slack = 1e-12;

FOriginSequence f_origin_sequence(const PSMeasure& sigma, const VerblunskySeq& alpha, int n_max);

struct SumRuleReport {
  double Z_direct = 0.0;
  double Z_trace = 0.0;
  double discrepancy = 0.0;
  AnalyticPart P;
  double C1 = 0.0;
  RefinementScan scan;
  std::vector<double> f_sequence;
  /// max over n of mean(p log(1/|phi*_n|^2)) minus Z_direct, on the tail n >= n_max/2.
  double semicontinuity_gap = 0.0;
};

/// Both sides of the sum rule. Z_trace is filled only when the
/// Verblunsky sequence is exactly known and finitely supported.
SumRuleReport sum_rule(const PSMeasure& sigma, const VerblunskySeq& alpha, int n_max);

}  // namespace opuc
