#pragma once

#include <optional>
#include <span>
#include <vector>

#include "opuc/circle.hpp"
#include "opuc/szego.hpp"

namespace opuc {

struct WeightZero {
  cplx zeta;
  int kappa = 1;
};

/// p(t) = scale * prod_k |t - zeta_k|^{2 kappa_k} and its analytic
/// continuation q(z) = scale * C * prod_k (z - zeta_k)^{2 kappa_k} / z^{N'}.
class WeightPoly {
 public:
  WeightPoly() = default;
  explicit WeightPoly(std::vector<WeightZero> zeros, double scale = 1.0);

  /// 1 - cos(theta) = |1 - t|^2 / 2.
  static WeightPoly p1();

  const std::vector<WeightZero>& zeros() const { return zeros_; }
  int order() const { return order_; }  // N'
  double scale() const { return scale_; }
  cplx C() const { return C_; }

  double operator()(cplx t) const;
  cplx q(cplx z) const;
  /// 1/q(z); zero at the origin, pole error at a weight zero.
  cplx inv_q(cplx z) const;
  /// Exact Laurent coefficients of p.
  TrigPoly trig() const;
  std::vector<double> sample(const CircleGrid& grid) const;
  /// Smallest angular distance from t to a weight zero (pi if there are none).
  double distance_to_zeros(cplx t) const;
  bool is_p1() const;

 private:
  std::vector<WeightZero> zeros_;
  double scale_ = 1.0;
  int order_ = 0;
  cplx C_{1.0, 0.0};
};

struct Atom {
  double angle = 0.0;
  double mass = 0.0;
  cplx location() const { return std::polar(1.0, angle); }
};

enum class DensityKind { lebesgue, bernstein_szego, ps_family, table };

const char* to_string(DensityKind kind);

/// Probability measure sigma = sigma'_ac dm + sum of atoms.
class PSMeasure {
 public:
  DensityKind kind() const { return kind_; }
  const WeightPoly& weight() const { return weight_; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  const CircleGrid& grid() const { return grid_; }
  double ac_mass() const { return ac_mass_; }
  bool is_szego() const { return is_szego_; }
  bool is_poly_szego() const { return is_poly_szego_; }
  const RefinementScan& szego_scan() const { return szego_scan_; }
  const RefinementScan& poly_szego_scan() const { return poly_szego_scan_; }
  const std::vector<double>& betas() const { return betas_; }

  /// Exactly known Verblunsky coefficients (Bernstein-Szego without atoms,
  /// Lebesgue without atoms).
  const std::optional<VerblunskySeq>& known_verblunsky() const { return known_alpha_; }

  /// log sigma'_ac at the nodes of any grid.
  std::vector<double> log_density(const CircleGrid& grid) const;
  std::vector<double> log_density() const { return log_density(grid_); }
  std::vector<double> density(const CircleGrid& grid) const;
  std::vector<double> density() const { return density(grid_); }
  double log_density_at(double theta) const;

  /// Same measure sampled on a different grid.
  PSMeasure regrid(std::size_t M, double offset) const;

  /// Number of nodes where a tabulated density was floored at 1e-300.
  std::size_t guarded_nodes() const { return guarded_; }

  friend PSMeasure make_lebesgue(std::vector<Atom>, const CircleGrid&, WeightPoly);
  friend PSMeasure make_bernstein_szego(const VerblunskySeq&, std::vector<Atom>, const CircleGrid&,
                                        WeightPoly);
  friend PSMeasure make_ps_family(const WeightPoly&, std::vector<double>, std::vector<Atom>,
                                  const CircleGrid&);
  friend PSMeasure make_table_measure(std::vector<double>, std::vector<Atom>, const CircleGrid&,
                                      WeightPoly);

 private:
  PSMeasure() : grid_(CircleGrid::make(4)) {}
  void finish();

  DensityKind kind_ = DensityKind::lebesgue;
  WeightPoly weight_;
  std::vector<Atom> atoms_;
  CircleGrid grid_;
  double ac_mass_ = 1.0;
  double log_norm_ = 0.0;
  std::vector<cplx> bs_alpha_;
  std::vector<double> betas_;
  std::vector<double> table_;
  double table_offset_ = 0.5;
  std::optional<VerblunskySeq> known_alpha_;
  bool is_szego_ = true;
  bool is_poly_szego_ = true;
  RefinementScan szego_scan_;
  RefinementScan poly_szego_scan_;
  std::size_t guarded_ = 0;
};

inline constexpr double density_floor = 1e-300;
/// Largest accepted |discrete mass - 1| on the measure's grid or its
/// 2x / 4x refinements.
inline constexpr double mass_resolution_tol = 1e-8;

PSMeasure make_lebesgue(std::vector<Atom> atoms = {},
                        const CircleGrid& grid = CircleGrid::make(4096, 0.5),
                        WeightPoly weight = WeightPoly::p1());

/// sigma'_ac = (1 - atom mass) / |phi*_N|^2.
PSMeasure make_bernstein_szego(const VerblunskySeq& alpha, std::vector<Atom> atoms = {},
                               const CircleGrid& grid = CircleGrid::make(4096, 0.5),
                               WeightPoly weight = WeightPoly({{cplx{1.0, 0.0}, 1}}));

/// sigma'_ac proportional to exp(-sum_k d_k^{-beta_k}), d_k the angular
/// distance to zeta_k. Refuses beta_k >= 2 kappa_k + 1.
PSMeasure make_ps_family(const WeightPoly& weight, std::vector<double> betas,
                         std::vector<Atom> atoms = {},
                         const CircleGrid& grid = CircleGrid::make(4096, 0.5));

/// Density tabulated on `grid` (rescaled to mass 1 - atoms), periodic
/// linear interpolation in theta on other grids.
PSMeasure make_table_measure(std::vector<double> values, std::vector<Atom> atoms,
                             const CircleGrid& grid, WeightPoly weight);

/// Smallest power of two M >= M_min with r^M <= tol, where r is the largest
/// root modulus of Phi_N. Trapezoid sums of the Bernstein-Szego density and
/// its logarithm then carry aliasing errors of order tol. Capped at M_max.
std::size_t resolving_grid_size(const VerblunskySeq& alpha, double tol = 1e-16, std::size_t M_min = 4096,
                                std::size_t M_max = std::size_t{1} << 21);

/// c_k = int t^{-k} dsigma, k = 0..K, on the measure's grid.
std::vector<cplx> moments(const PSMeasure& sigma, int K);

}  // namespace opuc
