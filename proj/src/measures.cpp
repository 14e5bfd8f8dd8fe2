#include "opuc/measures.hpp"

#include <cmath>
#include <numeric>

#include <Eigen/Dense>

#include <fmt/format.h>

#include "opuc/kernels.hpp"

namespace opuc {

WeightPoly::WeightPoly(std::vector<WeightZero> zeros, double scale) : zeros_(std::move(zeros)), scale_(scale) {
  if (!(scale > 0.0)) throw Error(ErrorKind::domain, fmt::format("weight scale {} must be positive", scale));
  cplx prod{1.0, 0.0};
  for (std::size_t k = 0; k < zeros_.size(); ++k) {
    const auto& z = zeros_[k];
    if (std::abs(std::abs(z.zeta) - 1.0) > 1e-12)
      throw Error(ErrorKind::domain, fmt::format("weight zero {} has modulus {:.17g}, not 1", k, std::abs(z.zeta)));
    if (z.kappa < 1) throw Error(ErrorKind::domain, fmt::format("weight zero {} has multiplicity {}", k, z.kappa));
    order_ += z.kappa;
    prod *= std::pow(-z.zeta, z.kappa);
  }
  C_ = 1.0 / prod;
}

WeightPoly WeightPoly::p1() { return WeightPoly({{cplx{1.0, 0.0}, 1}}, 0.5); }

bool WeightPoly::is_p1() const {
  return zeros_.size() == 1 && zeros_[0].kappa == 1 && std::abs(zeros_[0].zeta - 1.0) < 1e-14 &&
         std::abs(scale_ - 0.5) < 1e-15;
}

double WeightPoly::operator()(cplx t) const {
  double v = scale_;
  for (const auto& z : zeros_) v *= std::pow(std::norm(t - z.zeta), z.kappa);
  return v;
}

cplx WeightPoly::q(cplx z) const {
  if (z == cplx{}) throw Error(ErrorKind::pole, fmt::format("q has a pole of order {} at 0", order_));
  cplx v = scale_ * C_;
  for (const auto& zz : zeros_) v *= std::pow(z - zz.zeta, 2 * zz.kappa);
  return v / std::pow(z, order_);
}

cplx WeightPoly::inv_q(cplx z) const {
  if (z == cplx{}) return order_ == 0 ? cplx{1.0 / scale_, 0.0} : cplx{};
  cplx den = scale_ * C_;
  for (const auto& zz : zeros_) {
    if (z == zz.zeta) throw Error(ErrorKind::pole, "1/q has a pole at a weight zero");
    den *= std::pow(z - zz.zeta, 2 * zz.kappa);
  }
  return std::pow(z, order_) / den;
}

TrigPoly WeightPoly::trig() const {
  TrigPoly p(0, {cplx{scale_, 0.0}});
  for (const auto& z : zeros_) {
    // |t - zeta|^2 = 2 - conj(zeta) t - zeta / t
    const TrigPoly f(1, {-z.zeta, cplx{2.0, 0.0}, -std::conj(z.zeta)});
    for (int k = 0; k < z.kappa; ++k) p = p * f;
  }
  return p;
}

std::vector<double> WeightPoly::sample(const CircleGrid& grid) const {
  return grid.sample([this](cplx t) { return (*this)(t); });
}

double WeightPoly::distance_to_zeros(cplx t) const {
  double d = pi;
  for (const auto& z : zeros_) d = std::min(d, std::abs(std::arg(t / z.zeta)));
  return d;
}

const char* to_string(DensityKind kind) {
  switch (kind) {
    case DensityKind::lebesgue: return "lebesgue";
    case DensityKind::bernstein_szego: return "bernstein_szego";
    case DensityKind::ps_family: return "ps_family";
    case DensityKind::table: return "table";
  }
  return "unknown";
}

double PSMeasure::log_density_at(double theta) const {
  const double lm = std::log(ac_mass_);
  switch (kind_) {
    case DensityKind::lebesgue: return lm;
    case DensityKind::bernstein_szego: {
      const VerblunskySeq a(bs_alpha_);
      const PolyPair pp = recurse(a, static_cast<int>(a.size()));
      const cplx t = std::polar(1.0, theta);
      return lm - 2.0 * (std::log(std::abs(pp.PhiStar(t))) - a.log_A(a.size()));
    }
    case DensityKind::ps_family: {
      const cplx t = std::polar(1.0, theta);
      double s = 0.0;
      for (std::size_t k = 0; k < betas_.size(); ++k) {
        const double d = std::abs(std::arg(t / weight_.zeros()[k].zeta));
        s -= std::pow(d, -betas_[k]);
      }
      return s - log_norm_ + lm;
    }
    case DensityKind::table: {
      const double Mt = static_cast<double>(table_.size());
      double u = theta * Mt / (2.0 * pi) - table_offset_;
      u -= Mt * std::floor(u / Mt);
      const auto j0 = static_cast<std::size_t>(std::floor(u)) % table_.size();
      const std::size_t j1 = (j0 + 1) % table_.size();
      const double f = u - std::floor(u);
      const double v = (1.0 - f) * table_[j0] + f * table_[j1];
      return std::log(std::max(v, density_floor)) - log_norm_ + lm;
    }
  }
  return lm;
}

std::vector<double> PSMeasure::log_density(const CircleGrid& grid) const {
  std::vector<double> out(grid.size());
  if (kind_ == DensityKind::bernstein_szego) {
    const VerblunskySeq a(bs_alpha_);
    const PolyPair pp = recurse(a, static_cast<int>(a.size()));
    const double lA = a.log_A(a.size());
    const double lm = std::log(ac_mass_);
    for (std::size_t j = 0; j < grid.size(); ++j)
      out[j] = lm - 2.0 * (std::log(std::abs(pp.PhiStar(grid.node(j)))) - lA);
    return out;
  }
  for (std::size_t j = 0; j < grid.size(); ++j) out[j] = log_density_at(grid.theta(j));
  return out;
}

std::vector<double> PSMeasure::density(const CircleGrid& grid) const {
  std::vector<double> v = log_density(grid);
  for (double& x : v) x = std::exp(x);
  return v;
}

PSMeasure PSMeasure::regrid(std::size_t M, double offset) const {
  PSMeasure m = *this;
  m.grid_ = CircleGrid::make(M, offset);
  return m;
}

namespace {

double atom_mass(const std::vector<Atom>& atoms) {
  double s = 0.0;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (!(atoms[i].mass > 0.0) || !std::isfinite(atoms[i].angle))
      throw Error(ErrorKind::configuration, fmt::format("atoms[{}]: mass must be positive", i));
    s += atoms[i].mass;
  }
  if (s > 1.0 + 1e-15) throw Error(ErrorKind::configuration, fmt::format("atom masses sum to {:.17g} > 1", s));
  if (s >= 1.0 - 1e-15)
    throw Error(ErrorKind::class_violation, "atoms carry all the mass; sigma'_ac = 0 is not in (pS)");
  return s;
}

}  // namespace

void PSMeasure::finish() {
  ac_mass_ = 1.0 - atom_mass(atoms_);
  const std::size_t M = grid_.size();
  const double off = grid_.offset();
  szego_scan_ = refinement_scan([this](const CircleGrid& g) { return quad_mean(g, log_density(g)); }, M, off);
  poly_szego_scan_ = refinement_scan(
      [this](const CircleGrid& g) {
        const auto L = log_density(g);
        const auto p = weight_.sample(g);
        return kernels::dot(p, L) / static_cast<double>(g.size());
      },
      M, off);
  is_szego_ = szego_scan_.converged;
  is_poly_szego_ = poly_szego_scan_.converged || is_szego_;
  if (!is_poly_szego_)
    throw Error(ErrorKind::class_violation,
                fmt::format("int p log sigma' dm does not converge under refinement (last diff {:.3g}, ratio {:.3g})",
                            poly_szego_scan_.last_diff, poly_szego_scan_.ratio));
  if (kind_ == DensityKind::table) {
    guarded_ = 0;
    for (double v : table_)
      if (v < density_floor) ++guarded_;
  }
  // Analytically normalized densities may need the finer scan grids to
  // show their mass.
  double total = quad_mean(grid_, density()) + (1.0 - ac_mass_);
  for (std::size_t Mc = 2 * M; std::abs(total - 1.0) > mass_resolution_tol && Mc <= 4 * M; Mc *= 2) {
    const CircleGrid g = CircleGrid::make(Mc, off);
    total = quad_mean(g, density(g)) + (1.0 - ac_mass_);
  }
  if (std::abs(total - 1.0) > mass_resolution_tol)
    throw Error(ErrorKind::ill_conditioned,
                fmt::format("discrete mass {:.17g} differs from 1 by more than {:.0e} up to M = {}; the grid "
                            "under-resolves the density",
                            total, mass_resolution_tol, 4 * M));
}

PSMeasure make_lebesgue(std::vector<Atom> atoms, const CircleGrid& grid, WeightPoly weight) {
  PSMeasure m;
  m.kind_ = DensityKind::lebesgue;
  m.weight_ = std::move(weight);
  m.atoms_ = std::move(atoms);
  m.grid_ = grid;
  m.finish();
  if (m.atoms_.empty()) m.known_alpha_ = VerblunskySeq();
  return m;
}

PSMeasure make_bernstein_szego(const VerblunskySeq& alpha, std::vector<Atom> atoms, const CircleGrid& grid,
                               WeightPoly weight) {
  PSMeasure m;
  m.kind_ = DensityKind::bernstein_szego;
  m.weight_ = std::move(weight);
  m.atoms_ = std::move(atoms);
  m.grid_ = grid;
  m.bs_alpha_.assign(alpha.values().begin(), alpha.values().end());
  m.finish();
  if (m.atoms_.empty()) m.known_alpha_ = alpha;
  return m;
}

PSMeasure make_ps_family(const WeightPoly& weight, std::vector<double> betas, std::vector<Atom> atoms,
                         const CircleGrid& grid) {
  if (betas.size() != weight.zeros().size())
    throw Error(ErrorKind::configuration,
                fmt::format("ps_family: {} exponents for {} weight zeros", betas.size(), weight.zeros().size()));
  for (std::size_t k = 0; k < betas.size(); ++k) {
    const int kappa = weight.zeros()[k].kappa;
    if (!(betas[k] > 0.0))
      throw Error(ErrorKind::configuration, fmt::format("ps_family: beta_{} = {} must be positive", k, betas[k]));
    if (betas[k] >= 2.0 * kappa + 1.0)
      throw Error(ErrorKind::class_violation,
                  fmt::format("ps_family: beta_{} = {} >= 2 kappa + 1 = {}; int p log sigma' dm diverges", k,
                              betas[k], 2 * kappa + 1));
  }
  PSMeasure m;
  m.kind_ = DensityKind::ps_family;
  m.weight_ = weight;
  m.atoms_ = std::move(atoms);
  m.grid_ = grid;
  m.betas_ = std::move(betas);
  // Normalize exp(-sum d^{-beta}) to unit mean; the integrand is smooth and
  // flat at the zeros, so the trapezoid sum is already at machine precision.
  m.log_norm_ = 0.0;
  m.ac_mass_ = 1.0;
  {
    const auto L = m.log_density(grid);
    double mx = -INFINITY;
    for (double v : L) mx = std::max(mx, v);
    kernels::CompensatedSum s;
    for (double v : L) s.add(std::exp(v - mx));
    m.log_norm_ = mx + std::log(s.value() / static_cast<double>(grid.size()));
  }
  m.finish();
  return m;
}

PSMeasure make_table_measure(std::vector<double> values, std::vector<Atom> atoms, const CircleGrid& grid,
                             WeightPoly weight) {
  if (values.size() != grid.size())
    throw Error(ErrorKind::configuration,
                fmt::format("table density has {} values for a grid of {}", values.size(), grid.size()));
  for (std::size_t j = 0; j < values.size(); ++j)
    if (!(values[j] >= 0.0) || !std::isfinite(values[j]))
      throw Error(ErrorKind::configuration, fmt::format("density.values[{}] is negative or not finite", j));
  PSMeasure m;
  m.kind_ = DensityKind::table;
  m.weight_ = std::move(weight);
  m.atoms_ = std::move(atoms);
  m.grid_ = grid;
  m.table_ = std::move(values);
  m.table_offset_ = grid.offset();
  const double mean = quad_mean(grid, m.table_);
  if (!(mean > 0.0)) throw Error(ErrorKind::class_violation, "table density vanishes identically");
  m.log_norm_ = std::log(mean);
  m.finish();
  return m;
}

std::size_t resolving_grid_size(const VerblunskySeq& alpha, double tol, std::size_t M_min, std::size_t M_max) {
  const int n = static_cast<int>(alpha.support());
  std::size_t M = M_min;
  if (n == 0) return M;
  const Polynomial Phi = recurse(alpha, n).Phi;
  Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) comp(i, n - 1) = -Phi[i];
  const Eigen::VectorXcd roots = comp.eigenvalues();
  const double r = roots.cwiseAbs().maxCoeff();
  if (r == 0.0) return M;
  const double need = std::log(tol) / std::log(r);
  while (static_cast<double>(M) < need && M < M_max) M *= 2;
  return M;
}

std::vector<cplx> moments(const PSMeasure& sigma, int K) {
  const CircleGrid& grid = sigma.grid();
  const TrigPoly f = fourier_coeffs(grid, std::span<const double>(sigma.density()), K);
  std::vector<cplx> c(static_cast<std::size_t>(K) + 1);
  for (int k = 0; k <= K; ++k) c[static_cast<std::size_t>(k)] = f[k];
  for (const Atom& a : sigma.atoms())
    for (int k = 0; k <= K; ++k) c[static_cast<std::size_t>(k)] += a.mass * std::polar(1.0, -k * a.angle);
  if (std::abs(c[0] - 1.0) > 1e-10)
    throw Error(ErrorKind::contract, fmt::format("moments: total mass {:.17g} is not 1", c[0].real()));
  return c;
}

}  // namespace opuc
