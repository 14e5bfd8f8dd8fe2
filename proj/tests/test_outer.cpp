#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "opuc/outer.hpp"

using opuc::cplx;
using opuc::VerblunskySeq;

namespace {
const cplx I{0.0, 1.0};
opuc::PSMeasure bs(std::vector<cplx> a, std::size_t M = 4096, opuc::WeightPoly W = opuc::WeightPoly({{cplx{1.0, 0.0}, 1}})) {
  return opuc::make_bernstein_szego(VerblunskySeq(std::move(a)), {}, opuc::CircleGrid::make(M), std::move(W));
}
}  // namespace

TEST_CASE("Lebesgue measure: every outer function is 1") {
  const auto m = opuc::make_lebesgue();
  const opuc::OuterFunctions of(m, VerblunskySeq{}, 5);
  for (cplx z : {cplx{0.0, 0.0}, cplx{0.3, 0.2}, cplx{-0.7, 0.1}}) {
    CHECK(std::abs(of.D(z) - 1.0) < 1e-14);
    CHECK(std::abs(of.Dtilde(z) - 1.0) < 1e-14);
    CHECK(std::abs(of.psi(z) - 1.0) < 1e-14);
    CHECK(std::abs(of.xi(z) - 1.0) < 1e-14);
  }
  const auto c = opuc::coeff_extract(m, 4);
  CHECK(std::abs(c.A0) < 1e-10);
  for (const auto& row : c.A)
    for (cplx x : row) CHECK(std::abs(x) < 1e-10);
}

TEST_CASE("Szego function of a Bernstein-Szego measure") {
  const auto m = bs({0.5});
  for (cplx z : {cplx{0.0, 0.0}, cplx{0.3, 0.0}, 0.5 * I}) CHECK(std::abs(opuc::D_eval(m, z) - std::sqrt(0.75) / (1.0 - 0.5 * z)) < 1e-8);
  const double ref = std::exp(0.5 * opuc::quad_mean(m.grid(), m.log_density()));
  CHECK(opuc::D_eval(m, 0.0).real() == doctest::Approx(ref).epsilon(1e-14));
  CHECK(opuc::D_eval(m, 0.0).real() > 0.0);
}

TEST_CASE("D is refused outside the Szego class") {
  const auto m = opuc::make_ps_family(opuc::WeightPoly({{cplx{1.0, 0.0}, 1}}), {1.5});
  try {
    opuc::D_eval(m, 0.1);
    FAIL("D evaluated on a non-Szego measure");
  } catch (const opuc::Error& e) {
    CHECK(e.kind() == opuc::ErrorKind::class_violation);
  }
  CHECK(std::abs(opuc::Dtilde_eval(m, 0.0) - 1.0) < 1e-12);
}

TEST_CASE("normalization at the origin") {
  std::mt19937_64 rng(53);
  const auto m = opuc::make_ps_family(opuc::WeightPoly({{cplx{1.0, 0.0}, 1}}), {1.5}, {{opuc::pi, 0.2}});
  const auto a = opuc::verblunsky_from_measure(m, 12);
  for (int n : {0, 1, 5, 12}) {
    const opuc::OuterFunctions of(m, a, n);
    CHECK(std::abs(of.Dtilde(0.0) - 1.0) < 1e-12);
    CHECK(std::abs(of.phitilde_star(0.0) - 1.0) < 1e-12);
    CHECK(std::abs(of.xi(0.0) - 1.0) < 1e-12);
    CHECK(std::abs(of.psi(0.0) * of.phi_star(0.0) - 1.0) < 1e-12);
  }
  const auto b = bs(oracle::random_alpha(rng, 3, 0.7));
  CHECK(std::abs(opuc::xi_eval(b, 2, 0.0) - 1.0) < 1e-12);
}

TEST_CASE("xi is the product of D~ and phi~*") {
  const auto m = opuc::make_ps_family(opuc::WeightPoly({{cplx{1.0, 0.0}, 1}}), {1.5});
  for (cplx z : {cplx{0.5, 0.0}, cplx{0.1, -0.6}, cplx{-0.3, 0.3}}) {
    const cplx lhs = opuc::xi_eval(m, 7, z);
    const cplx rhs = opuc::Dtilde_eval(m, z) * opuc::phitilde_star_eval(m, 7, z);
    CHECK(std::abs(lhs - rhs) <= 1e-10);
  }
}

TEST_CASE("xi is identically 1 past the support") {
  std::mt19937_64 rng(59);
  for (int trial = 0; trial < 3; ++trial) {
    const auto a = oracle::random_alpha(rng, 3, 0.7);
    const auto m = bs(a);
    const auto alpha = opuc::verblunsky_from_measure(m, 10);
    for (int n : {3, 4, 10}) {
      const opuc::OuterFunctions of(m, alpha, n);
      for (cplx z : {cplx{0.5, 0.0}, cplx{0.0, 0.9}, cplx{-0.99, 0.0}}) CHECK(std::abs(of.xi(z) - 1.0) < 1e-10);
    }
  }
}

TEST_CASE("boundary moduli") {
  const auto m = bs({0.5}, 8192);
  const auto a = opuc::verblunsky_from_measure(m, 6);
  const opuc::OuterFunctions of(m, a, 6);
  const double r = 0.999;
  const cplx t = I;
  CHECK(std::abs(std::norm(of.Dtilde(r * t)) - std::exp(m.log_density_at(opuc::pi / 2))) < 1e-3);

  const auto ps = opuc::make_ps_family(opuc::WeightPoly({{cplx{1.0, 0.0}, 1}}), {1.5}, {}, opuc::CircleGrid::make(8192));
  const auto pa = opuc::verblunsky_from_measure(ps, 8);
  const opuc::OuterFunctions po(ps, pa, 8);
  for (double th : {1.0, 2.0, 3.0, 4.5}) CHECK(std::abs(std::abs(po.psi(r * std::polar(1.0, th))) - 1.0) < 1e-3);
}

TEST_CASE("direct and series routes agree across the routing radius") {
  const auto m = opuc::make_ps_family(opuc::WeightPoly({{cplx{1.0, 0.0}, 1}}), {1.5});
  const auto a = opuc::verblunsky_from_measure(m, 4);
  const opuc::OuterFunctions of(m, a, 4);
  const double r0 = opuc::direct_route_radius(m.grid().size());
  for (double th : {0.7, 2.0, -2.5}) {
    const cplx inside = (r0 - 1e-9) * std::polar(1.0, th);
    const cplx outside = (r0 + 1e-9) * std::polar(1.0, th);
    CHECK(std::abs(of.psi(inside) - of.psi(outside)) < 1e-8);
  }
}

TEST_CASE("exponent coefficients") {
  SUBCASE("reality pattern on random Bernstein-Szego inputs") {
    std::mt19937_64 rng(61);
    for (int trial = 0; trial < 4; ++trial) {
      const auto m = bs(oracle::random_alpha(rng, 2, 0.6));
      const auto c = opuc::coeff_extract(m, 3);
      CHECK(c.method == opuc::PsiCoefficients::Method::residue);
      CHECK(c.reality_defect < 1e-8);
      CHECK(c.residual < opuc::extraction_tol);
    }
  }
  SUBCASE("least squares covers a double zero") {
    const auto m = opuc::make_bernstein_szego(VerblunskySeq({0.4}), {}, opuc::CircleGrid::make(4096),
                                              opuc::WeightPoly({{cplx{1.0, 0.0}, 2}}));
    const auto c = opuc::coeff_extract(m, 2);
    CHECK(c.method == opuc::PsiCoefficients::Method::least_squares);
    CHECK(c.residual < opuc::extraction_tol);
  }
}

TEST_CASE("p1 example coefficients") {
  CHECK(std::abs(opuc::p1_coefficients(VerblunskySeq({0.5, -0.2}), 3).B) == 0.0);
  for (int n : {0, 1, 5}) CHECK(std::abs(opuc::p1_coefficients(VerblunskySeq({0.5 * I}), n).B - 0.125 * I) < 1e-16);
  CHECK(opuc::p1_coefficients(VerblunskySeq({0.5}), 4).A == doctest::Approx(0.5 * std::log(0.75)));
  CHECK_THROWS_AS(opuc::psi_p1_closed_form(VerblunskySeq({0.5}), 2, 0.2, opuc::WeightPoly({{cplx{1.0, 0.0}, 1}})), opuc::Error);
}

TEST_CASE("p1 closed form matches the integral evaluation") {
  for (cplx a0 : {cplx{0.5, 0.0}, 0.5 * I}) {
    const auto m = bs({a0}, 8192, opuc::WeightPoly::p1());
    const VerblunskySeq alpha({a0});
    for (int n = 0; n <= 20; ++n) {
      for (cplx z : {cplx{0.2, 0.0}, 0.4 * I, cplx{-0.5, 0.0}}) {
        const cplx closed = opuc::psi_p1_closed_form(alpha, n, z);
        const cplx integral = opuc::psi_eval(m, n, z);
        CHECK(std::abs(closed - integral) <= 1e-6 * std::abs(integral));
      }
    }
  }
}
