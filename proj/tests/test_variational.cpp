#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "opuc/variational.hpp"

using opuc::cplx;
using opuc::VerblunskySeq;
using opuc::WeightPoly;

TEST_CASE("lambda of simple outer polynomials") {
  const auto g = opuc::CircleGrid::make(4096);
  const opuc::NormalizedWeight p0(WeightPoly::p1(), g);
  CHECK(p0.C0() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(opuc::lambda_eval(opuc::OuterPoly({}, 1.0), p0, g) == doctest::Approx(1.0));
  CHECK(opuc::lambda_eval(opuc::OuterPoly({}, 2.5), p0, g) == doctest::Approx(2.5).epsilon(1e-14));
  // g = 1 - 0.5 z has its root at z = 2.
  const double lam = opuc::lambda_eval(opuc::OuterPoly({2.0}, 1.0), p0, g);
  const long double ref = std::exp(oracle::mean(
      [](long double th) { return (1 - std::cos(th)) * std::log(std::abs(1.0L - 0.5L * std::polar(1.0L, th))); }, 1 << 14));
  CHECK(lam == doctest::Approx(std::exp(0.25)).epsilon(1e-12));
  CHECK(lam == doctest::Approx(static_cast<double>(ref)).epsilon(1e-12));
  CHECK_THROWS_AS(opuc::OuterPoly({cplx{0.5, 0.0}}, 1.0), opuc::Error);
  CHECK_THROWS_AS(opuc::OuterPoly({}, 0.0), opuc::Error);
}

TEST_CASE("sandwich for Lebesgue measure with p1") {
  const auto m = opuc::make_lebesgue({}, opuc::CircleGrid::make(4096), WeightPoly::p1());
  const opuc::NormalizedWeight p0(WeightPoly::p1(), m.grid());
  const auto cands = opuc::random_outer_polys(200, 4, 1);
  const auto r = opuc::sandwich_check(m, p0, cands, VerblunskySeq{}, 20);
  CHECK(r.lower == doctest::Approx(2.0 / std::exp(1.0)).epsilon(1e-6));
  CHECK(r.upper == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(r.min_slack >= -opuc::sandwich_slack);
  for (double w : r.witness_values) CHECK(w == doctest::Approx(1.0));
}

TEST_CASE("sandwich on the ps family and a Bernstein-Szego measure") {
  const WeightPoly W({{cplx{1.0, 0.0}, 1}});
  const auto ps = opuc::make_ps_family(W, {1.5});
  const opuc::NormalizedWeight p0(W, ps.grid());
  const auto cands = opuc::random_outer_polys(100, 4, 9);
  const auto r = opuc::sandwich_check(ps, p0, cands, opuc::verblunsky_from_measure(ps, 200), 200);
  CHECK(r.min_slack >= -opuc::sandwich_slack);
  double tail = INFINITY;
  for (std::size_t n = 100; n < r.witness_values.size(); ++n) tail = std::min(tail, r.witness_values[n]);
  CHECK(tail <= r.upper + 1e-3);

  const VerblunskySeq a({cplx{0.4, 0.2}, cplx{-0.3, 0.0}});
  const auto bs = opuc::make_bernstein_szego(a, {}, opuc::CircleGrid::make(4096), W);
  const auto rb = opuc::sandwich_check(bs, opuc::NormalizedWeight(W, bs.grid()), cands, a, 8);
  for (std::size_t n = 2; n < rb.witness_values.size(); ++n) {
    CHECK(rb.witness_values[n] == doctest::Approx(rb.witness_values[2]).epsilon(1e-12));
    CHECK(rb.witness_values[n] >= rb.lower);
    CHECK(rb.witness_values[n] <= rb.upper * (1 + 1e-12));
  }
}

TEST_CASE("random candidates are seeded and outer") {
  const auto a = opuc::random_outer_polys(20, 4, 5);
  const auto b = opuc::random_outer_polys(20, 4, 5);
  REQUIRE(a.size() == 20);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].roots() == b[i].roots());
    for (cplx r : a[i].roots()) CHECK(std::abs(r) > 1.0);
  }
}

TEST_CASE("classical distance") {
  const auto leb = opuc::make_lebesgue();
  for (int n : {0, 1, 5}) CHECK(opuc::classical_distance(leb, n) == doctest::Approx(1.0));
  const auto m = opuc::make_bernstein_szego(VerblunskySeq({0.5}));
  for (int n : {1, 2, 6}) CHECK(std::abs(opuc::classical_distance(m, n) - 0.75) < 1e-8);
  std::mt19937_64 rng(71);
  const auto a = oracle::random_alpha(rng, 5, 0.8);
  const VerblunskySeq seq(a);
  const auto bs = opuc::make_bernstein_szego(seq);
  double prev = INFINITY;
  for (int n = 0; n <= 8; ++n) {
    const double d = opuc::classical_distance(bs, n);
    CHECK(std::abs(d - seq.A(static_cast<std::size_t>(n)) * seq.A(static_cast<std::size_t>(n))) < 1e-8);
    CHECK(d <= prev + 1e-15);
    prev = d;
  }
}

TEST_CASE("phase function") {
  const auto g = opuc::CircleGrid::make(256);
  const opuc::NormalizedWeight p0(WeightPoly::p1(), g);
  CHECK(opuc::nu_phase(p0, 2 * opuc::pi) == doctest::Approx(2 * opuc::pi));
  double prev = -1;
  for (double s = 0; s <= 2 * opuc::pi; s += 0.25) {
    const double v = opuc::nu_phase(p0, s);
    CHECK(v == doctest::Approx(s - std::sin(s)).epsilon(1e-13));
    CHECK(v >= prev);
    prev = v;
  }
}
