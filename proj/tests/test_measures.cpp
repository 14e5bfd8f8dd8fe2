#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "opuc/measures.hpp"

using opuc::cplx;
using opuc::WeightPoly;

namespace {
const cplx one{1.0, 0.0};
const cplx I{0.0, 1.0};
WeightPoly single() { return WeightPoly({{one, 1}}); }
}  // namespace

TEST_CASE("weight evaluation") {
  CHECK(single()(-one) == doctest::Approx(4.0));
  CHECK(single()(one) == 0.0);
  const WeightPoly two({{one, 1}, {-one, 1}});
  CHECK(two(I) == doctest::Approx(4.0));
  CHECK_THROWS_AS(WeightPoly({{cplx{1.1, 0.0}, 1}}), opuc::Error);
  CHECK_THROWS_AS(WeightPoly({{one, 0}}), opuc::Error);
  CHECK_THROWS_AS(WeightPoly({{one, 1}}, -1.0), opuc::Error);
}

TEST_CASE("analytic avatar q") {
  const auto W = single();
  CHECK(std::abs(W.q(-one) - 4.0) < 1e-15);
  CHECK(std::abs(W.q(I) - 2.0) < 1e-15);
  CHECK(std::abs(W.q(0.3) + std::pow(0.3 - 1.0, 2) / 0.3) < 1e-14);
  CHECK_THROWS_AS(W.q(0.0), opuc::Error);
  CHECK_THROWS_AS(W.inv_q(one), opuc::Error);
  CHECK(W.inv_q(0.0) == cplx{});

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ang(0, 2 * opuc::pi);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<opuc::WeightZero> zs;
    for (int k = 0; k < 3; ++k) zs.push_back({std::polar(1.0, ang(rng)), 1 + trial % 2});
    const WeightPoly R(zs, 0.7);
    CHECK(std::abs(std::abs(R.C()) - 1.0) < 1e-14);
    const auto g = opuc::CircleGrid::make(256);
    double maxp = 0, maxdiff = 0;
    for (std::size_t j = 0; j < g.size(); ++j) {
      maxp = std::max(maxp, R(g.node(j)));
      maxdiff = std::max(maxdiff, std::abs(R.q(g.node(j)) - R(g.node(j))));
    }
    CHECK(maxdiff <= 1e-12 * maxp);
    const auto tp = R.trig();
    CHECK(std::abs(tp(g.node(3)) - R(g.node(3))) < 1e-12 * maxp);
  }
}

TEST_CASE("moments") {
  const auto leb = opuc::make_lebesgue();
  const auto c = opuc::moments(leb, 6);
  CHECK(std::abs(c[0] - 1.0) < 1e-15);
  for (int k = 1; k <= 6; ++k) CHECK(std::abs(c[static_cast<std::size_t>(k)]) < 1e-15);

  const auto bs = opuc::make_bernstein_szego(opuc::VerblunskySeq({cplx{0.5, 0.0}}));
  const auto cb = opuc::moments(bs, 10);
  for (int k = 0; k <= 10; ++k) CHECK(std::abs(cb[static_cast<std::size_t>(k)] - std::pow(0.5, k)) < 1e-13);
}

TEST_CASE("single atom of full mass is refused by the class gate") {
  CHECK_THROWS_AS(opuc::make_lebesgue({{0.0, 1.0}}), opuc::Error);
  CHECK_THROWS_AS(opuc::make_lebesgue({{0.0, 0.7}, {1.0, 0.6}}), opuc::Error);
}

TEST_CASE("Bernstein-Szego densities") {
  const auto g = opuc::CircleGrid::make(4096);
  const auto leb = opuc::make_bernstein_szego(opuc::VerblunskySeq{}, {}, g);
  for (double d : leb.density()) CHECK(d == doctest::Approx(1.0));
  const auto half = opuc::make_bernstein_szego(opuc::VerblunskySeq({cplx{0.5, 0.0}}), {}, g);
  const auto d = half.density();
  for (std::size_t j = 0; j < g.size(); j += 201)
    CHECK(d[j] == doctest::Approx(0.75 / std::norm(1.0 - 0.5 * g.node(j))).epsilon(1e-13));

  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 5; ++trial) {
    const auto a = oracle::random_alpha(rng, 1 + trial, 0.8);
    const auto m = opuc::make_bernstein_szego(opuc::VerblunskySeq(a), {}, g);
    const auto dd = m.density();
    CHECK(opuc::quad_mean(g, dd) == doctest::Approx(1.0).epsilon(1e-12));
    for (std::size_t j = 0; j < g.size(); j += 397)
      CHECK(dd[j] == doctest::Approx(static_cast<double>(oracle::bs_density(a, g.theta(j)))).epsilon(1e-12));
  }
}

TEST_CASE("moment symmetry and round trip through the inverse map") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    const auto a = oracle::random_alpha(rng, 1 + static_cast<std::size_t>(trial % 8), 0.8);
    const auto m = opuc::make_bernstein_szego(opuc::VerblunskySeq(a));
    const auto c = opuc::moments(m, 12);
    const auto d = m.density();
    // c_{-k} = conj(c_k): the negative moment is the mean of sigma' t^k.
    std::vector<cplx> s(d.size());
    for (std::size_t j = 0; j < d.size(); ++j) s[j] = d[j] * std::pow(m.grid().node(j), 3);
    CHECK(std::abs(opuc::quad_mean(m.grid(), std::span<const cplx>(s)) - std::conj(c[3])) < 1e-13);
    const auto back = opuc::verblunsky_from_moments(c, static_cast<int>(a.size()));
    for (std::size_t k = 0; k < a.size(); ++k) CHECK(std::abs(back.alpha[k] - a[k]) < 1e-8);
  }
}

TEST_CASE("class flags on the ps family") {
  const auto W = single();
  const auto ps = opuc::make_ps_family(W, {1.5});
  CHECK_FALSE(ps.is_szego());
  CHECK(ps.is_poly_szego());
  const auto sz = opuc::make_ps_family(W, {0.5});
  CHECK(sz.is_szego());
  CHECK(sz.is_poly_szego());
  try {
    opuc::make_ps_family(W, {3.5});
    FAIL("beta = 3.5 accepted");
  } catch (const opuc::Error& e) {
    CHECK(e.kind() == opuc::ErrorKind::class_violation);
  }
  CHECK(opuc::quad_mean(ps.grid(), ps.density()) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("atoms are normalized with the density") {
  const auto m = opuc::make_ps_family(single(), {1.5}, {{opuc::pi, 0.2}});
  CHECK(m.ac_mass() == doctest::Approx(0.8));
  CHECK(opuc::quad_mean(m.grid(), m.density()) == doctest::Approx(0.8).epsilon(1e-12));
  const auto c = opuc::moments(m, 2);
  CHECK(std::abs(c[0] - 1.0) < 1e-12);
}

TEST_CASE("table density interpolates and floors") {
  const auto g = opuc::CircleGrid::make(64);
  std::vector<double> v(64, 2.0);
  v[0] = 0.0;
  const auto m = opuc::make_table_measure(v, {}, g, single());
  CHECK(m.guarded_nodes() == 1);
  const auto re = m.regrid(128, 0.5);
  CHECK(opuc::quad_mean(re.grid(), re.density()) == doctest::Approx(1.0).epsilon(1e-12));
}
