#include <doctest.h>

#include <cstdlib>
#include <functional>
#include <random>
#include <set>
#include <thread>

#include "helpers.hpp"
#include "mzero/integrate.hpp"
#include "mzero/oracle.hpp"

using namespace mzero;
using namespace testing_util;

namespace {

void each_exponent_vector(int n, int total, const std::function<void(const std::vector<int>&)>& f) {
  std::vector<int> e(static_cast<std::size_t>(n), 0);
  std::function<void(int, int)> rec = [&](int i, int left) {
    if (i == n - 1) {
      e[i] = left;
      f(e);
      return;
    }
    for (int a = 0; a <= left; ++a) {
      e[i] = a;
      rec(i + 1, left - a);
    }
  };
  rec(0, total);
}

Monomial psi_monomial(const std::vector<int>& e) {
  std::vector<Monomial::Factor> f;
  for (std::size_t i = 0; i < e.size(); ++i)
    if (e[i]) f.emplace_back(Generator::psi(static_cast<int>(i) + 1), static_cast<std::uint32_t>(e[i]));
  return Monomial::from_factors(std::move(f));
}

Rational integrate_text(const Integrator& engine, int n, const char* text) {
  return engine.integrate(parse_expression(ModuliContext(n), text));
}

}  // namespace

TEST_CASE("small values") {
  const Integrator engine;
  CHECK(integrate_text(engine, 3, "1") == Rational(1));
  CHECK(integrate_text(engine, 4, "psi1") == Rational(1));
  CHECK(integrate_text(engine, 4, "b{1,2}") == Rational(1));
  CHECK(integrate_text(engine, 4, "psi1 + b{1,2}") == Rational(2));
  CHECK(integrate_text(engine, 4, "b{1,2}^2") == Rational(0));
  CHECK(integrate_text(engine, 5, "b{1,2}^2") == Rational(-1));
  CHECK(integrate_text(engine, 5, "b{1,2}*b{1,2,3}") == Rational(1));
  CHECK(integrate_text(engine, 7, "psi1*psi2*psi3*psi4") == Rational(24));
  CHECK(integrate_text(engine, 4, "kappa1") == Rational(1));
  CHECK(integrate_text(engine, 5, "kappa1^2") == Rational(5));
  CHECK(integrate_text(engine, 5, "kappa1*b{1,2,3}") == Rational(1));
  CHECK(integrate_text(engine, 6, "psi1") == Rational(0));
}

TEST_CASE("crossing divisors intersect trivially") {
  const ModuliContext c5(5);
  const Subset all = c5.all_points();
  CHECK(crosses(make_subset({1, 2}), make_subset({1, 3}), all));
  CHECK_FALSE(crosses(make_subset({1, 2}), make_subset({1, 2, 3}), all));
  CHECK_FALSE(crosses(make_subset({1, 2}), make_subset({3, 4}), all));
  const Integrator engine;
  CHECK(integrate_text(engine, 5, "b{1,2}*b{1,3}") == Rational(0));
  CHECK(integrate_text(engine, 6, "psi4*b{1,2}*b{1,3}") == Rational(0));
}

TEST_CASE("restriction to a boundary divisor") {
  const ModuliContext c5(5);
  const Subset I = make_subset({1, 2});
  const Restriction r = restrict_to_boundary(c5, I, Monomial(Generator::boundary(I)));
  CHECK(r.plus.points == I);
  CHECK(r.minus.points == make_subset({3, 4, 5}));
  REQUIRE(r.terms.size() == 2);
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& t : r.terms) {
    CHECK(t.coefficient == Rational(-1));
    seen.insert({format(TautPolynomial(r.plus.context(), t.plus)), format(TautPolynomial(r.minus.context(), t.minus))});
  }
  CHECK(seen == std::set<std::pair<std::string, std::string>>{{"psi3", "1"}, {"1", "psi4"}});

  CHECK_THROWS(restrict_to_boundary(c5, I, Monomial(Generator::boundary(make_subset({1, 3})))));
  CHECK_THROWS(restrict_to_boundary(c5, I, Monomial(Generator::kappa(2))));
  CHECK(restrict_to_boundary(c5, I, Monomial(Generator::kappa(1), 2)).terms.size() == 3);
  CHECK_THROWS(restrict_to_boundary(c5, make_subset({3, 4, 5}), Monomial{}));
}

TEST_CASE("psi monomials agree with both oracles for n <= 8") {
  const Integrator engine;
  for (int n = 3; n <= 8; ++n) {
    const ModuliContext ctx(n);
    each_exponent_vector(n, n - 3, [&](const std::vector<int>& e) {
      const Rational v = engine.integrate_monomial(ctx, psi_monomial(e));
      CHECK(v == psi_multinomial(ctx, e));
      CHECK(v == oracle::psi_string_recursion(e));
    });
  }
  const ModuliContext c5(5);
  const std::vector<int> wrong{1, 1, 1, 0, 0};
  CHECK(psi_multinomial(c5, wrong) == Rational(0));
}

TEST_CASE("psi rewrite is independent of the auxiliary pair") {
  std::mt19937 rng(17);
  const Integrator engine;
  for (int n : {5, 6, 7}) {
    const ModuliContext ctx(n);
    for (int trial = 0; trial < 6; ++trial) {
      const TautPolynomial rest = random_homogeneous(rng, ctx, 3, n - 4, false);
      const int i = std::uniform_int_distribution<int>(1, n)(rng);
      const Rational direct = engine.integrate(TautPolynomial::psi(ctx, i) * rest);
      for (int a = 1; a <= n; ++a)
        for (int b = a + 1; b <= n; ++b) {
          if (a == i || b == i) continue;
          CHECK(engine.integrate(psi_as_boundary(ctx, i, a, b) * rest) == direct);
        }
    }
  }
  CHECK_THROWS_AS(psi_as_boundary(ModuliContext(5), 1, 1, 2), TautError);
  CHECK_THROWS_AS(psi_as_boundary(ModuliContext(5), 1, 2, 7), TautError);
}

TEST_CASE("integrals are invariant under relabeling the points") {
  std::mt19937 rng(23);
  IntegratorOptions plain;
  plain.relabel_keys = false;
  const Integrator engine, unnormalized(plain);
  for (int n : {5, 6, 7, 8}) {
    const ModuliContext ctx(n);
    for (int trial = 0; trial < 8; ++trial) {
      const TautPolynomial p = random_homogeneous(rng, ctx, 3, n - 3);
      const Rational v = engine.integrate(p);
      CHECK(unnormalized.integrate(p) == v);
      CHECK(engine.integrate(relabel(p, random_permutation(rng, n))) == v);
    }
  }
}

TEST_CASE("kappa1 agrees with the adding-point oracles") {
  std::mt19937 rng(29);
  const Integrator engine;
  for (int n : {4, 5, 6, 7}) {
    const ModuliContext ctx(n);
    for (int trial = 0; trial < 5; ++trial) {
      const TautPolynomial x = random_homogeneous(rng, ctx, 3, n - 4);
      CHECK(engine.integrate(TautPolynomial::kappa(ctx, 1) * x) == oracle::kappa1_times_by_adding_point(engine, x));
    }
  }
  // kappa1^a * psi monomials against the closed kappa formula
  for (int n : {4, 5, 6, 7}) {
    const ModuliContext ctx(n);
    for (int a = 1; a <= n - 3; ++a)
      each_exponent_vector(n, n - 3 - a, [&](const std::vector<int>& e) {
        const std::vector<int> kappas(static_cast<std::size_t>(a), 1);
        const TautPolynomial p(ctx, psi_monomial(e) * Monomial(Generator::kappa(1), a));
        CHECK(engine.integrate(p) == oracle::kappa_psi_by_adding_points(e, kappas));
      });
  }
}

TEST_CASE("pullback along the forgetful map") {
  std::mt19937 rng(31);
  const Integrator engine;
  for (int n : {4, 5, 6}) {
    const ModuliContext ctx(n), big(n + 1);
    for (int trial = 0; trial < 4; ++trial) {
      const TautPolynomial x = random_homogeneous(rng, ctx, 3, n - 3);
      const Rational v = engine.integrate(x);
      const TautPolynomial px = pullback_forget_last(x);
      // dilaton: pi_* psi_{n+1} = n - 2
      CHECK(engine.integrate(px * TautPolynomial::psi(big, n + 1)) == Rational(n - 2) * v);
      // the section Delta_{1,n+1} maps isomorphically
      CHECK(engine.integrate(px * TautPolynomial::boundary(big, make_subset({1, n + 1}))) == v);
    }
  }
}

TEST_CASE("kappa2 is refused") {
  const Integrator engine;
  CHECK_THROWS_AS(integrate_text(engine, 5, "kappa2"), UnsupportedClass);
}

TEST_CASE("cache bounds and thread counts do not change values") {
  std::mt19937 rng(37);
  const ModuliContext ctx(8);
  const TautPolynomial p = random_homogeneous(rng, ctx, 400, 5);

  IntegratorOptions one;
  one.threads = 1;
  const Integrator serial(one);
  const Rational v = serial.integrate(p);
  CHECK(serial.cache_entries() > 0);

  for (unsigned threads : {2u, 4u, 7u}) {
    IntegratorOptions o;
    o.threads = threads;
    CHECK(Integrator(o).integrate(p) == v);
  }
  // a nearly disabled cache recomputes everything, so use a smaller class
  const TautPolynomial q = random_homogeneous(rng, ModuliContext(7), 20, 4);
  IntegratorOptions tiny;
  tiny.cache_bytes = 256;
  const Integrator bounded(tiny);
  CHECK(bounded.integrate(q) == serial.integrate(q));
  CHECK(bounded.cache_entries() <= 2);

  serial.clear_cache();
  CHECK(serial.cache_entries() == 0);
  CHECK(serial.integrate(p) == v);

  // one engine shared by several threads
  std::vector<Rational> results(4);
  {
    const Integrator shared;
    std::vector<std::jthread> pool;
    for (int t = 0; t < 4; ++t) pool.emplace_back([&, t] { results[t] = shared.integrate(p); });
  }
  for (const auto& r : results) CHECK(r == v);
}

TEST_CASE("cache size from the environment") {
  ::setenv("MZERO_CACHE_BYTES", "4096", 1);
  CHECK(IntegratorOptions::from_environment().cache_bytes == 4096);
  ::setenv("MZERO_CACHE_BYTES", "lots", 1);
  CHECK_THROWS_AS(IntegratorOptions::from_environment(), std::invalid_argument);
  ::unsetenv("MZERO_CACHE_BYTES");
  CHECK(IntegratorOptions::from_environment().cache_bytes == 0);
}

TEST_CASE("off-degree terms") {
  const ModuliContext c5(5);
  const auto p = parse_expression(c5, "psi1 + psi1*psi2 + 3");
  CHECK(off_degree_terms(p) == 2);
  CHECK(Integrator().integrate(p) == Rational(2));
}
