#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "mzero/chiodo.hpp"
#include "mzero/oracle.hpp"

using namespace mzero;
using namespace testing_util;

namespace {

TautPolynomial d(const ModuliContext& ctx, std::initializer_list<int> pts) {
  return TautPolynomial::boundary(ctx, make_subset(pts));
}

// Integral of p * x over several random kappa-free test classes x.
std::vector<Rational> pairings(const Integrator& engine, const TautPolynomial& p, int seed, int count = 4) {
  std::mt19937 rng(static_cast<unsigned>(seed));
  const ModuliContext& ctx = p.context();
  std::vector<Rational> out;
  for (int i = 0; i < count; ++i) {
    const TautPolynomial x = random_homogeneous(rng, ctx, 3, ctx.n() - 3 - p.max_degree(), false);
    out.push_back(engine.integrate(p * x));
  }
  return out;
}

TautPolynomial without_kappa2(const TautPolynomial& p) {
  return p.substitute(Generator::kappa(2), rewrite_kappa2(p.context()));
}

}  // namespace

TEST_CASE("Bernoulli numbers and polynomials") {
  CHECK(bernoulli_number(0) == Rational(1));
  CHECK(bernoulli_number(1) == Rational(-1, 2));
  CHECK(bernoulli_number(2) == Rational(1, 6));
  CHECK(bernoulli_number(3) == Rational(0));
  CHECK(bernoulli_number(4) == Rational(-1, 30));
  CHECK(bernoulli_number(6) == Rational(1, 42));
  CHECK(bernoulli_poly(2, Rational(1, 3)) == Rational(-1, 18));
  CHECK(bernoulli_poly(3, Rational(2, 3)) == Rational(-1, 27));
  for (int deg = 1; deg <= 4; ++deg)
    for (int k = 0; k <= 6; ++k) {
      const Rational t(k, 6);
      const Rational sign = deg % 2 ? Rational(-1) : Rational(1);
      CHECK(bernoulli_poly(deg, Rational(1) - t) == sign * bernoulli_poly(deg, t));
    }
  CHECK_THROWS(bernoulli_number(-1));
}

TEST_CASE("phases along the boundary") {
  const auto cfg = ChiodoConfig::d4_seven_point();
  const ModuliContext ctx(7);
  const Rational expected[] = {Rational(0), Rational(2, 3), Rational(1, 3), Rational(0)};
  for (Subset I : ctx.boundary_indices()) {
    const EdgeDecoration e = theta_edge(cfg, I);
    CHECK(e.theta_plus == expected[size_of(I) - 2]);
    CHECK((e.theta_plus + e.theta_minus).is_integer());
    // the theta of one side is the phase seen from the other side's branch
    CHECK(branch_phase(cfg, ctx.all_points() & ~I) == e.theta_minus);
  }
  CHECK_THROWS_AS(theta_edge(cfg, make_subset({2, 3})), TautError);
}

TEST_CASE("configuration validation") {
  ChiodoConfig bad = ChiodoConfig::d4_seven_point();
  bad.theta[0] = Rational(1, 2);
  CHECK_THROWS_AS(bad.validate(), TautError);
  bad.theta[0] = Rational(1);
  CHECK_THROWS_AS(bad.validate(), TautError);
  bad.theta.pop_back();
  CHECK_THROWS_AS(bad.validate(), TautError);
  ChiodoConfig zero = ChiodoConfig::d4_seven_point();
  zero.r = 0;
  CHECK_THROWS_AS(zero.validate(), TautError);
  CHECK_NOTHROW(ChiodoConfig::d4_seven_point().validate());
}

TEST_CASE("degree zero component") {
  const auto ch0 = chern_component(ChiodoConfig::d4_seven_point(), 0);
  CHECK(ch0 == TautPolynomial(ModuliContext(7), Rational(-2)));
  CHECK_THROWS(chern_component(ChiodoConfig::d4_seven_point(), 3));
}

TEST_CASE("pushforward of node psi classes") {
  const Integrator engine;
  const ModuliContext ctx(7);
  for (Subset K : ctx.boundary_indices()) {
    const Subset Kc = ctx.all_points() & ~K;
    for (Branch b : {Branch::Plus, Branch::Minus}) {
      const Subset pool = b == Branch::Plus ? K & ~point_bit(1) : Kc;
      const Subset side = b == Branch::Plus ? K : Kc;
      const auto reference = pushforward_psi_pm(ctx, K, b);
      const auto values = pairings(engine, reference, static_cast<int>(K) * 2 + (b == Branch::Plus));
      const auto pts = elements(pool);
      if (pts.size() >= 2) {
        for (std::size_t i = 0; i < pts.size(); ++i)
          for (std::size_t j = i + 1; j < pts.size(); ++j) {
            const auto other = pushforward_psi_pm(ctx, K, b, std::pair{pts[i], pts[j]});
            CHECK(pairings(engine, other, static_cast<int>(K) * 2 + (b == Branch::Plus)) == values);
          }
        CHECK(pairings(engine, pushforward_psi_pm(ctx, K, b, std::nullopt, PairRule::Largest),
                       static_cast<int>(K) * 2 + (b == Branch::Plus)) == values);
      }
      // any pair on the branch factor gives the same class
      const auto all_side = elements(side);
      if (size_of(side) >= 2 && size_of(Kc) >= 2 && size_of(K) >= 2) {
        const auto branch = pushforward_branch_psi(ctx, side, all_side[0], all_side.back());
        CHECK(pairings(engine, branch, static_cast<int>(K) * 2 + (b == Branch::Plus)) == values);
      }
      if (size_of(side) == 3)
        CHECK(pairings(engine, pushforward_psi_four_point(ctx, K, b), static_cast<int>(K) * 2 + (b == Branch::Plus)) ==
              values);
    }
  }
  CHECK_THROWS_AS(pushforward_psi_pm(ctx, make_subset({1, 2, 3}), Branch::Plus, std::pair{1, 2}), TautError);
  CHECK_THROWS_AS(pushforward_psi_four_point(ctx, make_subset({1, 2}), Branch::Plus), TautError);
}

TEST_CASE("node psi pushforward integrates like psi on the factor") {
  // On Mbar_{0,6}, psi_+ Delta_{123} * psi_4 psi_5 = 1 * 1: the plus factor is
  // Mbar_{0,4} with one psi, the minus factor Mbar_{0,4} with two psi's split.
  const Integrator engine;
  const ModuliContext ctx(6);
  const auto p = pushforward_psi_pm(ctx, make_subset({1, 2, 3}), Branch::Plus) * TautPolynomial::psi(ctx, 4);
  CHECK(engine.integrate(p) == Rational(1));
  const auto m = pushforward_psi_pm(ctx, make_subset({1, 2, 3}), Branch::Minus) * TautPolynomial::psi(ctx, 1);
  CHECK(engine.integrate(m) == Rational(1));
}

TEST_CASE("folded and summed orientations agree") {
  const Integrator engine;
  const auto cfg = ChiodoConfig::d4_seven_point();
  CHECK(chern_component(cfg, 1, Orientation::Folded) == chern_component(cfg, 1, Orientation::Summed));
  for (PairRule rule : {PairRule::Smallest, PairRule::Largest}) {
    const auto folded = without_kappa2(chern_component(cfg, 2, Orientation::Folded, rule));
    const auto summed = without_kappa2(chern_component(cfg, 2, Orientation::Summed, rule));
    CHECK(pairings(engine, folded, 41, 6) == pairings(engine, summed, 41, 6));
  }
}

TEST_CASE("second Chern class is homogeneous and option independent") {
  const Integrator engine;
  const auto cfg = ChiodoConfig::d4_seven_point();
  const auto c2 = second_chern_class(cfg);
  CHECK(c2.is_homogeneous(2));
  const auto reference = pairings(engine, c2, 43, 6);
  for (Orientation o : {Orientation::Folded, Orientation::Summed})
    for (PairRule rule : {PairRule::Smallest, PairRule::Largest}) {
      LambdaOptions opts;
      opts.orientation = o;
      opts.pairs = rule;
      CHECK(pairings(engine, second_chern_class(cfg, opts), 43, 6) == reference);
    }
}

TEST_CASE("kappa2 rewrite on seven points equals the written-out formula") {
  const ModuliContext c7(7);
  auto psi = [&](int i) { return TautPolynomial::psi(c7, i); };
  const TautPolynomial first = TautPolynomial::kappa(c7, 1) - psi(7) - (psi(6) - d(c7, {6, 7}));
  const TautPolynomial second = d(c7, {1, 2, 3, 6, 7}) + d(c7, {1, 2, 3, 6}) + d(c7, {1, 2, 3, 7}) + d(c7, {1, 2, 3});
  const TautPolynomial literal = first * second + (psi(6) - d(c7, {1, 2, 3, 4, 5})).pow(2) + psi(7).pow(2);
  CHECK(rewrite_kappa2(c7) == literal);
  CHECK(rewrite_kappa2(c7, Kappa2Variant::Appendix) != literal);
  CHECK_THROWS_AS(rewrite_kappa2(ModuliContext(6), Kappa2Variant::Appendix), TautError);
  CHECK_THROWS_AS(rewrite_kappa2(ModuliContext(4)), TautError);
}

TEST_CASE("kappa2 rewrite agrees with the adding-points oracle") {
  const Integrator engine;
  for (int n : {5, 6, 7, 8}) {
    const ModuliContext ctx(n);
    const auto k2 = rewrite_kappa2(ctx);
    CHECK(k2.is_homogeneous(2));
    const int rest = n - 5;
    // kappa2 * psi monomials and kappa2 * kappa1 * psi monomials
    std::vector<int> e(static_cast<std::size_t>(n), 0);
    for (int i = 1; i <= n; ++i) {
      std::fill(e.begin(), e.end(), 0);
      TautPolynomial x(ctx, Rational(1));
      if (rest >= 1) {
        e[i - 1] = rest;
        x = TautPolynomial::psi(ctx, i).pow(static_cast<unsigned>(rest));
      }
      const std::vector<int> k2only{2};
      CHECK(engine.integrate(k2 * x) == oracle::kappa_psi_by_adding_points(e, k2only));
      if (rest >= 1) {
        e[i - 1] = rest - 1;
        const TautPolynomial y = TautPolynomial::kappa(ctx, 1) * TautPolynomial::psi(ctx, i).pow(static_cast<unsigned>(rest - 1));
        const std::vector<int> both{2, 1};
        CHECK(engine.integrate(k2 * y) == oracle::kappa_psi_by_adding_points(e, both));
      }
    }
  }
}

TEST_CASE("the appendix kappa2 variant disagrees with the oracle") {
  const Integrator engine;
  const ModuliContext c7(7);
  const auto k2 = rewrite_kappa2(c7, Kappa2Variant::Appendix);
  int mismatches = 0;
  for (int i = 1; i <= 7; ++i)
    for (int j = i; j <= 7; ++j) {
      std::vector<int> e(7, 0);
      ++e[i - 1];
      ++e[j - 1];
      const std::vector<int> k2only{2};
      if (engine.integrate(k2 * TautPolynomial::psi(c7, i) * TautPolynomial::psi(c7, j)) !=
          oracle::kappa_psi_by_adding_points(e, k2only))
        ++mismatches;
    }
  CHECK(mismatches > 0);
}
