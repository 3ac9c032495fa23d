#include <doctest.h>

#include <algorithm>
#include <random>
#include <thread>

#include "mzero/reconstruct.hpp"

using namespace mzero;
using B = Basis;

namespace {

SymbolicValue a_pow(long num, long den, unsigned k) { return SymbolicValue::monomial(Rational(num, den), k); }

}  // namespace

TEST_CASE("symbolic values") {
  const SymbolicValue a = a_pow(1, 1, 1);
  const SymbolicValue p = a * a + SymbolicValue(Rational(-1, 4));
  CHECK(p.degree() == 2);
  CHECK(p.coefficient(2) == Rational(1));
  CHECK(p.coefficient(5) == Rational(0));
  CHECK((p - p).is_zero());
  CHECK((p - p).degree() == -1);
  CHECK(p.evaluate(Rational(1, 2)) == Rational(0));
  CHECK(p.evaluate_even(Rational(4)) == Rational(15, 4));
  CHECK_FALSE((p + a).evaluate_even(Rational(4)).has_value());
  CHECK(a_pow(36, 35, 4).to_string() == "36/35*a^4");
  CHECK((a_pow(3, 1, 1) - a_pow(1, 4, 0)).to_string() == "3a - 1/4");
  CHECK((-a).to_string() == "-a");
  CHECK(SymbolicValue{}.to_string() == "0");
  CHECK(SymbolicValue::monomial(Rational(0), 3).is_zero());
}

TEST_CASE("seeds and low-point values") {
  CorrelatorTable t;
  CHECK(t.get({B::X2, B::One, B::One}) == SymbolicValue(Rational(1, 6)));
  CHECK(t.get({B::Y, B::One, B::Y}) == SymbolicValue(Rational(-1, 2)));
  CHECK(t.get({B::One, B::X, B::Y}).is_zero());
  CHECK(t.get({B::X2, B::X, B::X, B::X}) == a_pow(1, 1, 1));
  CHECK(t.get({B::X, B::Y, B::Y, B::X2}) == a_pow(3, 1, 1));
  CHECK(t.get({B::One, B::One, B::One}).is_zero());
}

TEST_CASE("higher correlators") {
  CorrelatorTable t;
  CHECK(t.get({B::X, B::X, B::X2, B::X2, B::X2}) == a_pow(12, 1, 2));
  CHECK(t.get({B::Y, B::Y, B::X2, B::X2, B::X2}) == a_pow(-36, 1, 2));
  CHECK(t.get({B::X, B::Y, B::X2, B::X2, B::X2}).is_zero());
  CHECK(t.get({B::Y, B::X2, B::X2, B::X2, B::X2, B::X2}).is_zero());
  CHECK(t.get({B::X, B::X2, B::X2, B::X2, B::X2, B::X2}).is_zero());
  CHECK(t.get(std::vector<Basis>(7, B::X2)) == a_pow(5184, 1, 4));
  CHECK(t.get(std::vector<Basis>(8, B::X2)).is_zero());
}

TEST_CASE("every split choice gives the same value") {
  CorrelatorTable reference;
  for (const auto& ms : surviving_correlators()) {
    if (ms.size() < 4) continue;
    const SymbolicValue v = reference.get(ms);
    for (const SplitChoice& c : split_choices(ms)) {
      CorrelatorTable fresh;
      SymbolicValue w;
      try {
        w = reconstruct_with(fresh, ms, c);
      } catch (const ReconstructionError&) {
        continue;  // right side mentions the correlator itself
      }
      CHECK(w == v);
    }
  }
}

TEST_CASE("insertion order does not matter") {
  std::mt19937 rng(7);
  for (const auto& ms : surviving_correlators()) {
    CorrelatorTable a, b;
    auto shuffled = ms;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    CHECK(a.get(ms) == b.get(shuffled));
    if (ms.size() >= 4 && std::count(ms.begin(), ms.end(), B::X2)) CHECK(reconstruct_correlator(b, shuffled) == a.get(ms));
  }
}

TEST_CASE("a-degree of a k-point correlator is k - 3") {
  CorrelatorTable t;
  for (const auto& ms : multisets(3, 7)) {
    const SymbolicValue v = t.get(ms);
    if (v.is_zero()) continue;
    CHECK(v.degree() == static_cast<int>(ms.size()) - 3);
    CHECK(v.coefficients().size() == ms.size() - 2);
    for (std::size_t i = 0; i + 3 < ms.size(); ++i) CHECK(v.coefficient(static_cast<unsigned>(i)).is_zero());
  }
}

TEST_CASE("reconstruction errors") {
  CorrelatorTable t;
  CHECK_THROWS_AS(reconstruct_correlator(t, {B::X, B::Y, B::Y}), ReconstructionError);
  CHECK_THROWS_AS(reconstruct_correlator(t, {B::X, B::X, B::Y, B::Y}), ReconstructionError);
  CHECK_THROWS_AS(reconstruct_with(t, {B::X, B::Y, B::Y, B::X2}, SplitChoice{0, 1, 2, Factorization::XX}),
                  ReconstructionError);
  CHECK_THROWS_AS(reconstruct_with(t, {B::X, B::Y, B::Y, B::X2}, SplitChoice{3, 1, 1, Factorization::XX}),
                  ReconstructionError);
}

TEST_CASE("theory tables zero out their vanishing correlators") {
  CorrelatorTable j(Theory::D4J), plain;
  CHECK(j.get({B::Y, B::Y, B::Y, B::X2}).is_zero());
  CHECK(j.get({B::X, B::Y, B::Y, B::X2}) == plain.get({B::X, B::Y, B::Y, B::X2}));
  CorrelatorTable t(Theory::D4TGmax);
  CHECK(t.get({B::Y, B::X, B::X, B::X2}).is_zero());
}

TEST_CASE("potential") {
  CorrelatorTable t;
  const Potential p = build_potential(t);
  CHECK(p.count({3, 0, 0, 0}) == 0);
  CHECK(p.at({0, 3, 0, 1}) == a_pow(1, 6, 1));
  CHECK(p.at({0, 1, 2, 1}) == a_pow(3, 2, 1));
  CHECK(p.at({1, 2, 0, 0}) == a_pow(1, 12, 0));
  CHECK(p.at({1, 0, 2, 0}) == a_pow(-1, 4, 0));
  CHECK(p.at({2, 0, 0, 1}) == a_pow(1, 12, 0));
  CHECK(p.at({0, 2, 0, 3}) == a_pow(1, 1, 2));
  CHECK(p.at({0, 0, 2, 3}) == a_pow(-3, 1, 2));
  CHECK(p.at({0, 0, 0, 7}) == a_pow(36, 35, 4));
  CHECK(p.size() == 8);
  CHECK_THROWS_AS(build_potential(t, 8), std::invalid_argument);
  CHECK(format_monomial({0, 2, 0, 3}) == "t_X^2*t_X2^3");
  CHECK(format_monomial({0, 0, 0, 0}) == "1");
}

TEST_CASE("WDVV holds for the reconstructed potential") {
  CorrelatorTable t;
  CHECK(wdvv_residuals(build_potential(t)).empty());
  // perturbing one coefficient breaks associativity
  Potential p = build_potential(t);
  p[{0, 0, 0, 7}] = a_pow(1, 1, 4);
  CHECK_FALSE(wdvv_residuals(p).empty());
  CHECK_FALSE(wdvv_residuals(expected_potential()).empty());
}

TEST_CASE("potential comparison") {
  CorrelatorTable t;
  const Potential p = build_potential(t);
  CHECK(compare_potentials(p, p).empty());
  const auto diff = compare_potentials(p, expected_potential());
  std::vector<PotentialMonomial> mons;
  for (const auto& d : diff) mons.push_back(d.monomial);
  CHECK(mons == std::vector<PotentialMonomial>{{0, 0, 0, 7}, {0, 0, 2, 3}, {0, 2, 0, 3}});
}

TEST_CASE("theory evaluation") {
  const auto saito = evaluate_theory(Theory::SaitoD4);
  REQUIRE(saito.a.has_value());
  CHECK(*saito.a == Rational(-1, 36));
  CHECK(saito.a_nonzero);

  const auto t = evaluate_theory(Theory::D4TGmax);
  REQUIRE(t.a_squared.has_value());
  CHECK(*t.a_squared * Rational(216 * 216) == Rational(1, 6));
  CHECK(t.a_fourth == *t.a_squared * *t.a_squared);

  CHECK_THROWS_AS(evaluate_theory(Theory::D4J), std::invalid_argument);
  const auto j = evaluate_theory(Theory::D4J, Rational(5184));
  CHECK(j.a_fourth == Rational(1));
  CHECK(j.seven_point_coefficient == Rational(5184));
  CHECK(j.a_fourth_stated_relation == Rational(24));
  CHECK(j.a_nonzero);
  CHECK_FALSE(evaluate_theory(Theory::D4J, Rational(0)).a_nonzero);

  CHECK(specialize(a_pow(3, 1, 1), saito) == Rational(-1, 12));
  CHECK(specialize(a_pow(-36, 1, 2), t) == Rational(-36) * *t.a_squared);
  CHECK_FALSE(specialize(a_pow(3, 1, 1), t).has_value());
  CHECK(specialize(a_pow(2, 1, 4), j) == Rational(2));
  CHECK_FALSE(specialize(a_pow(1, 1, 2), j).has_value());
}

TEST_CASE("tau gate") {
  for (Theory th : {Theory::D4TGmax, Theory::SaitoD4}) {
    const GateReport g = tau_gate(evaluate_theory(th));
    CHECK(g.frobenius_match);
    CHECK(g.passed);
  }
  const GateReport j = tau_gate(evaluate_theory(Theory::D4J, Rational(1)));
  CHECK(j.frobenius_match);
  CHECK(j.passed);

  TheoryEvaluation zero = evaluate_theory(Theory::D4TGmax);
  zero.a_nonzero = false;
  const GateReport g = tau_gate(zero);
  CHECK_FALSE(g.passed);
  CHECK(g.conclusion.find("fails") != std::string::npos);
}

TEST_CASE("one table shared by several threads") {
  CorrelatorTable shared, reference;
  const auto all = multisets(3, 7);
  std::vector<std::jthread> pool;
  std::vector<std::vector<SymbolicValue>> out(4);
  for (int w = 0; w < 4; ++w)
    pool.emplace_back([&, w] {
      for (std::size_t i = 0; i < all.size(); ++i) out[w].push_back(shared.get(all[(i + 37 * w) % all.size()]));
    });
  pool.clear();
  for (int w = 0; w < 4; ++w)
    for (std::size_t i = 0; i < all.size(); ++i) CHECK(out[w][i] == reference.get(all[(i + 37 * w) % all.size()]));
}
