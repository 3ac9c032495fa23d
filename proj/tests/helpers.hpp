#pragma once

#include <random>
#include <vector>

#include "mzero/taut_expr.hpp"

namespace testing_util {

using namespace mzero;

inline Generator random_generator(std::mt19937& rng, const ModuliContext& ctx, bool kappa = true) {
  const auto bnd = ctx.boundary_indices();
  std::uniform_int_distribution<int> kind(0, kappa ? 2 : 1);
  switch (kind(rng)) {
    case 0: return Generator::psi(std::uniform_int_distribution<int>(1, ctx.n())(rng));
    case 1: return Generator::boundary(bnd[std::uniform_int_distribution<std::size_t>(0, bnd.size() - 1)(rng)]);
    default: return Generator::kappa(1);
  }
}

/// Random monomial of exactly `degree` degree-1 generators.
inline Monomial random_monomial(std::mt19937& rng, const ModuliContext& ctx, int degree, bool kappa = true) {
  std::vector<Monomial::Factor> f;
  for (int i = 0; i < degree; ++i) f.emplace_back(random_generator(rng, ctx, kappa), 1);
  return Monomial::from_factors(std::move(f));
}

inline TautPolynomial random_polynomial(std::mt19937& rng, const ModuliContext& ctx, int terms, int max_degree,
                                        bool kappa = true) {
  TautPolynomial p(ctx);
  std::uniform_int_distribution<int> deg(0, max_degree), num(-7, 7), den(1, 5);
  for (int t = 0; t < terms; ++t) p.add_term(random_monomial(rng, ctx, deg(rng), kappa), Rational(num(rng), den(rng)));
  return p;
}

inline TautPolynomial random_homogeneous(std::mt19937& rng, const ModuliContext& ctx, int terms, int degree,
                                         bool kappa = true) {
  TautPolynomial p(ctx);
  std::uniform_int_distribution<int> num(-7, 7), den(1, 5);
  for (int t = 0; t < terms; ++t) p.add_term(random_monomial(rng, ctx, degree, kappa), Rational(num(rng), den(rng)));
  return p;
}

inline std::vector<int> random_permutation(std::mt19937& rng, int n) {
  std::vector<int> p(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) p[i] = i + 1;
  std::shuffle(p.begin(), p.end(), rng);
  return p;
}

}  // namespace testing_util
