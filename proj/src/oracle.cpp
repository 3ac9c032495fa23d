#include "mzero/oracle.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

namespace mzero::oracle {

Rational psi_string_recursion(std::span<const int> exponents) {
  std::vector<int> a(exponents.begin(), exponents.end());
  const int n = static_cast<int>(a.size());
  if (n < 3) throw std::invalid_argument("need at least three points");
  if (std::any_of(a.begin(), a.end(), [](int x) { return x < 0; })) return Rational{};
  if (std::accumulate(a.begin(), a.end(), 0) != n - 3) return Rational{};
  if (n == 3) return Rational(1);
  auto zero = std::find(a.begin(), a.end(), 0);
  // sum a_i = n-3 < n forces some a_i = 0.
  a.erase(zero);
  Rational sum;
  for (auto& x : a) {
    if (x == 0) continue;
    --x;
    sum += psi_string_recursion(a);
    ++x;
  }
  return sum;
}

namespace {

Rational multinomial_integral(const std::vector<int>& a) {
  const int n = static_cast<int>(a.size());
  const int total = std::accumulate(a.begin(), a.end(), 0);
  if (total != n - 3) return Rational{};
  Rational r = factorial(static_cast<unsigned>(total));
  for (int x : a) r /= factorial(static_cast<unsigned>(x));
  return r;
}

Rational kappa_psi(const std::vector<int>& psi, std::vector<int> kappas,
                   std::map<std::vector<int>, Rational>& memo) {
  std::sort(kappas.begin(), kappas.end());
  if (kappas.empty()) return multinomial_integral(psi);
  if (auto it = memo.find(kappas); it != memo.end()) return it->second;

  const std::size_t m = kappas.size();
  std::vector<int> extended = psi;
  for (int b : kappas) extended.push_back(b + 1);
  Rational value = multinomial_integral(extended);

  // Subtract every non-identity permutation's cycle-merged kappa product.
  std::vector<std::size_t> sigma(m);
  std::iota(sigma.begin(), sigma.end(), 0);
  while (std::next_permutation(sigma.begin(), sigma.end())) {
    std::vector<int> merged;
    std::vector<bool> seen(m, false);
    for (std::size_t s = 0; s < m; ++s) {
      if (seen[s]) continue;
      int total = 0;
      for (std::size_t j = s; !seen[j]; j = sigma[j]) {
        seen[j] = true;
        total += kappas[j];
      }
      merged.push_back(total);
    }
    value -= kappa_psi(psi, merged, memo);
  }
  memo.emplace(kappas, value);
  return value;
}

}  // namespace

Rational kappa_psi_by_adding_points(std::span<const int> psi_exponents,
                                    std::span<const int> kappa_indices) {
  std::map<std::vector<int>, Rational> memo;
  for (int b : kappa_indices)
    if (b < 0) throw std::invalid_argument("negative kappa index");
  return kappa_psi({psi_exponents.begin(), psi_exponents.end()},
                   {kappa_indices.begin(), kappa_indices.end()}, memo);
}

Rational kappa1_times_by_adding_point(const Integrator& engine, const TautPolynomial& x) {
  const TautPolynomial pulled = pullback_forget_last(x);
  const ModuliContext big = pulled.context();
  return engine.integrate(multiply(big, Monomial(Generator::psi(big.n()), 2), pulled));
}

}  // namespace mzero::oracle
