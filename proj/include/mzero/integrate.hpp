#pragma once

// Intersection numbers on Mbar_{0,n}. Monomials are reduced by restricting to
// a boundary divisor Delta_I = Mbar_{0,I+} x Mbar_{0,I^c-} and recursing on the
// two factors; pure psi monomials are first rewritten into boundary divisors.
//
// Geometric rules used by the recursion:
//   * Delta_I . Delta_J = 0 when I and J cross;
//   * psi_j restricts to psi_j on the factor carrying j;
//   * a compatible Delta_J restricts to the boundary divisor of the one factor
//     it nests in;
//   * kappa_1 restricts to the sum of the kappa_1 classes of the two factors;
//   * the normal bundle of Delta_I has first Chern class -psi_+ - psi_-, which
//     handles repeated Delta_I factors.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <shared_mutex>
#include <span>
#include <unordered_map>
#include <vector>

#include "mzero/rational.hpp"
#include "mzero/taut_expr.hpp"

namespace mzero {

/// True when all four of I∩J, I∩J^c, I^c∩J, I^c∩J^c are nonempty.
bool crosses(Subset I, Subset J, Subset all);

enum class Side : std::uint8_t { Plus, Minus };

/// One factor of a boundary divisor. Points are relabelled 1..size() in
/// increasing order of their original label, with the node branch last.
struct FactorLabel {
  Side side;
  Subset points;  // original labels carried by this factor (branch excluded)
  int branch() const { return size_of(points) + 1; }
  ModuliContext context() const { return ModuliContext(size_of(points) + 1); }
};

struct RestrictedTerm {
  Monomial plus;
  Monomial minus;
  Rational coefficient;
};

struct Restriction {
  FactorLabel plus;
  FactorLabel minus;
  std::vector<RestrictedTerm> terms;
};

/// Pulls m back to Delta_I (I canonical). Every Delta_I factor of m counts as a
/// residual self-intersection and becomes (-psi_+) + (-psi_-); kappa_1 becomes
/// kappa_1 on the plus factor plus kappa_1 on the minus factor. m must be free
/// of kappa_2 and of boundary divisors crossing I.
Restriction restrict_to_boundary(const ModuliContext& ctx, Subset I, const Monomial& m);

/// (n-3)!/prod(a_i!) when the exponents sum to n-3, else 0.
Rational psi_multinomial(const ModuliContext& ctx, std::span<const int> exponents);

/// kappa_1 = sum_i psi_i - sum_I Delta_I on Mbar_{0,n}.
TautPolynomial eliminate_kappa1(const ModuliContext& ctx);

/// psi_i = sum of Delta_I over i in I, a,b not in I.
TautPolynomial psi_as_boundary(const ModuliContext& ctx, int i, int a, int b);

/// Pullback along the map Mbar_{0,n+1} -> Mbar_{0,n} forgetting point n+1.
TautPolynomial pullback_forget_last(const TautPolynomial& p);

struct IntegratorOptions {
  /// Worker threads for integrate(); 0 means hardware concurrency.
  unsigned threads = 0;
  /// Approximate memory bound for the memo cache; 0 means unbounded.
  std::size_t cache_bytes = 0;
  /// Relabel marked points before cache lookup to share S_n-equivalent keys.
  bool relabel_keys = true;

  /// Defaults, with cache_bytes taken from MZERO_CACHE_BYTES if set.
  static IntegratorOptions from_environment();
};

/// Thrown when a monomial carries kappa_2, which must be rewritten first.
class UnsupportedClass : public TautError {
public:
  using TautError::TautError;
};

/// Memoized integration engine. The cache is a grow-only map guarded by a
/// shared mutex, so one Integrator may be used from several threads.
class Integrator {
public:
  explicit Integrator(IntegratorOptions options = {});

  /// Linear extension of integrate_monomial; terms of degree != n-3 give 0.
  Rational integrate(const TautPolynomial& p) const;
  Rational integrate_monomial(const ModuliContext& ctx, const Monomial& m) const;

  const IntegratorOptions& options() const { return options_; }
  std::size_t cache_entries() const;
  void clear_cache() const;

private:
  struct Key {
    int n;
    Monomial m;
    friend bool operator==(const Key&, const Key&) = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept { return k.m.hash() * 31u + k.n; }
  };

  Rational integrate_impl(int n, const Monomial& m) const;
  Rational integrate_uncached(int n, const Monomial& m) const;
  Monomial normalize_labels(int n, const Monomial& m) const;
  bool lookup(const Key& k, Rational& out) const;
  void store(Key k, const Rational& v) const;

  IntegratorOptions options_;
  mutable std::shared_mutex mutex_;
  mutable std::unordered_map<Key, Rational, KeyHash> cache_;
  mutable std::size_t cache_bytes_used_ = 0;
};

/// Count of terms whose degree differs from n-3 (they integrate to zero).
std::size_t off_degree_terms(const TautPolynomial& p);

}  // namespace mzero
