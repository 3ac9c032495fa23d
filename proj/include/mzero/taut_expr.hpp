#pragma once

// Polynomial algebra over the tautological divisor generators psi_i, kappa_1,
// kappa_2 and boundary divisors Delta_I on Mbar_{0,n}. The ring is free: no
// cohomological relations are imposed here.

#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mzero/rational.hpp"

namespace mzero {

/// Set of marked points as a bitmask; bit (i-1) is point i.
using Subset = std::uint32_t;

constexpr int kMaxPoints = 31;

constexpr Subset point_bit(int i) { return Subset{1} << (i - 1); }
constexpr bool contains(Subset s, int i) { return (s & point_bit(i)) != 0; }
constexpr int size_of(Subset s) { return std::popcount(s); }
constexpr Subset full_set(int n) { return n >= 32 ? ~Subset{0} : (Subset{1} << n) - 1; }

Subset make_subset(std::initializer_list<int> points);
std::vector<int> elements(Subset s);
std::string subset_to_string(Subset s);

/// Thrown for malformed generators: unstable boundary subsets, point indices
/// outside 1..n, unsupported kappa indices, mismatched contexts.
class TautError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// The ambient space Mbar_{0,n}.
class ModuliContext {
public:
  explicit ModuliContext(int n);

  int n() const { return n_; }
  int dimension() const { return n_ - 3; }
  Subset all_points() const { return full_set(n_); }

  /// {I : 1 in I, 2 <= |I| <= n-2}, ordered by size then lexicographically.
  std::vector<Subset> boundary_indices() const;

  friend bool operator==(const ModuliContext&, const ModuliContext&) = default;

private:
  int n_;
};

enum class GenKind : std::uint8_t { Psi = 0, Kappa = 1, Boundary = 2 };

/// A single degree-1 or degree-2 generator. For Psi `index` is the point,
/// for Kappa it is a in {1, 2}, for Boundary it is the canonical subset mask.
struct Generator {
  GenKind kind;
  std::uint32_t index;

  static Generator psi(int i) { return {GenKind::Psi, static_cast<std::uint32_t>(i)}; }
  static Generator kappa(int a) { return {GenKind::Kappa, static_cast<std::uint32_t>(a)}; }
  /// Raw constructor; the subset must already be canonical for the context.
  static Generator boundary(Subset s) { return {GenKind::Boundary, s}; }

  int degree() const { return kind == GenKind::Kappa ? static_cast<int>(index) : 1; }
  Subset subset() const { return index; }

  friend bool operator==(const Generator&, const Generator&) = default;
  friend std::strong_ordering operator<=>(const Generator& a, const Generator& b);
};

/// Returns Boundary(J) where J is I or its complement, whichever contains 1.
Generator canonicalize_boundary(const ModuliContext& ctx, Subset I);

/// Product of generator powers in canonical (sorted, no zero exponents) form.
class Monomial {
public:
  using Factor = std::pair<Generator, std::uint32_t>;

  Monomial() = default;
  explicit Monomial(Generator g, std::uint32_t exponent = 1);
  /// Sorts and merges factors; zero exponents are dropped.
  static Monomial from_factors(std::vector<Factor> factors);

  std::span<const Factor> factors() const { return factors_; }
  bool is_one() const { return factors_.empty(); }
  int degree() const { return degree_; }
  std::uint32_t exponent_of(Generator g) const;
  bool has_kind(GenKind k) const;

  /// This monomial with `g` removed entirely.
  Monomial without(Generator g) const;

  friend Monomial operator*(const Monomial& a, const Monomial& b);
  friend bool operator==(const Monomial& a, const Monomial& b) { return a.factors_ == b.factors_; }
  friend std::strong_ordering operator<=>(const Monomial& a, const Monomial& b);

  std::size_t hash() const;

private:
  std::vector<Factor> factors_;
  int degree_ = 0;
};

/// Polynomial with exact rational coefficients over one ModuliContext.
class TautPolynomial {
public:
  using TermMap = std::map<Monomial, Rational>;

  explicit TautPolynomial(ModuliContext ctx) : ctx_(ctx) {}
  TautPolynomial(ModuliContext ctx, Rational constant);
  TautPolynomial(ModuliContext ctx, const Monomial& m, Rational coeff = 1);

  static TautPolynomial psi(ModuliContext ctx, int i);
  static TautPolynomial kappa(ModuliContext ctx, int a);
  /// Canonicalizes I (complement if 1 is not in I) and checks stability.
  static TautPolynomial boundary(ModuliContext ctx, Subset I);

  const ModuliContext& context() const { return ctx_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  Rational coefficient(const Monomial& m) const;

  /// Adds c*m, dropping the term if the coefficient cancels.
  void add_term(const Monomial& m, const Rational& c);

  /// True when every term has the given degree (the zero polynomial qualifies).
  bool is_homogeneous(int degree) const;
  int max_degree() const;

  TautPolynomial& operator+=(const TautPolynomial& o);
  TautPolynomial& operator-=(const TautPolynomial& o);
  TautPolynomial& operator*=(const Rational& c);
  friend TautPolynomial operator+(TautPolynomial a, const TautPolynomial& b) { return a += b; }
  friend TautPolynomial operator-(TautPolynomial a, const TautPolynomial& b) { return a -= b; }
  friend TautPolynomial operator*(const TautPolynomial& a, const TautPolynomial& b);
  friend TautPolynomial operator*(TautPolynomial a, const Rational& c) { return a *= c; }
  friend TautPolynomial operator*(const Rational& c, TautPolynomial a) { return a *= c; }
  TautPolynomial operator-() const;
  TautPolynomial pow(unsigned e) const;

  /// Replaces every occurrence of `g` by `replacement`.
  TautPolynomial substitute(Generator g, const TautPolynomial& replacement) const;

  friend bool operator==(const TautPolynomial& a, const TautPolynomial& b) {
    return a.ctx_ == b.ctx_ && a.terms_ == b.terms_;
  }

private:
  void require_same_context(const TautPolynomial& o) const;

  ModuliContext ctx_;
  TermMap terms_;
};

/// Multiplies a monomial's terms into a polynomial: m * p.
TautPolynomial multiply(const ModuliContext& ctx, const Monomial& m, const TautPolynomial& p);

/// Applies a relabeling of marked points. perm[i-1] is the new label of
/// point i. Boundary subsets are re-canonicalized afterwards.
Monomial relabel(const ModuliContext& ctx, const Monomial& m, std::span<const int> perm);
TautPolynomial relabel(const TautPolynomial& p, std::span<const int> perm);

/// Checks that every generator of m is valid on ctx.
void validate(const ModuliContext& ctx, const Monomial& m);

// Text form. Grammar (whitespace-insensitive):
//   expr     := term (("+"|"-") term)*
//   term     := (rational "*")? factor ("*" factor)*  |  rational
//   factor   := gen ("^" posint)? | "(" expr ")" ("^" posint)?
//   gen      := "psi" posint | "kappa" posint | "b{" posint ("," posint)* "}"
//   rational := ("-")? int ("/" posint)?

class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& what, std::size_t position);
  std::size_t position() const { return position_; }

private:
  std::size_t position_;
};

TautPolynomial parse_expression(const ModuliContext& ctx, std::string_view text);

std::string format(const Monomial& m);
std::string format(const TautPolynomial& p);

}  // namespace mzero

template <>
struct std::hash<mzero::Monomial> {
  std::size_t operator()(const mzero::Monomial& m) const noexcept { return m.hash(); }
};
