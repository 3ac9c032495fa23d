#pragma once

// Genus-zero primary correlators of the D4 theories, reconstructed from the
// pairing, the three-point values and the single four-point parameter
// a = <X,X,X,X^2> by the WDVV reconstruction identity
//
//   <g_1..g_m, A, B, E*F> =
//       sum_{I u J = [m]} sum_l <g_I, A, E, d_l> <d'_l, F, B, g_J>
//     - sum_{I u J = [m], J != 0} sum_l <g_I, A, B, d_l> <d'_l, F, E, g_J>,
//
// where the sums over I u J run over ordered splits of the index set [m].

#include <array>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "mzero/frobenius.hpp"
#include "mzero/rational.hpp"

namespace mzero {

/// Polynomial in the formal parameter a with rational coefficients.
class SymbolicValue {
public:
  SymbolicValue() = default;
  SymbolicValue(Rational c);  // NOLINT(google-explicit-constructor)
  static SymbolicValue monomial(Rational c, unsigned power);

  SymbolicValue& operator+=(const SymbolicValue& o);
  SymbolicValue& operator-=(const SymbolicValue& o);
  friend SymbolicValue operator+(SymbolicValue x, const SymbolicValue& y) { return x += y; }
  friend SymbolicValue operator-(SymbolicValue x, const SymbolicValue& y) { return x -= y; }
  friend SymbolicValue operator*(const SymbolicValue& x, const SymbolicValue& y);
  SymbolicValue operator-() const;
  friend bool operator==(const SymbolicValue&, const SymbolicValue&) = default;

  bool is_zero() const { return c_.empty(); }
  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  Rational coefficient(unsigned power) const;
  /// Dense coefficients from a^0 upward.
  const std::vector<Rational>& coefficients() const { return c_; }
  Rational evaluate(const Rational& a) const;
  /// Value when only odd-free powers appear and a^2 is known.
  std::optional<Rational> evaluate_even(const Rational& a_squared) const;
  std::string to_string() const;

private:
  void trim();
  std::vector<Rational> c_;
};

class ReconstructionError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Which factorization of X^2 is used: X*X, or Y*Y = -3 X^2.
enum class Factorization { XX, YY };

/// One explicit use of the identity: positions (in the insertion list) of the
/// X^2 being factored and of the two insertions playing A and B.
struct SplitChoice {
  std::size_t x2 = 0;
  std::size_t alpha = 1;
  std::size_t beta = 2;
  Factorization factor = Factorization::XX;
};

/// Memo table of correlators keyed by sorted insertion multisets. Seeded with
/// the three-point values and the four-point values <X,X,X,X^2> = a,
/// <Y,Y,Y,X^2> = <Y,X,X,X^2> = 0. Thread-safe.
class CorrelatorTable {
public:
  using Key = std::vector<Basis>;

  /// With a theory, its vanishing rules short-circuit to zero; without, only
  /// the shared selection rules are applied.
  explicit CorrelatorTable(std::optional<Theory> theory = std::nullopt);

  std::optional<Theory> theory() const { return theory_; }
  std::optional<SymbolicValue> lookup(const Key& sorted) const;
  void store(const Key& sorted, const SymbolicValue& v);
  std::size_t size() const;

  /// Value of any genus-zero primary correlator (any insertion order).
  SymbolicValue get(std::vector<Basis> insertions);
  /// Right side of the identity, either for `choice` or for the first
  /// choice that does not recurse into a correlator under evaluation.
  SymbolicValue reconstruct(const std::vector<Basis>& insertions, std::optional<SplitChoice> choice);

private:
  SymbolicValue evaluate(const Key& sorted, std::set<Key>& active);
  SymbolicValue rhs(const std::vector<Basis>& insertions, const SplitChoice& choice, std::set<Key>& active);

  std::optional<Theory> theory_;
  mutable std::mutex mutex_;
  std::map<Key, SymbolicValue> memo_;
};

/// Value of a correlator with k >= 4 via the reconstruction identity, trying
/// split choices in a fixed order and skipping those that would recurse into
/// a correlator already being evaluated. Memoizes into the table.
SymbolicValue reconstruct_correlator(CorrelatorTable& table, const std::vector<Basis>& insertions);

/// Right side of the identity for one explicit choice. Throws
/// ReconstructionError if the choice is invalid or its right side contains
/// the correlator itself.
SymbolicValue reconstruct_with(CorrelatorTable& table, const std::vector<Basis>& insertions,
                               const SplitChoice& choice);

/// All valid explicit choices for the insertion list.
std::vector<SplitChoice> split_choices(const std::vector<Basis>& insertions, bool include_yy = true);

/// Exponents of (t_1, t_X, t_Y, t_X2).
using PotentialMonomial = std::array<int, 4>;
using Potential = std::map<PotentialMonomial, SymbolicValue>;

std::string format_monomial(const PotentialMonomial& m);
std::string format_potential(const Potential& p);

/// Genus-zero primary potential sum_k (1/k!) sum over ordered insertions,
/// i.e. coefficient = value / prod(m_i!). Throws if max_k > 7.
Potential build_potential(CorrelatorTable& table, int max_k = 7);

/// The potential with coefficients
///   1/12, -1/4, 1/12, a/6, 3a/2, a^2/2, -3a^2/2, 3a^4/70
/// on t_X^2 t_1, t_Y^2 t_1, t_X2 t_1^2, t_X^3 t_X2, t_X t_Y^2 t_X2,
/// t_X^2 t_X2^3, t_Y^2 t_X2^3, t_X2^7.
Potential expected_potential();

/// Coefficients present in either potential where they differ.
struct CoefficientMismatch {
  PotentialMonomial monomial;
  SymbolicValue computed;
  SymbolicValue expected;
};
std::vector<CoefficientMismatch> compare_potentials(const Potential& computed, const Potential& expected);

/// Nonzero WDVV residuals F_{ije} eta^{ef} F_{fkl} - F_{ike} eta^{ef} F_{fjl}
/// over all index quadruples, each a polynomial in t with a-polynomial
/// coefficients. Empty when the potential is associative.
struct WdvvResidual {
  std::array<int, 4> indices;
  Potential residual;
};
std::vector<WdvvResidual> wdvv_residuals(const Potential& p, Theory t = Theory::SaitoD4);

/// Numerical specialization of a for one theory.
struct TheoryEvaluation {
  Theory theory;
  std::optional<Rational> a;          // exact a when rational
  std::optional<Rational> a_squared;  // exact a^2 when rational
  Rational a_fourth;
  std::string a_text;                 // human-readable description of a
  bool a_nonzero = false;
  /// For D4-J: the seven-point input and the two a^4 values from it.
  std::optional<Rational> seven_point;
  std::optional<Rational> seven_point_coefficient;  // c with <X2^7> = c a^4 from reconstruction
  std::optional<Rational> a_fourth_stated_relation; // seven_point / 216
  std::vector<std::string> notes;
};

/// `seven_point` is the integrated D4-J seven-point correlator; required for
/// D4-J and ignored otherwise.
TheoryEvaluation evaluate_theory(Theory t, std::optional<Rational> seven_point = std::nullopt);

/// Value of v after substituting the theory's a, when that value is rational:
/// directly from a, from a^2 for even polynomials, from a^4 when only powers
/// divisible by four occur.
std::optional<Rational> specialize(const SymbolicValue& v, const TheoryEvaluation& e);

struct GateReport {
  Theory theory;
  bool frobenius_match = false;
  bool a_nonzero = false;
  bool passed = false;
  std::string conclusion;
};

/// Frobenius data of the theory agrees with the Saito data and a != 0.
GateReport tau_gate(const TheoryEvaluation& e);

}  // namespace mzero
