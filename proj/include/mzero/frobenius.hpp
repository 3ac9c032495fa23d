#pragma once

// State spaces of the three D4 theories in the common basis {1, X, Y, X^2}:
// gradings, pairing, product, and the genus-zero selection rules.
//
// Degrees use the halved convention deg = deg_W / 2, so the basis has
// degrees 0, 1/3, 1/3, 2/3.

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mzero/rational.hpp"

namespace mzero {

enum class Theory : std::uint8_t { D4J, D4TGmax, SaitoD4 };

std::string_view theory_name(Theory t);
/// Accepts "d4-j", "d4t-gmax", "saito" (case-insensitive).
std::optional<Theory> parse_theory(std::string_view text);
inline constexpr std::array<Theory, 3> all_theories{Theory::D4J, Theory::D4TGmax, Theory::SaitoD4};

enum class Basis : std::uint8_t { One = 0, X = 1, Y = 2, X2 = 3 };
inline constexpr std::array<Basis, 4> all_basis{Basis::One, Basis::X, Basis::Y, Basis::X2};

std::string_view basis_label(Basis b);
/// "1", "X", "Y", "X2" (also "X^2").
std::optional<Basis> parse_basis(std::string_view text);
/// Comma-separated list of basis labels; throws std::invalid_argument.
std::vector<Basis> parse_insertions(std::string_view text);
std::string format_insertions(const std::vector<Basis>& ins);

/// Degree in thirds: 0, 1, 1, 2.
int degree_thirds(Basis b);

class FrobeniusError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

struct GroupElement {
  std::vector<Rational> theta;  // phases in [0,1), one per variable
  int order = 1;

  /// Number of variables fixed by the element.
  int fixed_count() const;
  bool narrow() const { return fixed_count() == 0; }
  /// Throws FrobeniusError unless each phase lies in [0,1) with denominator dividing order.
  void validate() const;
};

/// g^k, phases reduced mod 1.
GroupElement power(const GroupElement& g, int k);

/// Sum over all variables of (1 - 2 q_i).
Rational central_charge(const std::vector<Rational>& q);
/// Same sum restricted to variables fixed by g.
Rational central_charge(const GroupElement& g, const std::vector<Rational>& q);

struct DegreeShiftForms {
  Rational from_phases;      // sum (theta_i - q_i)
  Rational from_total_chat;  // (c - N)/2 + sum_{theta != 0} (theta - 1/2)
  Rational from_sector_chat; // (c_g - N)/2 + sum_{theta != 0} (theta - q)
};

DegreeShiftForms degree_shift_forms(const GroupElement& g, const std::vector<Rational>& q);
/// The degree shifting number; throws std::logic_error if the three forms disagree.
Rational degree_shift(const GroupElement& g, const std::vector<Rational>& q);

struct TheorySpec {
  Theory id;
  std::string name;
  bool a_model = false;
  std::vector<Rational> q;  // weights of x and y (empty for the B-model)
  Rational c_hat;
  GroupElement generator;   // exponential grading element (A-models only)
  /// Sector of each basis element, as a power of `generator` (A-models only).
  std::array<int, 4> sector_power{};
  /// Symmetric pairing matrix in the standard basis.
  std::array<std::array<Rational, 4>, 4> eta;
};

const TheorySpec& theory_spec(Theory t);

/// Group element carrying basis element b (A-models only).
GroupElement sector_of(const TheorySpec& spec, Basis b);
/// Halved W-degree (N_g + 2 iota_g)/2 of the sector carrying b (A-models only).
Rational sector_degree(const TheorySpec& spec, Basis b);

struct SectorElement {
  Theory theory = Theory::SaitoD4;
  std::array<Rational, 4> c;  // coordinates in {1, X, Y, X^2}

  static SectorElement basis(Theory t, Basis b, Rational coeff = Rational(1));
  SectorElement& operator+=(const SectorElement& o);
  friend SectorElement operator+(SectorElement a, const SectorElement& b) { return a += b; }
  friend SectorElement operator*(const Rational& s, SectorElement a);
  friend bool operator==(const SectorElement&, const SectorElement&) = default;
  bool is_zero() const;
  std::string to_string() const;
};

/// Product in C[X,Y]/(3X^2 + Y^2, 2XY).
SectorElement frobenius_product(const SectorElement& u, const SectorElement& v);
Rational pairing(const SectorElement& u, const SectorElement& v);
/// Elements d'_j with pairing(basis_i, d'_j) = delta_ij.
std::array<SectorElement, 4> dual_basis(Theory t);

/// For each variable j: q_j (2g - 2 + k) - sum_l theta_j(g_l).
std::vector<Rational> line_bundle_degrees(const TheorySpec& spec, int genus,
                                          const std::vector<GroupElement>& insertions);
std::vector<Rational> line_bundle_degrees(const TheorySpec& spec, int genus, const std::vector<Basis>& insertions);

enum class VanishReason : std::uint8_t { None, Degree, Identity, OddY, NonIntegral };
std::string_view to_string(VanishReason r);

struct Verdict {
  bool vanishes = false;
  VanishReason reason = VanishReason::None;
  std::string detail;
};

/// Genus-zero selection rules shared by all three theories (degree sum and
/// identity insertions).
Verdict selection_rules(const std::vector<Basis>& insertions);
/// selection_rules plus the theory-specific rules: odd number of Y for
/// D4-J, non-integral line bundle degrees for D4T-Gmax.
Verdict vanishing_check(Theory t, const std::vector<Basis>& insertions);

/// Sorted multisets of size min_k..max_k over the basis.
std::vector<std::vector<Basis>> multisets(int min_k, int max_k);
/// Multisets of size 3..max_k passing selection_rules.
std::vector<std::vector<Basis>> surviving_correlators(int max_k = 7);

}  // namespace mzero
