#pragma once

// Chern character of the pushforward of the universal r-th root of
// omega_log^s on Mbar_{0,n}, translated into psi, kappa and boundary classes,
// and the degree-4 class Lambda = c_2^2 whose integral over Mbar_{0,7} is the
// D4 seven-point correlator <X^2,...,X^2>.

#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "mzero/integrate.hpp"
#include "mzero/rational.hpp"
#include "mzero/taut_expr.hpp"

namespace mzero {

Rational bernoulli_number(int d);
/// B_d(t), with the convention B_1(t) = t - 1/2.
Rational bernoulli_poly(int d, const Rational& t);

struct ChiodoConfig {
  int n = 0;
  int r = 1;
  int s = 0;
  std::vector<Rational> theta;  // local phases at the marked points, in [0,1)

  Rational q() const { return Rational(s, r); }
  /// Throws TautError unless r >= 1, theta has n entries in [0,1) with
  /// denominators dividing r.
  void validate() const;

  /// n = 7, r = 3, s = 1, every phase 2/3.
  static ChiodoConfig d4_seven_point();
};

struct EdgeDecoration {
  Subset I;
  Rational theta_plus;
  Rational theta_minus;
};

/// Phase at the node branch of the component carrying `side`, fixed by
/// integrality of q(|side|-1) - sum_{i in side} theta_i - theta_branch.
Rational branch_phase(const ChiodoConfig& cfg, Subset side);

/// Decoration of the canonical cut along Delta_I (plus side carries I).
EdgeDecoration theta_edge(const ChiodoConfig& cfg, Subset I);

enum class Branch { Plus, Minus };

/// How the auxiliary points (r,s) in K\{1} or (t,u) outside K are picked.
enum class PairRule { Smallest, Largest };

/// rho_{K*}(psi_+) or rho_{K*}(psi_-) as a sum of Delta_K * Delta_J. K must
/// contain 1. `pair` overrides the auxiliary points; otherwise `rule` picks them.
TautPolynomial pushforward_psi_pm(const ModuliContext& ctx, Subset K, Branch branch,
                                  std::optional<std::pair<int, int>> pair = std::nullopt,
                                  PairRule rule = PairRule::Smallest);

/// Pushforward of psi at the node branch on the component carrying `side`
/// (any side, 1 need not be in it), rewriting psi of the branch on that factor
/// through its boundary divisors with auxiliary points a, b in `side`.
TautPolynomial pushforward_branch_psi(const ModuliContext& ctx, Subset side, int a, int b);

/// Four-point-factor shortcuts: psi_+ Delta_K = psi_j Delta_K (j in K) when
/// |K| = 3, and psi_- Delta_K = psi_b Delta_K (b not in K) when |K| = n - 3.
TautPolynomial pushforward_psi_four_point(const ModuliContext& ctx, Subset K, Branch branch);

enum class Kappa2Variant {
  Displayed,  // Delta_{6,7} in the first factor; equals the double pullback
  Appendix    // Delta_{1,7} in the first factor
};

std::string_view to_string(Kappa2Variant v);

/// kappa_2 on Mbar_{0,n} in terms of kappa_1, psi and boundary classes,
/// starting from kappa_2 = kappa_1 Delta_{123} on Mbar_{0,5} and pulling back
/// along forgetful maps. The Appendix variant exists only for n = 7.
TautPolynomial rewrite_kappa2(const ModuliContext& ctx,
                              Kappa2Variant variant = Kappa2Variant::Displayed);

/// Folded: one term per canonical Delta_I weighted by B(theta_+).
/// Summed: both orientations of every cut with the overall factor 1/2.
enum class Orientation { Folded, Summed };

/// Degree-d part (d in {0,1,2}) of ch(R pi_* L) pushed to Mbar_{0,n}. kappa_2
/// is left as a generator.
TautPolynomial chern_component(const ChiodoConfig& cfg, int d,
                               Orientation orientation = Orientation::Folded,
                               PairRule rule = PairRule::Smallest);

struct LambdaOptions {
  Kappa2Variant kappa2 = Kappa2Variant::Displayed;
  Orientation orientation = Orientation::Folded;
  PairRule pairs = PairRule::Smallest;
};

/// c_2 = ch_1^2/2 - ch_2 with kappa_2 rewritten; homogeneous of degree 2.
TautPolynomial second_chern_class(const ChiodoConfig& cfg, const LambdaOptions& options = {});

/// c_2 squared.
TautPolynomial lambda_class(const ChiodoConfig& cfg, const LambdaOptions& options = {});

/// Integral of lambda_class over Mbar_{0,7} for the D4 configuration.
Rational seven_point_correlator(const Integrator& engine, const LambdaOptions& options = {});

}  // namespace mzero
