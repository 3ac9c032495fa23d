#pragma once

// Independent routes to intersection numbers, used to validate the recursive
// engine. None of these go through boundary restriction.

#include <span>
#include <vector>

#include "mzero/integrate.hpp"
#include "mzero/rational.hpp"
#include "mzero/taut_expr.hpp"

namespace mzero::oracle {

/// <tau_{a_1} ... tau_{a_n}>_0 by brute-force string-equation recursion.
Rational psi_string_recursion(std::span<const int> exponents);

/// Integral over Mbar_{0,n} of prod psi_i^{a_i} * prod_j kappa_{b_j}, computed
/// by adding one point per kappa factor:
///   pi_*(prod_j psi_{n+j}^{b_j+1}) = sum over sigma in S_m of
///   prod over cycles c of sigma of kappa_{sum_{j in c} b_j}.
Rational kappa_psi_by_adding_points(std::span<const int> psi_exponents,
                                    std::span<const int> kappa_indices);

/// Integral of kappa_1 * X on Mbar_{0,n} as the integral of
/// psi_{n+1}^2 * (pullback of X) on Mbar_{0,n+1}.
Rational kappa1_times_by_adding_point(const Integrator& engine, const TautPolynomial& x);

}  // namespace mzero::oracle
