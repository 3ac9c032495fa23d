#include "mzero/chiodo.hpp"

#include <stdexcept>
#include <string>

namespace mzero {

Rational bernoulli_number(int d) {
  if (d < 0) throw std::invalid_argument("Bernoulli index must be nonnegative");
  // sum_{k=0}^{m} C(m+1,k) B_k = 0 for m >= 1, B_0 = 1, giving B_1 = -1/2.
  std::vector<Rational> b{Rational(1)};
  for (int m = 1; m <= d; ++m) {
    Rational acc;
    for (int k = 0; k < m; ++k) acc += binomial(m + 1, k) * b[k];
    b.push_back(-acc / Rational(m + 1));
  }
  return b[d];
}

Rational bernoulli_poly(int d, const Rational& t) {
  Rational sum;
  for (int k = 0; k <= d; ++k) sum += binomial(d, k) * bernoulli_number(k) * t.pow(d - k);
  return sum;
}

void ChiodoConfig::validate() const {
  (void)ModuliContext(n);
  if (r < 1) throw TautError("root order r must be positive");
  if (static_cast<int>(theta.size()) != n) throw TautError("need one phase per marked point");
  for (const auto& t : theta) {
    if (t.sign() < 0 || !(t < Rational(1)))
      throw TautError("phase " + t.to_string() + " outside [0,1)");
    if (!(t * Rational(r)).is_integer())
      throw TautError("phase " + t.to_string() + " is not a multiple of 1/" + std::to_string(r));
  }
}

ChiodoConfig ChiodoConfig::d4_seven_point() {
  return ChiodoConfig{7, 3, 1, std::vector<Rational>(7, Rational(2, 3))};
}

Rational branch_phase(const ChiodoConfig& cfg, Subset side) {
  Rational base = cfg.q() * Rational(size_of(side) - 1);
  for (int i : elements(side)) base -= cfg.theta[i - 1];
  for (int k = 0; k < cfg.r; ++k) {
    Rational candidate(k, cfg.r);
    if ((base - candidate).is_integer()) return candidate;
  }
  throw TautError("no integral line bundle degree on the component carrying " +
                  subset_to_string(side));
}

EdgeDecoration theta_edge(const ChiodoConfig& cfg, Subset I) {
  const ModuliContext ctx(cfg.n);
  if (canonicalize_boundary(ctx, I).subset() != I)
    throw TautError("theta_edge expects a canonical subset containing 1");
  Rational plus = branch_phase(cfg, I);
  Rational minus = plus.is_zero() ? Rational{} : Rational(1) - plus;
  return {I, plus, minus};
}

namespace {

std::pair<int, int> pick_pair(Subset pool, PairRule rule) {
  auto pts = elements(pool);
  if (pts.size() < 2) throw TautError("not enough points to choose an auxiliary pair");
  if (rule == PairRule::Smallest) return {pts[0], pts[1]};
  return {pts[pts.size() - 2], pts[pts.size() - 1]};
}

void require_pair(Subset pool, std::pair<int, int> p, const char* what) {
  if (p.first == p.second || !contains(pool, p.first) || !contains(pool, p.second))
    throw TautError(std::string("invalid auxiliary pair for ") + what);
}

}  // namespace

TautPolynomial pushforward_psi_pm(const ModuliContext& ctx, Subset K, Branch branch,
                                  std::optional<std::pair<int, int>> pair, PairRule rule) {
  const Subset all = ctx.all_points();
  if (canonicalize_boundary(ctx, K).subset() != K)
    throw TautError("pushforward_psi_pm expects a canonical subset containing 1");
  const Subset Kc = all & ~K;
  const Monomial dk(Generator::boundary(K));
  TautPolynomial out(ctx);

  if (branch == Branch::Plus) {
    if (size_of(K) <= 2) return out;
    const Subset pool = K & ~point_bit(1);
    auto [r, s] = pair.value_or(pick_pair(pool, rule));
    require_pair(pool, {r, s}, "psi_+");
    const Subset rs = point_bit(r) | point_bit(s);
    // Delta_K Delta_I with {1,r,s} <= I < K.
    const Subset free_plus = K & ~rs & ~point_bit(1);
    for (Subset t = free_plus;; t = (t - 1) & free_plus) {
      Subset I = t | rs | point_bit(1);
      if (I != K) out.add_term(dk * Monomial(canonicalize_boundary(ctx, I)), Rational(1));
      if (t == 0) break;
    }
    // Delta_K Delta_{I u K^c} with 1 in I <= K \ {r,s}.
    for (Subset t = free_plus;; t = (t - 1) & free_plus) {
      Subset I = t | point_bit(1);
      out.add_term(dk * Monomial(canonicalize_boundary(ctx, I | Kc)), Rational(1));
      if (t == 0) break;
    }
    return out;
  }

  if (size_of(K) >= ctx.n() - 2) return out;
  auto [t, u] = pair.value_or(pick_pair(Kc, rule));
  require_pair(Kc, {t, u}, "psi_-");
  // Delta_K Delta_{I u K} with nonempty I <= K^c \ {t,u}.
  const Subset free_minus = Kc & ~(point_bit(t) | point_bit(u));
  for (Subset x = free_minus; x != 0; x = (x - 1) & free_minus)
    out.add_term(dk * Monomial(canonicalize_boundary(ctx, x | K)), Rational(1));
  return out;
}

TautPolynomial pushforward_branch_psi(const ModuliContext& ctx, Subset side, int a, int b) {
  const Subset all = ctx.all_points();
  const Subset other = all & ~side;
  if (size_of(side) < 2 || size_of(other) < 2) throw TautError("unstable cut");
  require_pair(side, {a, b}, "branch psi");
  TautPolynomial out(ctx);
  if (size_of(side) == 2) return out;
  const Monomial cut(canonicalize_boundary(ctx, side));
  // On the factor with points side + {branch}: psi_branch = sum of divisors
  // separating {branch} u U from side \ U, with U nonempty and a, b not in U.
  const Subset pool = side & ~(point_bit(a) | point_bit(b));
  for (Subset U = pool; U != 0; U = (U - 1) & pool)
    out.add_term(cut * Monomial(canonicalize_boundary(ctx, side & ~U)), Rational(1));
  return out;
}

TautPolynomial pushforward_psi_four_point(const ModuliContext& ctx, Subset K, Branch branch) {
  const Subset Kc = ctx.all_points() & ~K;
  const Monomial dk(canonicalize_boundary(ctx, K));
  if (branch == Branch::Plus) {
    if (size_of(K) != 3) throw TautError("plus factor is not four-pointed");
    return TautPolynomial(ctx, dk * Monomial(Generator::psi(elements(K).front())));
  }
  if (size_of(Kc) != 3) throw TautError("minus factor is not four-pointed");
  return TautPolynomial(ctx, dk * Monomial(Generator::psi(elements(Kc).front())));
}

std::string_view to_string(Kappa2Variant v) {
  return v == Kappa2Variant::Displayed ? "displayed" : "appendix";
}

TautPolynomial rewrite_kappa2(const ModuliContext& ctx, Kappa2Variant variant) {
  if (variant == Kappa2Variant::Appendix) {
    if (ctx.n() != 7) throw TautError("the appendix kappa2 variant exists only for n = 7");
    auto d = [&](std::initializer_list<int> pts) { return TautPolynomial::boundary(ctx, make_subset(pts)); };
    auto psi = [&](int i) { return TautPolynomial::psi(ctx, i); };
    TautPolynomial first = TautPolynomial::kappa(ctx, 1) - psi(7) - (psi(6) - d({1, 7}));
    TautPolynomial second = d({1, 2, 3, 6, 7}) + d({1, 2, 3, 6}) + d({1, 2, 3, 7}) + d({1, 2, 3});
    return first * second + (psi(6) - d({1, 2, 3, 4, 5})).pow(2) + psi(7).pow(2);
  }
  if (ctx.n() < 5) throw TautError("kappa2 rewriting needs n >= 5");
  const ModuliContext base(5);
  TautPolynomial k2 = TautPolynomial::kappa(base, 1) * TautPolynomial::boundary(base, make_subset({1, 2, 3}));
  while (k2.context().n() < ctx.n()) {
    k2 = pullback_forget_last(k2);
    const ModuliContext cur = k2.context();
    k2 += TautPolynomial(cur, Monomial(Generator::psi(cur.n()), 2));
  }
  return k2;
}

namespace {

TautPolynomial boundary_part(const ChiodoConfig& cfg, int d, Orientation orientation, PairRule rule) {
  const ModuliContext ctx(cfg.n);
  const Subset all = ctx.all_points();
  const Rational norm = factorial(static_cast<unsigned>(d + 1));
  TautPolynomial out(ctx);
  if (d == 0) return out;

  if (orientation == Orientation::Folded) {
    for (Subset I : ctx.boundary_indices()) {
      const Rational w = bernoulli_poly(d + 1, theta_edge(cfg, I).theta_plus) / norm;
      if (w.is_zero()) continue;
      if (d == 1) {
        out += TautPolynomial::boundary(ctx, I) * w;
      } else {
        out += (pushforward_psi_pm(ctx, I, Branch::Minus, std::nullopt, rule) -
                pushforward_psi_pm(ctx, I, Branch::Plus, std::nullopt, rule)) * w;
      }
    }
    return out;
  }

  // Every ordered cut: `side` carries the + tail, its complement the - tail.
  for (Subset side = 1; side < all; ++side) {
    if (size_of(side) < 2 || size_of(side) > cfg.n - 2) continue;
    const Rational w = bernoulli_poly(d + 1, branch_phase(cfg, side)) / (norm * Rational(2));
    if (w.is_zero()) continue;
    if (d == 1) {
      out += TautPolynomial::boundary(ctx, side) * w;
    } else {
      const Subset other = all & ~side;
      auto [a, b] = pick_pair(side, rule);
      auto [c, e] = pick_pair(other, rule);
      out += (pushforward_branch_psi(ctx, other, c, e) - pushforward_branch_psi(ctx, side, a, b)) * w;
    }
  }
  return out;
}

}  // namespace

TautPolynomial chern_component(const ChiodoConfig& cfg, int d, Orientation orientation, PairRule rule) {
  cfg.validate();
  if (d < 0 || d > 2) throw TautError("Chern character components are available for d = 0, 1, 2");
  const ModuliContext ctx(cfg.n);
  const Rational norm = factorial(static_cast<unsigned>(d + 1));
  TautPolynomial out(ctx);
  const Rational main = bernoulli_poly(d + 1, cfg.q()) / norm;
  if (d == 0)
    out.add_term(Monomial{}, main * Rational(cfg.n - 2));
  else
    out.add_term(Monomial(Generator::kappa(d)), main);
  for (int i = 1; i <= cfg.n; ++i)
    out.add_term(Monomial(Generator::psi(i), static_cast<std::uint32_t>(d)),
                 -bernoulli_poly(d + 1, cfg.theta[i - 1]) / norm);
  out += boundary_part(cfg, d, orientation, rule);
  return out;
}

TautPolynomial second_chern_class(const ChiodoConfig& cfg, const LambdaOptions& options) {
  const ModuliContext ctx(cfg.n);
  const TautPolynomial ch1 = chern_component(cfg, 1, options.orientation, options.pairs);
  const TautPolynomial ch2 = chern_component(cfg, 2, options.orientation, options.pairs);
  const TautPolynomial c2 = ch1 * ch1 * Rational(1, 2) - ch2;
  return c2.substitute(Generator::kappa(2), rewrite_kappa2(ctx, options.kappa2));
}

TautPolynomial lambda_class(const ChiodoConfig& cfg, const LambdaOptions& options) {
  const TautPolynomial c2 = second_chern_class(cfg, options);
  return c2 * c2;
}

Rational seven_point_correlator(const Integrator& engine, const LambdaOptions& options) {
  return engine.integrate(lambda_class(ChiodoConfig::d4_seven_point(), options));
}

}  // namespace mzero
