#include "mzero/integrate.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <string>
#include <thread>

namespace mzero {

bool crosses(Subset I, Subset J, Subset all) {
  const Subset Ic = all & ~I, Jc = all & ~J;
  return (I & J) && (I & Jc) && (Ic & J) && (Ic & Jc);
}

namespace {

// Position of each point of `t` inside `points`, as a subset of 1..|points|.
Subset map_into(Subset t, Subset points) {
  Subset out = 0;
  for (Subset s = t; s != 0; s &= s - 1) {
    Subset bit = s & (~s + 1);
    out |= point_bit(size_of(points & (bit - 1)) + 1);
  }
  return out;
}

int rank_in(int point, Subset points) { return size_of(points & (point_bit(point) - 1)) + 1; }

}  // namespace

Restriction restrict_to_boundary(const ModuliContext& ctx, Subset I, const Monomial& m) {
  const Subset all = ctx.all_points();
  if (canonicalize_boundary(ctx, I).subset() != I)
    throw std::logic_error("restrict_to_boundary: subset is not canonical");
  const Subset Ic = all & ~I;
  Restriction r{FactorLabel{Side::Plus, I}, FactorLabel{Side::Minus, Ic}, {}};
  const ModuliContext plus_ctx = r.plus.context(), minus_ctx = r.minus.context();

  std::vector<Monomial::Factor> plus, minus;
  std::uint32_t residual = 0, kappa = 0;
  for (const auto& [g, e] : m.factors()) {
    switch (g.kind) {
      case GenKind::Kappa:
        if (g.index != 1) throw std::logic_error("restrict_to_boundary: kappa2 must be rewritten first");
        kappa = e;
        break;
      case GenKind::Psi: {
        int j = static_cast<int>(g.index);
        if (contains(I, j))
          plus.emplace_back(Generator::psi(rank_in(j, I)), e);
        else
          minus.emplace_back(Generator::psi(rank_in(j, Ic)), e);
        break;
      }
      case GenKind::Boundary: {
        const Subset J = g.subset();
        if (J == I) {
          residual += e;
          break;
        }
        if (crosses(I, J, all))
          throw std::logic_error("restrict_to_boundary: " + subset_to_string(J) + " crosses " +
                                 subset_to_string(I));
        const Subset Jc = all & ~J;
        if ((J & ~I) == 0) {
          plus.emplace_back(canonicalize_boundary(plus_ctx, map_into(J, I)), e);
        } else if ((Jc & ~I) == 0) {
          plus.emplace_back(canonicalize_boundary(plus_ctx, map_into(Jc, I)), e);
        } else {
          minus.emplace_back(canonicalize_boundary(minus_ctx, map_into(Jc, Ic)), e);
        }
        break;
      }
    }
  }

  const Monomial base_plus = Monomial::from_factors(std::move(plus));
  const Monomial base_minus = Monomial::from_factors(std::move(minus));
  // Each residual Delta_I contributes (-psi_+) + (-psi_-).
  const Rational sign = (residual % 2 == 0) ? Rational(1) : Rational(-1);
  // kappa_1 restricts to kappa_1 of the plus factor plus kappa_1 of the minus factor.
  for (std::uint32_t k = 0; k <= residual; ++k)
    for (std::uint32_t j = 0; j <= kappa; ++j) {
      r.terms.push_back({base_plus * Monomial(Generator::psi(r.plus.branch()), k) * Monomial(Generator::kappa(1), j),
                         base_minus * Monomial(Generator::psi(r.minus.branch()), residual - k) *
                             Monomial(Generator::kappa(1), kappa - j),
                         sign * binomial(residual, k) * binomial(kappa, j)});
    }
  return r;
}

Rational psi_multinomial(const ModuliContext& ctx, std::span<const int> exponents) {
  if (static_cast<int>(exponents.size()) != ctx.n())
    throw TautError("psi_multinomial expects one exponent per marked point");
  int total = 0;
  for (int a : exponents) {
    if (a < 0) return Rational{};
    total += a;
  }
  if (total != ctx.dimension()) return Rational{};
  Rational r = factorial(static_cast<unsigned>(total));
  for (int a : exponents) r /= factorial(static_cast<unsigned>(a));
  return r;
}

TautPolynomial eliminate_kappa1(const ModuliContext& ctx) {
  TautPolynomial p(ctx);
  for (int i = 1; i <= ctx.n(); ++i) p.add_term(Monomial(Generator::psi(i)), Rational(1));
  for (Subset I : ctx.boundary_indices()) p.add_term(Monomial(Generator::boundary(I)), Rational(-1));
  return p;
}

TautPolynomial psi_as_boundary(const ModuliContext& ctx, int i, int a, int b) {
  for (int x : {i, a, b})
    if (x < 1 || x > ctx.n()) throw TautError("point " + std::to_string(x) + " out of range");
  if (i == a || i == b || a == b) throw TautError("psi_as_boundary needs distinct i, a, b");
  const Subset all = ctx.all_points();
  TautPolynomial p(ctx);
  for (Subset I : ctx.boundary_indices()) {
    for (Subset side : {I, all & ~I}) {
      if (contains(side, i) && !contains(side, a) && !contains(side, b)) {
        p.add_term(Monomial(Generator::boundary(I)), Rational(1));
        break;
      }
    }
  }
  return p;
}

TautPolynomial pullback_forget_last(const TautPolynomial& p) {
  const ModuliContext src = p.context();
  const ModuliContext dst(src.n() + 1);
  const int extra = dst.n();
  auto image = [&](Generator g) {
    switch (g.kind) {
      case GenKind::Psi:
        return TautPolynomial::psi(dst, static_cast<int>(g.index)) -
               TautPolynomial::boundary(dst, point_bit(static_cast<int>(g.index)) | point_bit(extra));
      case GenKind::Kappa:
        return TautPolynomial::kappa(dst, static_cast<int>(g.index)) -
               TautPolynomial(dst, Monomial(Generator::psi(extra), g.index));
      case GenKind::Boundary:
        break;
    }
    return TautPolynomial::boundary(dst, g.subset()) +
           TautPolynomial::boundary(dst, g.subset() | point_bit(extra));
  };
  TautPolynomial out(dst);
  for (const auto& [m, c] : p.terms()) {
    TautPolynomial term(dst, c);
    for (const auto& [g, e] : m.factors()) term = term * image(g).pow(e);
    out += term;
  }
  return out;
}

std::size_t off_degree_terms(const TautPolynomial& p) {
  const int d = p.context().dimension();
  return static_cast<std::size_t>(std::count_if(p.terms().begin(), p.terms().end(),
                                                [d](const auto& t) { return t.first.degree() != d; }));
}

// -------------------------------------------------------------- Integrator

IntegratorOptions IntegratorOptions::from_environment() {
  IntegratorOptions o;
  if (const char* v = std::getenv("MZERO_CACHE_BYTES"); v != nullptr && *v != '\0') {
    try {
      o.cache_bytes = static_cast<std::size_t>(std::stoull(v));
    } catch (const std::exception&) {
      throw std::invalid_argument(std::string("MZERO_CACHE_BYTES is not a byte count: ") + v);
    }
  }
  return o;
}

Integrator::Integrator(IntegratorOptions options) : options_(options) {}

std::size_t Integrator::cache_entries() const {
  std::shared_lock lock(mutex_);
  return cache_.size();
}

void Integrator::clear_cache() const {
  std::unique_lock lock(mutex_);
  cache_.clear();
  cache_bytes_used_ = 0;
}

bool Integrator::lookup(const Key& k, Rational& out) const {
  std::shared_lock lock(mutex_);
  auto it = cache_.find(k);
  if (it == cache_.end()) return false;
  out = it->second;
  return true;
}

void Integrator::store(Key k, const Rational& v) const {
  const std::size_t bytes = sizeof(Key) + sizeof(Rational) + 48 +
                            k.m.factors().size() * sizeof(Monomial::Factor);
  std::unique_lock lock(mutex_);
  if (options_.cache_bytes != 0 && cache_bytes_used_ + bytes > options_.cache_bytes) return;
  // Identical keys always map to identical values, so a lost race is harmless.
  if (cache_.try_emplace(std::move(k), v).second) cache_bytes_used_ += bytes;
}

Monomial Integrator::normalize_labels(int n, const Monomial& m) const {
  if (!options_.relabel_keys) return m;
  // Sort points by a relabeling-invariant signature; the integral is S_n
  // invariant, so any permutation gives a valid key and ties are harmless.
  std::vector<std::vector<std::uint32_t>> sig(static_cast<std::size_t>(n));
  for (int p = 1; p <= n; ++p) sig[p - 1].push_back(0);
  for (const auto& [g, e] : m.factors()) {
    if (g.kind == GenKind::Psi) {
      sig[g.index - 1][0] = e;
    } else if (g.kind == GenKind::Boundary) {
      const auto inside = static_cast<std::uint32_t>(size_of(g.subset()));
      for (int p = 1; p <= n; ++p) {
        std::uint32_t block = contains(g.subset(), p) ? inside : static_cast<std::uint32_t>(n) - inside;
        sig[p - 1].push_back((block << 16) | e);
      }
    }
  }
  for (auto& s : sig) std::sort(s.begin() + 1, s.end());
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 1);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return sig[a - 1] > sig[b - 1]; });
  std::vector<int> perm(static_cast<std::size_t>(n));
  for (int pos = 0; pos < n; ++pos) perm[order[pos] - 1] = pos + 1;
  return relabel(ModuliContext(n), m, perm);
}

Rational Integrator::integrate_monomial(const ModuliContext& ctx, const Monomial& m) const {
  validate(ctx, m);
  return integrate_impl(ctx.n(), m);
}

Rational Integrator::integrate_impl(int n, const Monomial& m) const {
  if (m.degree() != n - 3) return Rational{};
  if (n == 3) return Rational(1);
  Key key{n, normalize_labels(n, m)};
  Rational value;
  if (lookup(key, value)) return value;
  value = integrate_uncached(n, key.m);
  store(std::move(key), value);
  return value;
}

Rational Integrator::integrate_uncached(int n, const Monomial& m) const {
  const ModuliContext ctx(n);
  const Subset all = ctx.all_points();

  if (m.exponent_of(Generator::kappa(2)) != 0)
    throw UnsupportedClass("kappa2 must be rewritten in divisor classes before integration");

  for (const auto& [g, e] : m.factors()) {
    if (g.kind != GenKind::Boundary) continue;
    const Subset I = g.subset();
    for (const auto& [h, f] : m.factors())
      if (h.kind == GenKind::Boundary && crosses(I, h.subset(), all)) return Rational{};
    // One copy of Delta_I is the locus itself; the rest are normal-bundle terms.
    const Restriction r = restrict_to_boundary(ctx, I, m.without(g) * Monomial(g, e - 1));
    const int n_plus = size_of(I) + 1, n_minus = n - size_of(I) + 1;
    Rational sum;
    for (const auto& t : r.terms) {
      if (t.plus.degree() != n_plus - 3 || t.minus.degree() != n_minus - 3) continue;
      Rational left = integrate_impl(n_plus, t.plus);
      if (left.is_zero()) continue;
      sum += t.coefficient * left * integrate_impl(n_minus, t.minus);
    }
    return sum;
  }

  // No boundary divisors left: trade one kappa_1 for psi and boundary classes.
  if (const std::uint32_t e = m.exponent_of(Generator::kappa(1)); e != 0) {
    const Monomial rest = m.without(Generator::kappa(1)) * Monomial(Generator::kappa(1), e - 1);
    const TautPolynomial k1 = eliminate_kappa1(ctx);
    Rational sum;
    for (const auto& [t, c] : k1.terms()) sum += c * integrate_impl(n, rest * t);
    return sum;
  }

  // Pure psi monomial: rewrite one psi_i through boundary divisors.
  const auto& [g, e] = m.factors().front();
  const int i = static_cast<int>(g.index);
  int ab[2], found = 0;
  for (int p = 1; p <= n && found < 2; ++p)
    if (p != i) ab[found++] = p;
  const Monomial rest = m.without(g) * Monomial(g, e - 1);
  const TautPolynomial rewritten = psi_as_boundary(ctx, i, ab[0], ab[1]);
  Rational sum;
  for (const auto& [t, c] : rewritten.terms())
    sum += c * integrate_impl(n, rest * t);
  return sum;
}

Rational Integrator::integrate(const TautPolynomial& p) const {
  for (const auto& [m, c] : p.terms()) validate(p.context(), m);
  const int n = p.context().n();
  std::vector<const std::pair<const Monomial, Rational>*> work;
  work.reserve(p.size());
  for (const auto& t : p.terms())
    if (t.first.degree() == n - 3) work.push_back(&t);

  unsigned threads = options_.threads != 0 ? options_.threads : std::thread::hardware_concurrency();
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(work.size() / 64 + 1)));

  std::vector<Rational> values(work.size());
  if (threads == 1) {
    for (std::size_t k = 0; k < work.size(); ++k) values[k] = integrate_impl(n, work[k]->first);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
      std::vector<std::jthread> pool;
      for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
          try {
            for (std::size_t k; (k = next.fetch_add(1)) < work.size();)
              values[k] = integrate_impl(n, work[k]->first);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next = work.size();
          }
        });
      }
    }
    if (failure) std::rethrow_exception(failure);
  }

  Rational total;
  for (std::size_t k = 0; k < work.size(); ++k) total += work[k]->second * values[k];
  return total;
}

}  // namespace mzero
