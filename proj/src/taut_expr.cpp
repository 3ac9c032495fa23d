#include "mzero/taut_expr.hpp"

#include <algorithm>
#include <sstream>

namespace mzero {

Subset make_subset(std::initializer_list<int> points) {
  Subset s = 0;
  for (int p : points) {
    if (p < 1 || p > kMaxPoints) throw TautError("point index out of range: " + std::to_string(p));
    s |= point_bit(p);
  }
  return s;
}

std::vector<int> elements(Subset s) {
  std::vector<int> out;
  out.reserve(size_of(s));
  while (s != 0) {
    out.push_back(std::countr_zero(s) + 1);
    s &= s - 1;
  }
  return out;
}

std::string subset_to_string(Subset s) {
  std::string out = "{";
  bool first = true;
  for (int p : elements(s)) {
    if (!first) out += ",";
    out += std::to_string(p);
    first = false;
  }
  return out + "}";
}

ModuliContext::ModuliContext(int n) : n_(n) {
  if (n < 3 || n > kMaxPoints)
    throw TautError("number of marked points must lie in 3.." + std::to_string(kMaxPoints) +
                    ", got " + std::to_string(n));
}

std::vector<Subset> ModuliContext::boundary_indices() const {
  std::vector<Subset> out;
  // Enumerate subsets of {2..n}, then add point 1.
  const Subset rest = full_set(n_) & ~point_bit(1);
  for (Subset t = rest;; t = (t - 1) & rest) {
    Subset I = t | point_bit(1);
    if (size_of(I) >= 2 && size_of(I) <= n_ - 2) out.push_back(I);
    if (t == 0) break;
  }
  std::sort(out.begin(), out.end(),
            [](Subset a, Subset b) { return Generator::boundary(a) < Generator::boundary(b); });
  return out;
}

std::strong_ordering operator<=>(const Generator& a, const Generator& b) {
  if (a.kind != b.kind) return a.kind <=> b.kind;
  if (a.kind != GenKind::Boundary) return a.index <=> b.index;
  if (a.index == b.index) return std::strong_ordering::equal;
  int sa = size_of(a.index), sb = size_of(b.index);
  if (sa != sb) return sa <=> sb;
  // Same size: lexicographic on sorted element lists is decided by the
  // smallest point in the symmetric difference.
  Subset diff = a.index ^ b.index;
  Subset lowest = diff & (~diff + 1);
  return (a.index & lowest) ? std::strong_ordering::less : std::strong_ordering::greater;
}

Generator canonicalize_boundary(const ModuliContext& ctx, Subset I) {
  const Subset all = ctx.all_points();
  if ((I & ~all) != 0)
    throw TautError("boundary subset " + subset_to_string(I) + " has points outside 1.." +
                    std::to_string(ctx.n()));
  int k = size_of(I);
  if (k < 2 || k > ctx.n() - 2)
    throw TautError("unstable boundary subset " + subset_to_string(I) + " on Mbar_{0," +
                    std::to_string(ctx.n()) + "}: need 2 <= |I| <= n-2");
  return Generator::boundary(contains(I, 1) ? I : (all & ~I));
}

// ---------------------------------------------------------------- Monomial

Monomial::Monomial(Generator g, std::uint32_t exponent) {
  if (exponent > 0) {
    factors_.emplace_back(g, exponent);
    degree_ = g.degree() * static_cast<int>(exponent);
  }
}

Monomial Monomial::from_factors(std::vector<Factor> factors) {
  std::sort(factors.begin(), factors.end(),
            [](const Factor& x, const Factor& y) { return x.first < y.first; });
  Monomial m;
  for (const auto& [g, e] : factors) {
    if (e == 0) continue;
    if (!m.factors_.empty() && m.factors_.back().first == g)
      m.factors_.back().second += e;
    else
      m.factors_.emplace_back(g, e);
    m.degree_ += g.degree() * static_cast<int>(e);
  }
  return m;
}

std::uint32_t Monomial::exponent_of(Generator g) const {
  auto it = std::lower_bound(factors_.begin(), factors_.end(), g,
                             [](const Factor& f, const Generator& x) { return f.first < x; });
  return (it != factors_.end() && it->first == g) ? it->second : 0;
}

bool Monomial::has_kind(GenKind k) const {
  return std::any_of(factors_.begin(), factors_.end(),
                     [k](const Factor& f) { return f.first.kind == k; });
}

Monomial Monomial::without(Generator g) const {
  Monomial m;
  for (const auto& f : factors_) {
    if (f.first == g) continue;
    m.factors_.push_back(f);
    m.degree_ += f.first.degree() * static_cast<int>(f.second);
  }
  return m;
}

Monomial operator*(const Monomial& a, const Monomial& b) {
  Monomial m;
  m.factors_.reserve(a.factors_.size() + b.factors_.size());
  auto i = a.factors_.begin(), j = b.factors_.begin();
  while (i != a.factors_.end() || j != b.factors_.end()) {
    if (j == b.factors_.end() || (i != a.factors_.end() && i->first < j->first)) {
      m.factors_.push_back(*i++);
    } else if (i == a.factors_.end() || j->first < i->first) {
      m.factors_.push_back(*j++);
    } else {
      m.factors_.emplace_back(i->first, i->second + j->second);
      ++i;
      ++j;
    }
  }
  m.degree_ = a.degree_ + b.degree_;
  return m;
}

std::strong_ordering operator<=>(const Monomial& a, const Monomial& b) {
  const std::size_t n = std::min(a.factors_.size(), b.factors_.size());
  for (std::size_t k = 0; k < n; ++k) {
    if (auto c = a.factors_[k].first <=> b.factors_[k].first; c != 0) return c;
    if (auto c = a.factors_[k].second <=> b.factors_[k].second; c != 0) return c;
  }
  return a.factors_.size() <=> b.factors_.size();
}

std::size_t Monomial::hash() const {
  std::size_t h = 0xcbf29ce484222325ULL;
  for (const auto& [g, e] : factors_) {
    std::uint64_t word = (std::uint64_t{g.index} << 16) ^ (std::uint64_t(g.kind) << 8) ^ e;
    h ^= word + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

void validate(const ModuliContext& ctx, const Monomial& m) {
  for (const auto& [g, e] : m.factors()) {
    switch (g.kind) {
      case GenKind::Psi:
        if (g.index < 1 || static_cast<int>(g.index) > ctx.n())
          throw TautError("psi index " + std::to_string(g.index) + " outside 1.." +
                          std::to_string(ctx.n()));
        break;
      case GenKind::Kappa:
        if (g.index != 1 && g.index != 2)
          throw TautError("only kappa1 and kappa2 are supported, got kappa" +
                          std::to_string(g.index));
        break;
      case GenKind::Boundary:
        if (canonicalize_boundary(ctx, g.subset()) != g)
          throw TautError("boundary subset " + subset_to_string(g.subset()) + " is not canonical");
        break;
    }
  }
}

// ---------------------------------------------------------- TautPolynomial

TautPolynomial::TautPolynomial(ModuliContext ctx, Rational constant) : ctx_(ctx) {
  add_term(Monomial{}, constant);
}

TautPolynomial::TautPolynomial(ModuliContext ctx, const Monomial& m, Rational coeff) : ctx_(ctx) {
  validate(ctx_, m);
  add_term(m, coeff);
}

TautPolynomial TautPolynomial::psi(ModuliContext ctx, int i) {
  return TautPolynomial(ctx, Monomial(Generator::psi(i)));
}

TautPolynomial TautPolynomial::kappa(ModuliContext ctx, int a) {
  return TautPolynomial(ctx, Monomial(Generator::kappa(a)));
}

TautPolynomial TautPolynomial::boundary(ModuliContext ctx, Subset I) {
  return TautPolynomial(ctx, Monomial(canonicalize_boundary(ctx, I)));
}

Rational TautPolynomial::coefficient(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Rational{} : it->second;
}

void TautPolynomial::add_term(const Monomial& m, const Rational& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

bool TautPolynomial::is_homogeneous(int degree) const {
  return std::all_of(terms_.begin(), terms_.end(),
                     [degree](const auto& t) { return t.first.degree() == degree; });
}

int TautPolynomial::max_degree() const {
  int d = -1;
  for (const auto& [m, c] : terms_) d = std::max(d, m.degree());
  return d;
}

void TautPolynomial::require_same_context(const TautPolynomial& o) const {
  if (!(ctx_ == o.ctx_))
    throw TautError("polynomials live on different moduli spaces (n=" + std::to_string(ctx_.n()) +
                    " vs n=" + std::to_string(o.ctx_.n()) + ")");
}

TautPolynomial& TautPolynomial::operator+=(const TautPolynomial& o) {
  require_same_context(o);
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

TautPolynomial& TautPolynomial::operator-=(const TautPolynomial& o) {
  require_same_context(o);
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

TautPolynomial& TautPolynomial::operator*=(const Rational& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, coeff] : terms_) coeff *= c;
  return *this;
}

TautPolynomial operator*(const TautPolynomial& a, const TautPolynomial& b) {
  a.require_same_context(b);
  TautPolynomial out(a.ctx_);
  for (const auto& [ma, ca] : a.terms_)
    for (const auto& [mb, cb] : b.terms_) out.add_term(ma * mb, ca * cb);
  return out;
}

TautPolynomial TautPolynomial::operator-() const {
  TautPolynomial out = *this;
  for (auto& [m, c] : out.terms_) c = -c;
  return out;
}

TautPolynomial TautPolynomial::pow(unsigned e) const {
  TautPolynomial result(ctx_, Rational(1));
  TautPolynomial base = *this;
  while (e > 0) {
    if (e & 1u) result = result * base;
    e >>= 1;
    if (e > 0) base = base * base;
  }
  return result;
}

TautPolynomial TautPolynomial::substitute(Generator g, const TautPolynomial& replacement) const {
  require_same_context(replacement);
  TautPolynomial out(ctx_);
  std::vector<TautPolynomial> powers{TautPolynomial(ctx_, Rational(1))};
  for (const auto& [m, c] : terms_) {
    std::uint32_t e = m.exponent_of(g);
    if (e == 0) {
      out.add_term(m, c);
      continue;
    }
    while (powers.size() <= e) powers.push_back(powers.back() * replacement);
    Monomial rest = m.without(g);
    for (const auto& [mr, cr] : powers[e].terms_) out.add_term(rest * mr, c * cr);
  }
  return out;
}

TautPolynomial multiply(const ModuliContext& ctx, const Monomial& m, const TautPolynomial& p) {
  TautPolynomial out(ctx);
  for (const auto& [mp, c] : p.terms()) out.add_term(m * mp, c);
  return out;
}

Monomial relabel(const ModuliContext& ctx, const Monomial& m, std::span<const int> perm) {
  if (static_cast<int>(perm.size()) != ctx.n()) throw TautError("relabeling has wrong length");
  std::vector<Monomial::Factor> out;
  out.reserve(m.factors().size());
  for (const auto& [g, e] : m.factors()) {
    switch (g.kind) {
      case GenKind::Psi:
        out.emplace_back(Generator::psi(perm[g.index - 1]), e);
        break;
      case GenKind::Kappa:
        out.emplace_back(g, e);
        break;
      case GenKind::Boundary: {
        Subset image = 0;
        for (Subset s = g.subset(); s != 0; s &= s - 1)
          image |= point_bit(perm[std::countr_zero(s)]);
        out.emplace_back(canonicalize_boundary(ctx, image), e);
        break;
      }
    }
  }
  return Monomial::from_factors(std::move(out));
}

TautPolynomial relabel(const TautPolynomial& p, std::span<const int> perm) {
  TautPolynomial out(p.context());
  for (const auto& [m, c] : p.terms()) out.add_term(relabel(p.context(), m, perm), c);
  return out;
}

// ------------------------------------------------------------------ format

std::string format(const Monomial& m) {
  std::string out;
  for (const auto& [g, e] : m.factors()) {
    if (!out.empty()) out += "*";
    switch (g.kind) {
      case GenKind::Psi: out += "psi" + std::to_string(g.index); break;
      case GenKind::Kappa: out += "kappa" + std::to_string(g.index); break;
      case GenKind::Boundary: out += "b" + subset_to_string(g.subset()); break;
    }
    if (e != 1) out += "^" + std::to_string(e);
  }
  return out.empty() ? "1" : out;
}

std::string format(const TautPolynomial& p) {
  if (p.is_zero()) return "0";
  std::string out;
  for (const auto& [m, c] : p.terms()) {
    Rational mag = c.sign() < 0 ? -c : c;
    if (out.empty())
      out += c.sign() < 0 ? "-" : "";
    else
      out += c.sign() < 0 ? " - " : " + ";
    if (m.is_one()) {
      out += mag.to_string();
    } else {
      if (mag != Rational(1)) out += mag.to_string() + "*";
      out += format(m);
    }
  }
  return out;
}

}  // namespace mzero
