#include "mzero/frobenius.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

namespace mzero {

std::string_view theory_name(Theory t) {
  switch (t) {
    case Theory::D4J: return "d4-j";
    case Theory::D4TGmax: return "d4t-gmax";
    case Theory::SaitoD4: return "saito";
  }
  return "?";
}

std::optional<Theory> parse_theory(std::string_view text) {
  std::string s(text);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  for (Theory t : all_theories)
    if (s == theory_name(t)) return t;
  if (s == "saito-d4") return Theory::SaitoD4;
  return std::nullopt;
}

std::string_view basis_label(Basis b) {
  static constexpr std::string_view names[] = {"1", "X", "Y", "X2"};
  return names[static_cast<int>(b)];
}

std::optional<Basis> parse_basis(std::string_view text) {
  if (text == "1") return Basis::One;
  if (text == "X" || text == "x") return Basis::X;
  if (text == "Y" || text == "y") return Basis::Y;
  if (text == "X2" || text == "X^2" || text == "x2" || text == "x^2") return Basis::X2;
  return std::nullopt;
}

std::vector<Basis> parse_insertions(std::string_view text) {
  std::vector<Basis> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find(',', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view tok = text.substr(start, end - start);
    while (!tok.empty() && std::isspace(static_cast<unsigned char>(tok.front()))) tok.remove_prefix(1);
    while (!tok.empty() && std::isspace(static_cast<unsigned char>(tok.back()))) tok.remove_suffix(1);
    auto b = parse_basis(tok);
    if (!b) throw std::invalid_argument("unknown insertion '" + std::string(tok) + "' (use 1, X, Y, X2)");
    out.push_back(*b);
    start = end + 1;
  }
  return out;
}

std::string format_insertions(const std::vector<Basis>& ins) {
  std::string s = "<";
  for (std::size_t i = 0; i < ins.size(); ++i) {
    if (i) s += ",";
    s += basis_label(ins[i]);
  }
  return s + ">";
}

int degree_thirds(Basis b) {
  static constexpr int d[] = {0, 1, 1, 2};
  return d[static_cast<int>(b)];
}

int GroupElement::fixed_count() const {
  return static_cast<int>(std::count_if(theta.begin(), theta.end(), [](const Rational& t) { return t.is_zero(); }));
}

void GroupElement::validate() const {
  if (order < 1) throw FrobeniusError("group order must be positive");
  for (const auto& t : theta) {
    if (t.sign() < 0 || !(t < Rational(1))) throw FrobeniusError("phase " + t.to_string() + " outside [0,1)");
    if (!(t * Rational(order)).is_integer())
      throw FrobeniusError("phase " + t.to_string() + " incompatible with order " + std::to_string(order));
  }
}

GroupElement power(const GroupElement& g, int k) {
  GroupElement out{{}, g.order};
  for (const auto& t : g.theta) out.theta.push_back((t * Rational(k)).fractional_part());
  return out;
}

Rational central_charge(const std::vector<Rational>& q) {
  Rational c;
  for (const auto& qi : q) c += Rational(1) - Rational(2) * qi;
  return c;
}

Rational central_charge(const GroupElement& g, const std::vector<Rational>& q) {
  if (g.theta.size() != q.size()) throw FrobeniusError("phase and weight counts differ");
  Rational c;
  for (std::size_t i = 0; i < q.size(); ++i)
    if (g.theta[i].is_zero()) c += Rational(1) - Rational(2) * q[i];
  return c;
}

DegreeShiftForms degree_shift_forms(const GroupElement& g, const std::vector<Rational>& q) {
  if (g.theta.size() != q.size()) throw FrobeniusError("phase and weight counts differ");
  const Rational N(g.fixed_count());
  DegreeShiftForms f;
  f.from_total_chat = (central_charge(q) - N) / Rational(2);
  f.from_sector_chat = (central_charge(g, q) - N) / Rational(2);
  for (std::size_t i = 0; i < q.size(); ++i) {
    f.from_phases += g.theta[i] - q[i];
    if (g.theta[i].is_zero()) continue;
    f.from_total_chat += g.theta[i] - Rational(1, 2);
    f.from_sector_chat += g.theta[i] - q[i];
  }
  return f;
}

Rational degree_shift(const GroupElement& g, const std::vector<Rational>& q) {
  const DegreeShiftForms f = degree_shift_forms(g, q);
  if (f.from_phases != f.from_total_chat || f.from_phases != f.from_sector_chat)
    throw std::logic_error("degree shift formulas disagree");
  return f.from_phases;
}

namespace {

using Matrix = std::array<std::array<Rational, 4>, 4>;

Matrix standard_pairing() {
  Matrix m;
  m[0][3] = m[3][0] = Rational(1, 6);
  m[1][1] = Rational(1, 6);
  m[2][2] = Rational(-1, 2);
  return m;
}

// The D4 <J> primitive classes are x e0 and y e0 with pairings 1/6 and -1/2;
// the chosen identification sends X to y e0 / sqrt(-3) and Y to sqrt(-3) x e0,
// so only the squares (-1/3 and -3) of the scalings enter.
Matrix transported_d4j_pairing() {
  const Rational xe0_xe0(1, 6), ye0_ye0(-1, 2);
  Matrix m;
  m[0][3] = m[3][0] = Rational(1, 6);
  m[1][1] = ye0_ye0 / Rational(-3);
  m[2][2] = Rational(-3) * xe0_xe0;
  return m;
}

TheorySpec make_spec(Theory t) {
  TheorySpec s;
  s.id = t;
  s.name = std::string(theory_name(t));
  switch (t) {
    case Theory::D4J:
      s.a_model = true;
      s.q = {Rational(1, 3), Rational(1, 3)};
      s.generator = {{Rational(1, 3), Rational(1, 3)}, 3};
      s.sector_power = {1, 0, 0, 2};
      s.eta = transported_d4j_pairing();
      break;
    case Theory::D4TGmax:
      s.a_model = true;
      s.q = {Rational(1, 6), Rational(1, 2)};
      s.generator = {{Rational(1, 6), Rational(1, 2)}, 6};
      s.sector_power = {1, 3, 0, 5};
      s.eta = standard_pairing();
      break;
    case Theory::SaitoD4:
      s.q = {Rational(1, 3), Rational(1, 3)};
      s.eta = standard_pairing();
      break;
  }
  s.c_hat = central_charge(s.q);
  return s;
}

void require_same(const SectorElement& u, const SectorElement& v) {
  if (u.theory != v.theory)
    throw FrobeniusError("elements belong to different theories: " + std::string(theory_name(u.theory)) +
                         " and " + std::string(theory_name(v.theory)));
}

}  // namespace

const TheorySpec& theory_spec(Theory t) {
  static const std::array<TheorySpec, 3> specs{make_spec(Theory::D4J), make_spec(Theory::D4TGmax),
                                               make_spec(Theory::SaitoD4)};
  return specs[static_cast<int>(t)];
}

GroupElement sector_of(const TheorySpec& spec, Basis b) {
  if (!spec.a_model) throw FrobeniusError(spec.name + " has no group sectors");
  return power(spec.generator, spec.sector_power[static_cast<int>(b)]);
}

Rational sector_degree(const TheorySpec& spec, Basis b) {
  const GroupElement g = sector_of(spec, b);
  return (Rational(g.fixed_count()) + Rational(2) * degree_shift(g, spec.q)) / Rational(2);
}

SectorElement SectorElement::basis(Theory t, Basis b, Rational coeff) {
  SectorElement e;
  e.theory = t;
  e.c[static_cast<int>(b)] = std::move(coeff);
  return e;
}

SectorElement& SectorElement::operator+=(const SectorElement& o) {
  require_same(*this, o);
  for (int i = 0; i < 4; ++i) c[i] += o.c[i];
  return *this;
}

SectorElement operator*(const Rational& s, SectorElement a) {
  for (auto& x : a.c) x *= s;
  return a;
}

bool SectorElement::is_zero() const {
  return std::all_of(c.begin(), c.end(), [](const Rational& x) { return x.is_zero(); });
}

std::string SectorElement::to_string() const {
  std::string s;
  for (int i = 0; i < 4; ++i) {
    if (c[i].is_zero()) continue;
    if (!s.empty()) s += c[i].sign() < 0 ? " - " : " + ";
    else if (c[i].sign() < 0) s += "-";
    const Rational mag = c[i].sign() < 0 ? -c[i] : c[i];
    if (i == 0) {
      s += mag.to_string();
    } else {
      if (mag != Rational(1)) s += mag.to_string() + "*";
      s += basis_label(static_cast<Basis>(i));
    }
  }
  return s.empty() ? "0" : s;
}

SectorElement frobenius_product(const SectorElement& u, const SectorElement& v) {
  require_same(u, v);
  // table[i][j] = (coefficient, basis index) of e_i * e_j
  static const std::array<std::array<std::pair<Rational, int>, 4>, 4> table = [] {
    std::array<std::array<std::pair<Rational, int>, 4>, 4> t;
    for (auto& row : t) row.fill({Rational(0), 0});
    for (int i = 0; i < 4; ++i) t[0][i] = t[i][0] = {Rational(1), i};
    t[1][1] = {Rational(1), 3};
    t[2][2] = {Rational(-3), 3};
    return t;
  }();
  SectorElement out;
  out.theory = u.theory;
  for (int i = 0; i < 4; ++i) {
    if (u.c[i].is_zero()) continue;
    for (int j = 0; j < 4; ++j) {
      const auto& [coef, k] = table[i][j];
      if (!coef.is_zero() && !v.c[j].is_zero()) out.c[k] += coef * u.c[i] * v.c[j];
    }
  }
  return out;
}

Rational pairing(const SectorElement& u, const SectorElement& v) {
  require_same(u, v);
  const auto& eta = theory_spec(u.theory).eta;
  Rational s;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (!eta[i][j].is_zero()) s += u.c[i] * eta[i][j] * v.c[j];
  return s;
}

std::array<SectorElement, 4> dual_basis(Theory t) {
  const auto& eta = theory_spec(t).eta;
  // eta is block anti-diagonal on {1, X^2} and diagonal on {X, Y}.
  std::array<SectorElement, 4> d;
  d[0] = SectorElement::basis(t, Basis::X2, Rational(1) / eta[0][3]);
  d[1] = SectorElement::basis(t, Basis::X, Rational(1) / eta[1][1]);
  d[2] = SectorElement::basis(t, Basis::Y, Rational(1) / eta[2][2]);
  d[3] = SectorElement::basis(t, Basis::One, Rational(1) / eta[3][0]);
  return d;
}

std::vector<Rational> line_bundle_degrees(const TheorySpec& spec, int genus,
                                          const std::vector<GroupElement>& insertions) {
  if (!spec.a_model) throw FrobeniusError(spec.name + " has no W-structure line bundles");
  const Rational base(2 * genus - 2 + static_cast<long>(insertions.size()));
  std::vector<Rational> out;
  for (std::size_t j = 0; j < spec.q.size(); ++j) {
    Rational d = spec.q[j] * base;
    for (const auto& g : insertions) {
      if (g.theta.size() != spec.q.size()) throw FrobeniusError("phase and weight counts differ");
      d -= g.theta[j];
    }
    out.push_back(d);
  }
  return out;
}

std::vector<Rational> line_bundle_degrees(const TheorySpec& spec, int genus, const std::vector<Basis>& insertions) {
  std::vector<GroupElement> g;
  for (Basis b : insertions) g.push_back(sector_of(spec, b));
  return line_bundle_degrees(spec, genus, g);
}

std::string_view to_string(VanishReason r) {
  switch (r) {
    case VanishReason::None: return "allowed";
    case VanishReason::Degree: return "degree";
    case VanishReason::Identity: return "identity";
    case VanishReason::OddY: return "odd-Y";
    case VanishReason::NonIntegral: return "non-integral line bundle degree";
  }
  return "?";
}

Verdict selection_rules(const std::vector<Basis>& insertions) {
  const int k = static_cast<int>(insertions.size());
  if (k < 3) return {true, VanishReason::Degree, "fewer than three insertions"};
  int thirds = 0;
  for (Basis b : insertions) thirds += degree_thirds(b);
  if (thirds != 3 * k - 7) {
    return {true, VanishReason::Degree,
            "degree sum " + Rational(thirds, 3).to_string() + " != " + Rational(3 * k - 7, 3).to_string()};
  }
  if (k != 3 && std::find(insertions.begin(), insertions.end(), Basis::One) != insertions.end())
    return {true, VanishReason::Identity, "identity insertion with k = " + std::to_string(k)};
  return {};
}

Verdict vanishing_check(Theory t, const std::vector<Basis>& insertions) {
  Verdict v = selection_rules(insertions);
  if (v.vanishes) return v;
  if (t == Theory::D4J) {
    const auto ys = std::count(insertions.begin(), insertions.end(), Basis::Y);
    if (ys % 2 != 0) return {true, VanishReason::OddY, std::to_string(ys) + " Y insertions"};
  }
  if (t == Theory::D4TGmax) {
    const auto& spec = theory_spec(t);
    const auto degs = line_bundle_degrees(spec, 0, insertions);
    static constexpr const char* var[] = {"x", "y"};
    for (std::size_t j = 0; j < degs.size(); ++j)
      if (!degs[j].is_integer())
        return {true, VanishReason::NonIntegral, std::string("deg L_") + var[j] + " = " + degs[j].to_string()};
  }
  return v;
}

std::vector<std::vector<Basis>> multisets(int min_k, int max_k) {
  std::vector<std::vector<Basis>> out;
  std::vector<Basis> cur;
  std::function<void(int, int)> rec = [&](int start, int left) {
    if (left == 0) {
      out.push_back(cur);
      return;
    }
    for (int b = start; b < 4; ++b) {
      cur.push_back(static_cast<Basis>(b));
      rec(b, left - 1);
      cur.pop_back();
    }
  };
  for (int k = min_k; k <= max_k; ++k) rec(0, k);
  return out;
}

std::vector<std::vector<Basis>> surviving_correlators(int max_k) {
  std::vector<std::vector<Basis>> out;
  for (auto& m : multisets(3, max_k))
    if (!selection_rules(m).vanishes) out.push_back(std::move(m));
  return out;
}

}  // namespace mzero
