// mzero: intersection numbers on Mbar_{0,n}, the D4 seven-point correlator and
// genus-zero reconstruction for the three D4 theories.

#include <chrono>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mzero/chiodo.hpp"
#include "mzero/frobenius.hpp"
#include "mzero/integrate.hpp"
#include "mzero/reconstruct.hpp"
#include "mzero/taut_expr.hpp"
#include "verify.hpp"

using namespace mzero;
using json = nlohmann::ordered_json;

namespace {

enum Exit { kOk = 0, kVerifyFailed = 1, kUsage = 2, kConfig = 3 };

struct Globals {
  bool json = false;
  unsigned threads = 0;
};

json rational_json(const Rational& r) { return {{"num", r.numerator_string()}, {"den", r.denominator_string()}}; }

json poly_json(const SymbolicValue& v) {
  json coeffs = json::array();
  for (const auto& c : v.coefficients()) coeffs.push_back({c.numerator_string(), c.denominator_string()});
  return {{"poly_a", coeffs}};
}

class Clock {
public:
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
  }

private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void emit(const Globals& g, json envelope, const std::vector<std::string>& warnings, const Clock& clock,
          const std::string& text) {
  if (g.json) {
    envelope["warnings"] = warnings;
    envelope["ms"] = clock.ms();
    std::cout << envelope.dump(2) << "\n";
    return;
  }
  std::cout << text;
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
}

Integrator make_engine(const Globals& g) {
  IntegratorOptions o = IntegratorOptions::from_environment();
  o.threads = g.threads;
  return Integrator(o);
}

int cmd_intersect(const Globals& g, int n, const std::string& expr) {
  Clock clock;
  if (n < 3 || n > 31) {
    std::cerr << "error: n = " << n << " is outside 3..31\n";
    return kConfig;
  }
  const ModuliContext ctx(n);
  TautPolynomial p(ctx);
  try {
    p = parse_expression(ctx, expr);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kUsage;
  }
  std::vector<std::string> warnings;
  if (std::size_t off = off_degree_terms(p); off != 0)
    warnings.push_back(std::to_string(off) + " term(s) of degree != " + std::to_string(n - 3) + " integrate to 0");
  const Integrator engine = make_engine(g);
  Rational v;
  try {
    v = engine.integrate(p);
  } catch (const UnsupportedClass& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  emit(g, {{"value", rational_json(v)}}, warnings, clock, v.to_string() + "\n");
  return kOk;
}

int cmd_seven_point(const Globals& g, const std::string& variant, bool compare) {
  Clock clock;
  LambdaOptions opts;
  if (variant == "appendix") opts.kappa2 = Kappa2Variant::Appendix;
  const Integrator engine = make_engine(g);
  const Rational v = seven_point_correlator(engine, opts);
  json env{{"value", rational_json(v)}, {"kappa2_variant", std::string(to_string(opts.kappa2))}};
  std::string text = v.to_string() + "\n";
  std::vector<std::string> warnings;
  if (compare) {
    LambdaOptions other = opts;
    other.kappa2 = opts.kappa2 == Kappa2Variant::Displayed ? Kappa2Variant::Appendix : Kappa2Variant::Displayed;
    const Rational w = seven_point_correlator(engine, other);
    env["other_variant"] = std::string(to_string(other.kappa2));
    env["other_value"] = rational_json(w);
    env["equal"] = v == w;
    text = std::string(to_string(opts.kappa2)) + ": " + v.to_string() + "\n" + std::string(to_string(other.kappa2)) +
           ": " + w.to_string() + "\nequal: " + (v == w ? "true" : "false") + "\n";
    if (v != w) warnings.push_back("the two kappa2 rewrites give different values");
  }
  emit(g, env, warnings, clock, text);
  return kOk;
}

int cmd_correlator(const Globals& g, const std::string& theory_text, const std::string& list) {
  Clock clock;
  const auto theory = parse_theory(theory_text);
  if (!theory) {
    std::cerr << "error: unknown theory '" << theory_text << "' (d4-j, d4t-gmax, saito)\n";
    return kUsage;
  }
  std::vector<Basis> ins;
  try {
    ins = parse_insertions(list);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  if (ins.size() < 3 || ins.size() > 7) {
    std::cerr << "error: need 3 to 7 insertions, got " << ins.size() << "\n";
    return kUsage;
  }
  CorrelatorTable table(*theory);
  const SymbolicValue v = table.get(ins);
  const Verdict verdict = vanishing_check(*theory, ins);

  // d4-j needs the integrated seven-point value, and only a^4-polynomials
  // specialize to rationals there.
  std::optional<Rational> special;
  std::vector<std::string> warnings;
  const auto& c = v.coefficients();
  bool quartic = true;
  for (std::size_t i = 0; i < c.size(); ++i) quartic = quartic && (i % 4 == 0 || c[i].is_zero());
  if (*theory != Theory::D4J) {
    special = specialize(v, evaluate_theory(*theory));
  } else if (v.degree() <= 0) {
    special = v.coefficient(0);
  } else if (quartic) {
    const Integrator engine = make_engine(g);
    special = specialize(v, evaluate_theory(*theory, seven_point_correlator(engine)));
  }
  if (!special) warnings.push_back("value is not rational after substituting a");

  json env{{"value", poly_json(v)}, {"symbolic", v.to_string()}, {"theory", std::string(theory_name(*theory))}};
  env["verdict"] = verdict.vanishes ? std::string(to_string(verdict.reason)) : "allowed";
  if (verdict.vanishes) env["reason"] = verdict.detail;
  env["specialized"] = special ? rational_json(*special) : json(nullptr);
  std::string text = format_insertions(ins) + " = " + v.to_string() + "\n";
  if (verdict.vanishes)
    text += "vanishes: " + std::string(to_string(verdict.reason)) + " (" + verdict.detail + ")\n";
  if (special) text += "specialized (" + std::string(theory_name(*theory)) + "): " + special->to_string() + "\n";
  emit(g, env, warnings, clock, text);
  return kOk;
}

int cmd_potential(const Globals& g) {
  Clock clock;
  CorrelatorTable table;
  const Potential p = build_potential(table);
  json terms = json::array();
  for (const auto& [m, c] : p) terms.push_back({{"monomial", format_monomial(m)}, {"exponents", m}, {"coefficient", poly_json(c)}});
  std::vector<std::string> warnings;
  const auto diff = compare_potentials(p, expected_potential());
  for (const auto& d : diff)
    warnings.push_back("coefficient of " + format_monomial(d.monomial) + " is " + d.computed.to_string() +
                       ", expected " + d.expected.to_string());
  emit(g, {{"value", terms}}, warnings, clock, format_potential(p));
  return kOk;
}

int cmd_verify(const Globals& g) {
  Clock clock;
  const Integrator engine = make_engine(g);
  auto print = [&](const CheckResult& r) {
    if (g.json) return;
    const char* tag = r.informational ? "INFO" : (r.passed ? "PASS" : "FAIL");
    std::cout << tag << "  " << r.name << ": " << r.detail << std::endl;
  };
  const auto results = run_verification(engine, print);
  std::vector<std::string> failed;
  json checks = json::array();
  for (const auto& r : results) {
    checks.push_back({{"name", r.name}, {"passed", r.passed}, {"informational", r.informational}, {"detail", r.detail}});
    if (!r.passed && !r.informational) failed.push_back(r.name);
  }
  std::string text = failed.empty() ? "all checks passed\n" : "failed:";
  for (const auto& f : failed) text += " " + f;
  if (!failed.empty()) text += "\n";
  emit(g, {{"value", checks}, {"failed", failed}}, {}, clock, text);
  return failed.empty() ? kOk : kVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Intersection numbers on Mbar_{0,n} and D4 genus-zero correlators"};
  app.fallthrough();
  app.require_subcommand(1);
  Globals g;
  app.add_flag("--json", g.json, "Print a JSON envelope");
  app.add_option("--threads", g.threads, "Worker threads for integration (0 = all cores)");

  int n = 0;
  std::string expr;
  auto* intersect = app.add_subcommand("intersect", "Integrate a tautological expression over Mbar_{0,n}");
  intersect->add_option("-n", n, "Number of marked points")->required();
  intersect->add_option("expr", expr, "Expression in psi<i>, kappa1, kappa2, b{...}")->required();

  std::string variant = "displayed";
  bool compare = false;
  auto* seven = app.add_subcommand("seven-point", "D4 <J> seven-point correlator <X2,...,X2>");
  seven->add_option("--kappa2-variant", variant, "kappa2 rewrite")
      ->check(CLI::IsMember({"displayed", "appendix"}));
  seven->add_flag("--compare", compare, "Also compute the other kappa2 rewrite");

  std::string theory, list;
  auto* corr = app.add_subcommand("correlator", "Genus-zero primary correlator");
  corr->add_option("--theory", theory, "d4-j, d4t-gmax or saito")->required();
  corr->add_option("insertions", list, "Comma list over 1, X, Y, X2")->required();

  auto* potential = app.add_subcommand("potential", "Coefficient table of the genus-zero potential");
  auto* verify = app.add_subcommand("verify", "Run all checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*intersect) return cmd_intersect(g, n, expr);
    if (*seven) return cmd_seven_point(g, variant, compare);
    if (*corr) return cmd_correlator(g, theory, list);
    if (*potential) return cmd_potential(g);
    if (*verify) return cmd_verify(g);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kVerifyFailed;
  }
  return kUsage;
}
