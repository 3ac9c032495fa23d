#include <cctype>

#include "mzero/taut_expr.hpp"

namespace mzero {

ParseError::ParseError(const std::string& what, std::size_t position)
    : std::runtime_error(what + " at position " + std::to_string(position)), position_(position) {}

namespace {

class Parser {
public:
  Parser(const ModuliContext& ctx, std::string_view text) : ctx_(ctx), text_(text) {}

  TautPolynomial parse() {
    TautPolynomial p = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return p;
  }

private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool peek(char c) {
    skip_ws();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  bool accept(char c) {
    if (!peek(c)) return false;
    ++pos_;
    return true;
  }

  bool accept_word(std::string_view w) {
    skip_ws();
    if (text_.substr(pos_, w.size()) != w) return false;
    pos_ += w.size();
    return true;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  bool peek_digit() {
    skip_ws();
    return pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]));
  }

  std::string digits() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected a number");
    return std::string(text_.substr(start, pos_ - start));
  }

  long small_int() {
    std::size_t start = pos_;
    std::string d = digits();
    if (d.size() > 9) {
      pos_ = start;
      fail("integer too large");
    }
    return std::stol(d);
  }

  TautPolynomial expr() {
    bool negate = accept('-');
    TautPolynomial acc = term();
    if (negate) acc = -acc;
    for (;;) {
      if (accept('+')) {
        acc += term();
      } else if (accept('-')) {
        acc -= term();
      } else {
        return acc;
      }
    }
  }

  TautPolynomial term() {
    TautPolynomial acc(ctx_, Rational(1));
    if (peek_digit()) {
      std::string num = digits();
      std::string lit = num;
      if (accept('/')) lit += "/" + digits();
      Rational r = Rational::parse(lit);
      if (!accept('*')) return TautPolynomial(ctx_, r);
      acc *= r;
    }
    acc = acc * factor();
    while (accept('*')) acc = acc * factor();
    return acc;
  }

  unsigned exponent() {
    if (!accept('^')) return 1;
    std::size_t at = pos_;
    long e = small_int();
    if (e < 1) {
      pos_ = at;
      fail("exponent must be a positive integer");
    }
    return static_cast<unsigned>(e);
  }

  int point_index() {
    skip_ws();
    std::size_t at = pos_;
    long i = small_int();
    if (i < 1 || i > ctx_.n()) {
      pos_ = at;
      fail("marked point " + std::to_string(i) + " outside 1.." + std::to_string(ctx_.n()));
    }
    return static_cast<int>(i);
  }

  TautPolynomial factor() {
    if (accept('(')) {
      TautPolynomial inner = expr();
      expect(')');
      return inner.pow(exponent());
    }
    skip_ws();
    std::size_t at = pos_;
    Generator g{};
    if (accept_word("psi")) {
      g = Generator::psi(point_index());
    } else if (accept_word("kappa")) {
      std::size_t kat = pos_;
      long a = small_int();
      if (a != 1 && a != 2) {
        pos_ = kat;
        fail("only kappa1 and kappa2 are supported");
      }
      g = Generator::kappa(static_cast<int>(a));
    } else if (accept_word("b")) {
      expect('{');
      Subset s = 0;
      do {
        s |= point_bit(point_index());
      } while (accept(','));
      expect('}');
      try {
        g = canonicalize_boundary(ctx_, s);
      } catch (const TautError& e) {
        pos_ = at;
        fail(e.what());
      }
    } else {
      fail("expected psi<i>, kappa<a>, b{...}, a number or '('");
    }
    return TautPolynomial(ctx_, Monomial(g, exponent()));
  }

  const ModuliContext& ctx_;
  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

TautPolynomial parse_expression(const ModuliContext& ctx, std::string_view text) {
  return Parser(ctx, text).parse();
}

}  // namespace mzero
