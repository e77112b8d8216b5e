#include "aim/numcore/parse.hpp"

#include <cctype>

namespace aim::numcore {

namespace {

class Parser {
 public:
  Parser(std::string_view text, ParseMode mode, unsigned bits) : s_(text), mode_(mode), bits_(bits) {}

  ParamRatFun run() {
    skip();
    if (pos_ == s_.size()) throw ParseError("empty expression", pos_);
    ParamRatFun r = expr();
    skip();
    if (pos_ != s_.size()) throw ParseError(std::string("unexpected '") + s_[pos_] + "'", pos_);
    return r;
  }

 private:
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!eat(c)) throw ParseError(std::string("expected '") + c + "'", pos_);
  }

  ParamRatFun expr() {
    ParamRatFun acc = term();
    for (;;) {
      if (eat('+')) {
        acc += term();
      } else if (eat('-')) {
        acc -= term();
      } else {
        return acc;
      }
    }
  }

  ParamRatFun term() {
    ParamRatFun acc = factor();
    for (;;) {
      if (eat('*')) {
        acc *= factor();
      } else if (eat('/')) {
        const std::size_t at = pos_;
        ParamRatFun d = factor();
        if (d.is_zero()) throw ParseError("division by zero", at);
        if (mode_ == ParseMode::eigen && d.has_E()) throw ParseError("E may only appear polynomially", at);
        acc /= d;
      } else {
        return acc;
      }
    }
  }

  ParamRatFun factor() {
    bool negate = false;
    for (;;) {
      if (eat('-')) {
        negate = !negate;
      } else if (!eat('+')) {
        break;
      }
    }
    ParamRatFun b = base();
    if (eat('^')) {
      skip();
      const std::size_t at = pos_;
      const long k = integer_exponent();
      if (k < 0 && b.is_zero()) throw ParseError("zero to a negative power", at);
      if (k < 0 && mode_ == ParseMode::eigen && b.has_E()) throw ParseError("E may only appear polynomially", at);
      b = b.pow(k);
    }
    return negate ? -b : b;
  }

  long integer_exponent() {
    bool paren = eat('(');
    bool neg = false;
    if (eat('-')) {
      neg = true;
    } else {
      eat('+');
    }
    skip();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) throw ParseError("expected integer exponent", pos_);
    if (pos_ - start > 6) throw ParseError("exponent too large", start);
    long k = std::stol(std::string(s_.substr(start, pos_ - start)));
    if (paren) expect(')');
    return neg ? -k : k;
  }

  ParamRatFun base() {
    skip();
    if (pos_ >= s_.size()) throw ParseError("unexpected end of expression", pos_);
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (c == '(') {
      ++pos_;
      ParamRatFun r = expr();
      expect(')');
      return r;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      const std::string id(s_.substr(start, pos_ - start));
      if (id == "x") return ParamRatFun::x();
      if (id == "E") {
        if (mode_ == ParseMode::plain) throw ParseError("symbol E not allowed here", start);
        return ParamRatFun::E();
      }
      if (id == "i") return ParamRatFun(BigScalar::imaginary_unit());
      if (id == "pi") return ParamRatFun(BigScalar::pi(bits_));
      if (id == "cos" || id == "sin" || id == "sqrt" || id == "exp") {
        expect('(');
        const std::size_t arg_at = pos_;
        ParamRatFun arg = expr();
        expect(')');
        if (!arg.is_constant()) throw ParseError(id + " of a non-constant argument", arg_at);
        const BigScalar v = arg.constant_value();
        if (id == "cos") return ParamRatFun(numcore::cos(v, bits_));
        if (id == "sin") return ParamRatFun(numcore::sin(v, bits_));
        if (id == "sqrt") return ParamRatFun(numcore::sqrt(v, bits_));
        return ParamRatFun(numcore::exp(v, bits_));
      }
      throw ParseError("unknown identifier '" + id + "'", start);
    }
    throw ParseError(std::string("unexpected '") + c + "'", pos_);
  }

  ParamRatFun number() {
    const std::size_t start = pos_;
    std::string digits;
    long scale = 0;
    bool any = false;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      digits += s_[pos_++];
      any = true;
    }
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
        digits += s_[pos_++];
        --scale;
        any = true;
      }
    }
    if (!any) throw ParseError("malformed number", start);
    // Exponent part only when followed by a digit, so "2e" never swallows text.
    if (pos_ < s_.size() && s_[pos_] == 'e') {
      std::size_t p = pos_ + 1;
      bool neg = false;
      if (p < s_.size() && (s_[p] == '+' || s_[p] == '-')) neg = s_[p++] == '-';
      const std::size_t ds = p;
      while (p < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p]))) ++p;
      if (p > ds) {
        if (p - ds > 6) throw ParseError("exponent too large", ds);
        const long e = std::stol(std::string(s_.substr(ds, p - ds)));
        scale += neg ? -e : e;
        pos_ = p;
      }
    }
    Rational q{Integer(digits)};
    Integer ten_pow = boost::multiprecision::pow(Integer(10), static_cast<unsigned>(scale < 0 ? -scale : scale));
    if (scale < 0) {
      q /= Rational(ten_pow);
    } else {
      q *= Rational(ten_pow);
    }
    return ParamRatFun(BigScalar(q));
  }

  std::string_view s_;
  ParseMode mode_;
  unsigned bits_;
  std::size_t pos_ = 0;
};

}  // namespace

ParamRatFun parse_expr(std::string_view text, ParseMode mode, unsigned bits) {
  return Parser(text, mode, bits).run();
}

}  // namespace aim::numcore
