#include "mpc/term.hpp"

#include <cctype>

namespace mpc {

// Recursive descent over:
//   sum     := product (('+' | '-') product)*
//   product := unary (('*' | '/') unary)*
//   unary   := '-' unary | postfix
//   postfix := primary ('^-1' | '^2')*
//   primary := number | name | name '(' args ')' | '(' sum ')'
// Named functions: s, abs, one, zero, cond.
namespace {

struct TermParser {
  const std::string& text;
  size_t pos = 0;

  explicit TermParser(const std::string& t) : text(t) {}

  void skip_ws() {
    while (pos < text.size() && isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }
  [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, pos + 1); }

  bool eat(char c) {
    skip_ws();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!eat(c)) fail(std::string("expected '") + c + "'");
  }
  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }

  TermPtr parse() {
    TermPtr t = sum();
    skip_ws();
    if (pos != text.size()) fail("unexpected trailing input");
    return t;
  }

  TermPtr sum() {
    TermPtr t = product();
    for (;;) {
      if (eat('+')) t = t_add(t, product());
      else if (eat('-')) t = t_sub(t, product());
      else return t;
    }
  }

  TermPtr product() {
    TermPtr t = unary();
    for (;;) {
      if (eat('*')) t = t_mul(t, unary());
      else if (eat('/')) t = t_div(t, unary());
      else return t;
    }
  }

  TermPtr unary() {
    if (eat('-')) return t_neg(unary());
    return postfix();
  }

  TermPtr postfix() {
    TermPtr t = primary();
    while (peek() == '^') {
      ++pos;
      if (eat('-')) {
        if (!eat('1')) fail("expected '1' after '^-'");
        t = t_inv(t);
      } else if (eat('2')) {
        t = t_square(t);
      } else {
        fail("expected '-1' or '2' after '^'");
      }
    }
    return t;
  }

  TermPtr primary() {
    skip_ws();
    if (pos >= text.size()) fail("unexpected end of term");
    char c = text[pos];
    if (c == '(') {
      ++pos;
      TermPtr t = sum();
      expect(')');
      return t;
    }
    if (isdigit(static_cast<unsigned char>(c))) {
      size_t start = pos;
      while (pos < text.size() && isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
      return t_num(Rational(BigInt(text.substr(start, pos - start))));
    }
    if (isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = pos;
      while (pos < text.size() &&
             (isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
        ++pos;
      std::string name = text.substr(start, pos - start);
      if (peek() == '(') {
        ++pos;
        if (name == "cond") {
          TermPtr x = sum();
          expect(',');
          TermPtr cnd = sum();
          expect(',');
          TermPtr z = sum();
          expect(')');
          return t_cond(x, cnd, z);
        }
        TermPtr arg = sum();
        expect(')');
        if (name == "s") return t_sign(arg);
        if (name == "abs") return t_abs(arg);
        if (name == "one") return t_one(arg);
        if (name == "zero") return t_zero(arg);
        fail("unknown function '" + name + "'");
      }
      return t_var(name);
    }
    fail(std::string("unexpected character '") + c + "'");
  }
};

}  // namespace

TermPtr parse_term(const std::string& text) { return TermParser(text).parse(); }

}  // namespace mpc
