#ifndef MPC_TERM_HPP
#define MPC_TERM_HPP

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mpc/rational.hpp"

namespace mpc {

// Terms over the signature 0, 1, +, -, *, inverse and sign, with variables.
// Derived operators (indicators, square, division, conditional, absolute
// value, order tests) expand to this primitive form at construction.
struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
  enum class Kind { Const, Var, Add, Neg, Mul, Inv, Sign };
  Kind kind;
  Rational value;     // Const
  std::string name;   // Var
  TermPtr a, b;       // operands
};

TermPtr t_num(Rational v);
TermPtr t_var(std::string name);
TermPtr t_add(TermPtr a, TermPtr b);
TermPtr t_neg(TermPtr a);
TermPtr t_mul(TermPtr a, TermPtr b);
TermPtr t_inv(TermPtr a);
TermPtr t_sign(TermPtr a);

TermPtr t_sub(TermPtr a, TermPtr b);
TermPtr t_one(TermPtr a);                       // a * a^-1
TermPtr t_zero(TermPtr a);                      // 1 - a * a^-1
TermPtr t_square(TermPtr a);                    // a * a
TermPtr t_div(TermPtr a, TermPtr b);            // a * b^-1
TermPtr t_cond(TermPtr x, TermPtr c, TermPtr z);  // one(c)*x + zero(c)*z
TermPtr t_abs(TermPtr a);                       // s(a) * a
TermPtr t_lt(TermPtr a, TermPtr b);             // 1 iff a < b, else 0
TermPtr t_leq(TermPtr a, TermPtr b);            // s(s(b - a) + 1)

bool term_equal(const TermPtr& a, const TermPtr& b);
std::string term_str(const TermPtr& t);
std::set<std::string> free_vars(const TermPtr& t);

using Env = std::map<std::string, Rational>;

struct UnboundVariable : std::runtime_error {
  std::string var;
  explicit UnboundVariable(const std::string& v)
      : std::runtime_error("unbound variable: " + v), var(v) {}
};

Rational eval_term(const TermPtr& t, const Env& env);

// Sample values p/q with |p| <= 4 and 1 <= q <= 3, deduplicated.
const std::vector<Rational>& default_grid();

// Cartesian product of the value list over the given variables.
std::vector<Env> grid_envs(const std::vector<std::string>& vars,
                           const std::vector<Rational>& values);

struct EqCheck {
  bool ok = true;
  std::optional<Env> witness;  // first environment where the sides differ
  Rational lhs, rhs;
};

EqCheck check_equation(const TermPtr& lhs, const TermPtr& rhs,
                       const std::vector<Env>& envs);
// Convenience: both sides over default_grid() for the union of free variables.
EqCheck check_equation(const TermPtr& lhs, const TermPtr& rhs);

struct ParseError : std::runtime_error {
  size_t column;  // 1-based offset into the parsed text
  ParseError(const std::string& msg, size_t col)
      : std::runtime_error(msg + " at col " + std::to_string(col)), column(col) {}
};

// Grammar: + - * / infix, unary -, postfix ^-1 and ^2, s( ), abs( ),
// one( ), zero( ), cond( , , ), integer literals, variables.
TermPtr parse_term(const std::string& text);

}  // namespace mpc

#endif
