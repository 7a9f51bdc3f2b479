#include "mpc/term.hpp"

#include <algorithm>

namespace mpc {

namespace {
TermPtr make(Term::Kind k, Rational v, std::string n, TermPtr a, TermPtr b) {
  auto t = std::make_shared<Term>();
  t->kind = k;
  t->value = std::move(v);
  t->name = std::move(n);
  t->a = std::move(a);
  t->b = std::move(b);
  return t;
}
}  // namespace

TermPtr t_num(Rational v) { return make(Term::Kind::Const, std::move(v), "", nullptr, nullptr); }
TermPtr t_var(std::string name) { return make(Term::Kind::Var, Rational(), std::move(name), nullptr, nullptr); }
TermPtr t_add(TermPtr a, TermPtr b) { return make(Term::Kind::Add, Rational(), "", std::move(a), std::move(b)); }
TermPtr t_neg(TermPtr a) { return make(Term::Kind::Neg, Rational(), "", std::move(a), nullptr); }
TermPtr t_mul(TermPtr a, TermPtr b) { return make(Term::Kind::Mul, Rational(), "", std::move(a), std::move(b)); }
TermPtr t_inv(TermPtr a) { return make(Term::Kind::Inv, Rational(), "", std::move(a), nullptr); }
TermPtr t_sign(TermPtr a) { return make(Term::Kind::Sign, Rational(), "", std::move(a), nullptr); }

TermPtr t_sub(TermPtr a, TermPtr b) { return t_add(std::move(a), t_neg(std::move(b))); }
TermPtr t_one(TermPtr a) { return t_mul(a, t_inv(a)); }
TermPtr t_zero(TermPtr a) { return t_add(t_num(1), t_neg(t_one(std::move(a)))); }
TermPtr t_square(TermPtr a) { return t_mul(a, a); }
TermPtr t_div(TermPtr a, TermPtr b) { return t_mul(std::move(a), t_inv(std::move(b))); }
TermPtr t_cond(TermPtr x, TermPtr c, TermPtr z) {
  return t_add(t_mul(t_one(c), std::move(x)), t_mul(t_zero(c), std::move(z)));
}
TermPtr t_abs(TermPtr a) { return t_mul(t_sign(a), a); }
TermPtr t_lt(TermPtr a, TermPtr b) {
  // 1 iff s(b - a) = 1: indicator of the sign hitting exactly 1.
  return t_zero(t_sub(t_sign(t_sub(std::move(b), std::move(a))), t_num(1)));
}
TermPtr t_leq(TermPtr a, TermPtr b) {
  return t_sign(t_add(t_sign(t_sub(std::move(b), std::move(a))), t_num(1)));
}

bool term_equal(const TermPtr& a, const TermPtr& b) {
  if (a == b) return true;
  if (!a || !b || a->kind != b->kind) return false;
  switch (a->kind) {
    case Term::Kind::Const: return a->value == b->value;
    case Term::Kind::Var: return a->name == b->name;
    default: return term_equal(a->a, b->a) && term_equal(a->b, b->b);
  }
}

std::string term_str(const TermPtr& t) {
  if (!t) return "?";
  switch (t->kind) {
    case Term::Kind::Const: return t->value.str();
    case Term::Kind::Var: return t->name;
    case Term::Kind::Add: return "(" + term_str(t->a) + " + " + term_str(t->b) + ")";
    case Term::Kind::Neg: return "-" + term_str(t->a);
    case Term::Kind::Mul: return "(" + term_str(t->a) + " * " + term_str(t->b) + ")";
    case Term::Kind::Inv: return term_str(t->a) + "^-1";
    case Term::Kind::Sign: return "s(" + term_str(t->a) + ")";
  }
  return "?";
}

static void collect_vars(const TermPtr& t, std::set<std::string>& out) {
  if (!t) return;
  if (t->kind == Term::Kind::Var) out.insert(t->name);
  collect_vars(t->a, out);
  collect_vars(t->b, out);
}

std::set<std::string> free_vars(const TermPtr& t) {
  std::set<std::string> out;
  collect_vars(t, out);
  return out;
}

Rational eval_term(const TermPtr& t, const Env& env) {
  switch (t->kind) {
    case Term::Kind::Const: return t->value;
    case Term::Kind::Var: {
      auto it = env.find(t->name);
      if (it == env.end()) throw UnboundVariable(t->name);
      return it->second;
    }
    case Term::Kind::Add: return eval_term(t->a, env) + eval_term(t->b, env);
    case Term::Kind::Neg: return -eval_term(t->a, env);
    case Term::Kind::Mul: return eval_term(t->a, env) * eval_term(t->b, env);
    case Term::Kind::Inv: return eval_term(t->a, env).inv();
    case Term::Kind::Sign: return eval_term(t->a, env).sign();
  }
  throw std::logic_error("bad term kind");
}

const std::vector<Rational>& default_grid() {
  static const std::vector<Rational> grid = [] {
    std::set<std::pair<BigInt, BigInt>> seen;
    std::vector<Rational> out;
    for (int q = 1; q <= 3; ++q)
      for (int p = -4; p <= 4; ++p) {
        Rational r{BigInt(p), BigInt(q)};
        if (seen.insert({r.num(), r.den()}).second) out.push_back(r);
      }
    std::sort(out.begin(), out.end());
    return out;
  }();
  return grid;
}

std::vector<Env> grid_envs(const std::vector<std::string>& vars,
                           const std::vector<Rational>& values) {
  std::vector<Env> envs{Env{}};
  for (const auto& v : vars) {
    std::vector<Env> next;
    next.reserve(envs.size() * values.size());
    for (const auto& e : envs)
      for (const auto& val : values) {
        Env e2 = e;
        e2[v] = val;
        next.push_back(std::move(e2));
      }
    envs = std::move(next);
  }
  return envs;
}

EqCheck check_equation(const TermPtr& lhs, const TermPtr& rhs,
                       const std::vector<Env>& envs) {
  for (const auto& env : envs) {
    Rational l = eval_term(lhs, env), r = eval_term(rhs, env);
    if (l != r) return {false, env, l, r};
  }
  return {};
}

EqCheck check_equation(const TermPtr& lhs, const TermPtr& rhs) {
  std::set<std::string> vs = free_vars(lhs);
  for (const auto& v : free_vars(rhs)) vs.insert(v);
  return check_equation(lhs, rhs,
                        grid_envs({vs.begin(), vs.end()}, default_grid()));
}

}  // namespace mpc
