#include "mpc/condval.hpp"

#include <map>
#include <stdexcept>
#include <utility>

namespace mpc {

namespace {

CVExprPtr mk(CVExpr e) { return std::make_shared<const CVExpr>(std::move(e)); }

}  // namespace

CVExprPtr cv_value(Rational v) {
  return mk({CVExpr::Kind::Value, std::move(v), nullptr, nullptr, nullptr});
}
CVExprPtr cv_guard(EventExprPtr e, CVExprPtr x) {
  return mk({CVExpr::Kind::Guard, Rational(), std::move(e), std::move(x), nullptr});
}
CVExprPtr cv_add(CVExprPtr a, CVExprPtr b) {
  return mk({CVExpr::Kind::Add, Rational(), nullptr, std::move(a), std::move(b)});
}
CVExprPtr cv_neg(CVExprPtr a) {
  return mk({CVExpr::Kind::Neg, Rational(), nullptr, std::move(a), nullptr});
}
CVExprPtr cv_sub(CVExprPtr a, CVExprPtr b) { return cv_add(std::move(a), cv_neg(std::move(b))); }
CVExprPtr cv_mul(CVExprPtr a, CVExprPtr b) {
  return mk({CVExpr::Kind::Mul, Rational(), nullptr, std::move(a), std::move(b)});
}
CVExprPtr cv_inv(CVExprPtr a) {
  return mk({CVExpr::Kind::Inv, Rational(), nullptr, std::move(a), nullptr});
}
CVExprPtr cv_square(CVExprPtr a) { return cv_mul(a, a); }
CVExprPtr cv_cond(CVExprPtr x, EventExprPtr e, CVExprPtr z) {
  return cv_add(cv_guard(e, std::move(x)), cv_guard(e_not(std::move(e)), std::move(z)));
}

std::string cv_expr_str(const CVExprPtr& x) {
  switch (x->kind) {
    case CVExpr::Kind::Value: return "v(" + x->value.str() + ")";
    case CVExpr::Kind::Guard:
      return "(" + event_expr_str(x->event) + " :-> " + cv_expr_str(x->a) + ")";
    case CVExpr::Kind::Add:
      return "(" + cv_expr_str(x->a) + " + " + cv_expr_str(x->b) + ")";
    case CVExpr::Kind::Neg: return "-" + cv_expr_str(x->a);
    case CVExpr::Kind::Mul:
      return "(" + cv_expr_str(x->a) + " * " + cv_expr_str(x->b) + ")";
    case CVExpr::Kind::Inv: return cv_expr_str(x->a) + "^-1";
  }
  return "?";
}

CanonCV::CanonCV(EventSpace space, std::vector<Rational> values)
    : space_(std::move(space)), values_(std::move(values)) {
  if (values_.size() != space_.size())
    throw std::invalid_argument("conditional value needs one entry per atom");
}

CanonCV CanonCV::operator-() const {
  std::vector<Rational> v;
  v.reserve(values_.size());
  for (const Rational& r : values_) v.push_back(-r);
  return CanonCV(space_, std::move(v));
}

CanonCV CanonCV::operator+(const CanonCV& o) const {
  if (space_ != o.space_) throw SpaceMismatch();
  std::vector<Rational> v;
  v.reserve(values_.size());
  for (size_t i = 0; i < values_.size(); ++i) v.push_back(values_[i] + o.values_[i]);
  return CanonCV(space_, std::move(v));
}

CanonCV CanonCV::operator-(const CanonCV& o) const { return *this + -o; }

CanonCV CanonCV::operator*(const CanonCV& o) const {
  if (space_ != o.space_) throw SpaceMismatch();
  std::vector<Rational> v;
  v.reserve(values_.size());
  for (size_t i = 0; i < values_.size(); ++i) v.push_back(values_[i] * o.values_[i]);
  return CanonCV(space_, std::move(v));
}

CanonCV CanonCV::inv() const {
  std::vector<Rational> v;
  v.reserve(values_.size());
  for (const Rational& r : values_) v.push_back(r.inv());
  return CanonCV(space_, std::move(v));
}

CanonCV cv_const(const EventSpace& space, Rational v) {
  return CanonCV(space, std::vector<Rational>(space.size(), std::move(v)));
}

CanonCV cv_guarded(const Event& e, const CanonCV& x) {
  if (e.space() != x.space()) throw SpaceMismatch();
  std::vector<Rational> v = x.values();
  for (size_t i = 0; i < v.size(); ++i)
    if (!e.has_atom(i)) v[i] = Rational(0);
  return CanonCV(x.space(), std::move(v));
}

CanonCV cv_canon(const CVExprPtr& x, const EventSpace& space) {
  switch (x->kind) {
    case CVExpr::Kind::Value: return cv_const(space, x->value);
    case CVExpr::Kind::Guard:
      return cv_guarded(eval_event(x->event, space), cv_canon(x->a, space));
    case CVExpr::Kind::Add: return cv_canon(x->a, space) + cv_canon(x->b, space);
    case CVExpr::Kind::Neg: return -cv_canon(x->a, space);
    case CVExpr::Kind::Mul: return cv_canon(x->a, space) * cv_canon(x->b, space);
    case CVExpr::Kind::Inv: return cv_canon(x->a, space).inv();
  }
  throw std::logic_error("cv_canon: bad kind");
}

std::vector<FlatEntry> cv_flat_entries(const CanonCV& x) {
  std::vector<FlatEntry> out;
  std::vector<uint64_t> bits;
  for (size_t i = 0; i < x.space().size(); ++i) {
    const Rational& v = x.at(i);
    if (v.is_zero()) continue;
    bool found = false;
    for (size_t k = 0; k < out.size(); ++k) {
      if (out[k].value == v) {
        bits[k] |= uint64_t{1} << i;
        found = true;
        break;
      }
    }
    if (!found) {
      out.push_back({Event(), v});
      bits.push_back(uint64_t{1} << i);
    }
  }
  for (size_t k = 0; k < out.size(); ++k) out[k].event = Event(x.space(), bits[k]);
  return out;
}

CVExprPtr cv_flat(const CanonCV& x) {
  CVExprPtr sum;
  for (const FlatEntry& fe : cv_flat_entries(x)) {
    EventExprPtr ev;
    for (size_t i : fe.event.atom_indices()) {
      EventExprPtr a = e_atom(x.space().atom_name(i));
      ev = ev ? e_or(ev, a) : a;
    }
    CVExprPtr piece = cv_guard(ev, cv_value(fe.value));
    sum = sum ? cv_add(sum, piece) : piece;
  }
  return sum ? sum : cv_value(Rational(0));
}

Rational e_p(const CanonCV& x, const WeightPF& p) {
  if (x.space() != p.space()) throw SpaceMismatch();
  Rational total;
  for (const FlatEntry& fe : cv_flat_entries(x)) total += fe.value * p.eval(fe.event);
  return total;
}

Rational var_p(const CanonCV& x, const WeightPF& p) {
  Rational m = e_p(x, p);
  return e_p(x * x, p) - m * m;
}

Rational cov_p(const CanonCV& x, const CanonCV& y, const WeightPF& p) {
  return e_p(x * y, p) - e_p(x, p) * e_p(y, p);
}

Rational corr2_p(const CanonCV& x, const CanonCV& y, const WeightPF& p) {
  Rational c = cov_p(x, y, p);
  return c * c * (var_p(x, p) * var_p(y, p)).inv();
}

namespace {

// Weight of each group of atoms sharing the listed values, groups in first
// occurrence order.
std::vector<std::pair<std::vector<Rational>, Rational>> value_groups(
    const std::vector<const CanonCV*>& xs, const WeightPF& p) {
  std::vector<std::pair<std::vector<Rational>, Rational>> groups;
  for (size_t i = 0; i < p.space().size(); ++i) {
    std::vector<Rational> key;
    key.reserve(xs.size());
    for (const CanonCV* x : xs) key.push_back(x->at(i));
    bool found = false;
    for (auto& g : groups) {
      if (g.first == key) {
        g.second += p.atom_weight(i);
        found = true;
        break;
      }
    }
    if (!found) groups.push_back({std::move(key), p.atom_weight(i)});
  }
  return groups;
}

}  // namespace

PmfView pmf_of_cv(const CanonCV& x, const WeightPF& p) {
  if (x.space() != p.space()) throw SpaceMismatch();
  return PmfView{point_entry_table({"x"}, value_groups({&x}, p))};
}

PmfView joint_pmf(const CanonCV& x, const CanonCV& y, const WeightPF& p) {
  if (x.space() != p.space() || y.space() != p.space()) throw SpaceMismatch();
  return PmfView{point_entry_table({"x", "y"}, value_groups({&x, &y}, p))};
}

bool cv_independent(const CanonCV& x, const CanonCV& y, const WeightPF& p) {
  return is_independent(joint_pmf(x, y, p));
}

namespace {

struct CvParser {
  const std::string& text;
  size_t pos;

  void skip_ws() {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
  }
  bool at(char c) {
    skip_ws();
    return pos < text.size() && text[pos] == c;
  }
  bool eat(char c) {
    if (!at(c)) return false;
    ++pos;
    return true;
  }
  bool lit(const char* s) {
    skip_ws();
    size_t n = std::char_traits<char>::length(s);
    if (text.compare(pos, n, s) != 0) return false;
    pos += n;
    return true;
  }
  [[noreturn]] void err(const std::string& msg) { throw ParseError(msg, pos + 1); }

  CVExprPtr sum() {
    CVExprPtr e = prod();
    for (;;) {
      if (eat('+')) e = cv_add(e, prod());
      else if (eat('-')) e = cv_sub(e, prod());
      else return e;
    }
  }

  CVExprPtr prod() {
    CVExprPtr e = factor();
    while (eat('*')) e = cv_mul(e, factor());
    return e;
  }

  CVExprPtr factor() {
    size_t save = pos;
    skip_ws();
    try {
      size_t p = pos;
      EventExprPtr ev = parse_event_prefix(text, p);
      size_t q = p;
      while (q < text.size() && (text[q] == ' ' || text[q] == '\t')) ++q;
      if (text.compare(q, 3, ":->") == 0) {
        pos = q + 3;
        return cv_guard(ev, factor());
      }
    } catch (const ParseError&) {
    }
    pos = save;
    return unary();
  }

  CVExprPtr unary() {
    if (eat('-')) return cv_neg(unary());
    return postfix();
  }

  CVExprPtr postfix() {
    CVExprPtr e = primary();
    for (;;) {
      skip_ws();
      if (text.compare(pos, 3, "^-1") == 0) {
        pos += 3;
        e = cv_inv(e);
      } else if (text.compare(pos, 2, "^2") == 0) {
        pos += 2;
        e = cv_square(e);
      } else {
        return e;
      }
    }
  }

  CVExprPtr primary() {
    skip_ws();
    if (eat('(')) {
      CVExprPtr e = sum();
      if (!eat(')')) err("expected ')'");
      return e;
    }
    if (pos < text.size() && text[pos] == 'v' && pos + 1 < text.size() && text[pos + 1] == '(') {
      size_t open = pos + 1;
      size_t depth = 0, end = open;
      for (; end < text.size(); ++end) {
        if (text[end] == '(') ++depth;
        else if (text[end] == ')' && --depth == 0) break;
      }
      if (end >= text.size()) err("unbalanced parentheses in v(...)");
      std::string inner = text.substr(open + 1, end - open - 1);
      TermPtr t;
      try {
        t = parse_term(inner);
      } catch (const ParseError& e) {
        throw ParseError("bad value term", open + 1 + e.column);
      }
      Rational r;
      try {
        r = eval_term(t, {});
      } catch (const UnboundVariable& u) {
        throw ParseError("value term must be closed, found " + u.var, open + 2);
      }
      pos = end + 1;
      return cv_value(r);
    }
    err("expected v(...), '(' or '-'");
  }
};

}  // namespace

CVExprPtr parse_cv_prefix(const std::string& text, size_t& pos) {
  CvParser p{text, pos};
  CVExprPtr e = p.sum();
  pos = p.pos;
  return e;
}

CVExprPtr parse_cv(const std::string& text) {
  size_t pos = 0;
  CVExprPtr e = parse_cv_prefix(text, pos);
  while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
  if (pos != text.size()) throw ParseError("unexpected trailing input", pos + 1);
  return e;
}

}  // namespace mpc
