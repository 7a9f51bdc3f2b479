#include "mpc/session.hpp"

#include <algorithm>
#include <cctype>

#include "mpc/guard_table.hpp"
#include "mpc/pmf.hpp"

namespace mpc {

namespace {

struct SessionError : std::runtime_error {
  explicit SessionError(const std::string& what) : std::runtime_error(what) {}
};

bool ident_start(char c) { return isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return isalnum(static_cast<unsigned char>(c)) || c == '_'; }

struct Cursor {
  const std::string& s;
  size_t pos = 0;

  void skip_ws() {
    while (pos < s.size() && isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool done() {
    skip_ws();
    return pos >= s.size();
  }
  char peek() {
    skip_ws();
    return pos < s.size() ? s[pos] : '\0';
  }
  bool eat(char c) {
    if (peek() != c) return false;
    ++pos;
    return true;
  }
  void expect(char c) {
    if (!eat(c)) throw SessionError(std::string("expected '") + c + "'");
  }
  std::string word() {
    skip_ws();
    size_t start = pos;
    while (pos < s.size() && !isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    if (start == pos) throw SessionError("unexpected end of line");
    return s.substr(start, pos - start);
  }
  std::string name() {
    skip_ws();
    if (pos >= s.size() || !ident_start(s[pos])) throw SessionError("expected a name");
    size_t start = pos;
    while (pos < s.size() && ident_char(s[pos])) ++pos;
    return s.substr(start, pos - start);
  }
  void keyword(const char* k) {
    std::string w = name();
    if (w != k) throw SessionError(std::string("expected '") + k + "', got '" + w + "'");
  }
  std::string rest() {
    skip_ws();
    std::string r = s.substr(pos);
    pos = s.size();
    return r;
  }
};

Rational parse_rational(const std::string& text) {
  auto r = Rational::parse(text);
  if (!r) throw SessionError("bad rational '" + text + "'");
  return *r;
}

// Table-level expressions for the summation command: sums, products,
// differences and squares of guard tables, with meadow terms as leaves and
// nested finite-support sums as a binder.
struct TExpr;
using TExprPtr = std::shared_ptr<const TExpr>;

struct TExpr {
  enum class Kind { Leaf, Add, Sub, Mul, Div, Neg, Square, Sum };
  Kind kind;
  TermPtr term;                    // Leaf
  std::vector<std::string> svars;  // Sum
  TExprPtr a, b;
};

TExprPtr t_node(TExpr e) { return std::make_shared<const TExpr>(std::move(e)); }

struct TableParser {
  Cursor& c;

  TExprPtr texpr() {
    TExprPtr e = tterm();
    for (;;) {
      if (c.eat('+')) e = t_node({TExpr::Kind::Add, nullptr, {}, e, tterm()});
      else if (c.eat('-')) e = t_node({TExpr::Kind::Sub, nullptr, {}, e, tterm()});
      else return e;
    }
  }

  TExprPtr tterm() {
    TExprPtr e = tfactor();
    for (;;) {
      if (c.eat('*')) e = t_node({TExpr::Kind::Mul, nullptr, {}, e, tfactor()});
      else if (c.eat('/')) e = t_node({TExpr::Kind::Div, nullptr, {}, e, tfactor()});
      else return e;
    }
  }

  TExprPtr tfactor() {
    if (c.eat('-')) return t_node({TExpr::Kind::Neg, nullptr, {}, tfactor(), nullptr});
    return tpost();
  }

  TExprPtr tpost() {
    TExprPtr e = tprim();
    for (;;) {
      size_t save = c.pos;
      c.skip_ws();
      if (c.s.compare(c.pos, 2, "^2") == 0) {
        c.pos += 2;
        e = t_node({TExpr::Kind::Square, nullptr, {}, e, nullptr});
      } else {
        c.pos = save;
        return e;
      }
    }
  }

  TExprPtr tprim() {
    c.skip_ws();
    if (c.eat('(')) {
      TExprPtr e = texpr();
      c.expect(')');
      return e;
    }
    if (c.pos < c.s.size() && ident_start(c.s[c.pos])) {
      size_t save = c.pos;
      std::string w = c.name();
      if (w == "sum") {
        std::vector<std::string> vars{c.name()};
        while (c.eat(',')) vars.push_back(c.name());
        c.keyword("of");
        return t_node({TExpr::Kind::Sum, nullptr, std::move(vars), texpr(), nullptr});
      }
      c.pos = save;
    }
    return leaf();
  }

  // A maximal meadow-term primary: a number or an identifier, an optional
  // balanced argument list, and any postfix operators; handed to the term
  // parser as one piece.
  TExprPtr leaf() {
    c.skip_ws();
    size_t start = c.pos;
    if (c.pos < c.s.size() && isdigit(static_cast<unsigned char>(c.s[c.pos]))) {
      while (c.pos < c.s.size() && isdigit(static_cast<unsigned char>(c.s[c.pos]))) ++c.pos;
    } else if (c.pos < c.s.size() && ident_start(c.s[c.pos])) {
      c.name();
      size_t q = c.pos;
      while (q < c.s.size() && isspace(static_cast<unsigned char>(c.s[q]))) ++q;
      if (q < c.s.size() && c.s[q] == '(') {
        size_t depth = 0;
        for (c.pos = q; c.pos < c.s.size(); ++c.pos) {
          if (c.s[c.pos] == '(') ++depth;
          else if (c.s[c.pos] == ')' && --depth == 0) { ++c.pos; break; }
        }
        if (depth != 0) throw SessionError("unbalanced parentheses");
      }
    } else {
      throw SessionError("expected a term");
    }
    for (;;) {
      size_t q = c.pos;
      while (q < c.s.size() && isspace(static_cast<unsigned char>(c.s[q]))) ++q;
      if (c.s.compare(q, 3, "^-1") == 0) c.pos = q + 3;
      else if (c.s.compare(q, 2, "^2") == 0) c.pos = q + 2;
      else break;
    }
    return t_node({TExpr::Kind::Leaf, parse_term(c.s.substr(start, c.pos - start)),
                   {}, nullptr, nullptr});
  }
};

void texpr_free_vars(const TExprPtr& e, std::set<std::string>& out) {
  switch (e->kind) {
    case TExpr::Kind::Leaf: {
      for (const std::string& v : free_vars(e->term)) out.insert(v);
      return;
    }
    case TExpr::Kind::Sum: {
      std::set<std::string> inner;
      texpr_free_vars(e->a, inner);
      for (const std::string& v : e->svars) inner.erase(v);
      out.insert(inner.begin(), inner.end());
      return;
    }
    default:
      if (e->a) texpr_free_vars(e->a, out);
      if (e->b) texpr_free_vars(e->b, out);
  }
}

GuardTable texpr_eval(const TExprPtr& e, const std::vector<std::string>& vars) {
  switch (e->kind) {
    case TExpr::Kind::Leaf:
      return gt_parse(e->term, vars);
    case TExpr::Kind::Add:
      return gt_add(texpr_eval(e->a, vars), texpr_eval(e->b, vars));
    case TExpr::Kind::Sub:
      return gt_sub(texpr_eval(e->a, vars), texpr_eval(e->b, vars));
    case TExpr::Kind::Mul:
      return gt_mul(texpr_eval(e->a, vars), texpr_eval(e->b, vars));
    case TExpr::Kind::Div: {
      GuardTable den = texpr_eval(e->b, vars);
      if (den.entries().empty())
        return gt_scale(texpr_eval(e->a, vars), Rational(0));
      if (den.entries().size() == 1 && den.entries()[0].guard.is_top() &&
          den.entries()[0].coeff.is_constant())
        return gt_scale(texpr_eval(e->a, vars),
                        den.entries()[0].coeff.constant_value().inv());
      throw SessionError("division by a non-constant table");
    }
    case TExpr::Kind::Neg:
      return gt_scale(texpr_eval(e->a, vars), Rational(-1));
    case TExpr::Kind::Square: {
      GuardTable t = texpr_eval(e->a, vars);
      return gt_mul(t, t);
    }
    case TExpr::Kind::Sum: {
      std::vector<std::string> inner = vars;
      for (const std::string& v : e->svars) {
        if (std::find(inner.begin(), inner.end(), v) != inner.end())
          throw SessionError("summed variable " + v + " shadows another");
        inner.push_back(v);
      }
      return fss(texpr_eval(e->a, inner), {e->svars.begin(), e->svars.end()});
    }
  }
  throw std::logic_error("texpr_eval: bad kind");
}

}  // namespace

Session::Session(size_t max_atoms, uint64_t seed) : max_atoms_(max_atoms), seed_(seed) {}

const EventSpace& Session::space_of(const std::string& name) const {
  auto it = spaces_.find(name);
  if (it == spaces_.end()) throw SessionError("unknown space " + name);
  return it->second;
}

const WeightPF& Session::weight_of(const std::string& name) const {
  auto it = weights_.find(name);
  if (it == weights_.end()) throw SessionError("unknown probability function " + name);
  return it->second;
}

const CanonCV& Session::cv_of(const std::string& name) const {
  auto it = cvs_.find(name);
  if (it == cvs_.end()) throw SessionError("unknown conditional value " + name);
  return it->second;
}

TablePF Session::table_of(const std::string& name) const {
  auto it = tables_.find(name);
  if (it != tables_.end()) return it->second;
  auto jt = weights_.find(name);
  if (jt != weights_.end()) return jt->second.table();
  throw SessionError("unknown probability function " + name);
}

Pff Session::build_pff(const std::string& name) const {
  auto it = pffs_.find(name);
  if (it == pffs_.end()) throw SessionError("unknown family " + name);
  std::vector<std::string> involved;
  std::vector<EventSpace> spaces;
  for (const std::string& d : dims_) {
    bool used = false;
    for (const auto& [w, t] : it->second)
      if (std::find(w.begin(), w.end(), d) != w.end()) used = true;
    if (used) {
      involved.push_back(d);
      spaces.push_back(spaces_.at(d));
    }
  }
  PffBuilder b(involved, spaces);
  for (const auto& [w, t] : it->second) b.add_tensor(w, t);
  return b.finalize();
}

std::vector<std::string> Session::run_line(const std::string& line) {
  std::string text = line;
  size_t hash = text.find('#');
  if (hash != std::string::npos) text.resize(hash);
  Cursor probe{text};
  if (probe.done()) return {};

  std::string cmd;
  {
    Cursor c{text};
    size_t start = c.pos;
    c.skip_ws();
    start = c.pos;
    while (c.pos < text.size() && ident_char(text[c.pos])) ++c.pos;
    cmd = text.substr(start, c.pos - start);
  }

  std::vector<std::string> out;
  try {
    out = dispatch(text);
  } catch (const std::exception& e) {
    out = {"FAIL " + (cmd.empty() ? std::string("input") : cmd) + " at " + e.what()};
  }
  for (const std::string& l : out)
    if (l.rfind("FAIL", 0) == 0) failed_ = true;
  return out;
}

std::vector<std::string> Session::dispatch(const std::string& text) {
  Cursor c{text};
  std::string cmd = c.name();

  if (cmd == "space") {
    std::string name = c.name();
    if (spaces_.count(name)) throw SessionError("name already bound");
    c.keyword("atoms");
    std::vector<std::string> atoms;
    while (!c.done()) atoms.push_back(c.name());
    if (atoms.empty()) throw SessionError("a space needs atoms");
    if (atoms.size() > max_atoms_) throw SessionError("space larger than --max-atoms");
    for (size_t i = 0; i < atoms.size(); ++i) {
      if (atoms[i] == "T" || atoms[i] == "F") throw SessionError("reserved atom name " + atoms[i]);
      for (size_t j = i + 1; j < atoms.size(); ++j)
        if (atoms[i] == atoms[j]) throw SessionError("repeated atom " + atoms[i]);
    }
    spaces_.emplace(name, make_space(atoms));
    return {};
  }

  if (cmd == "pf") {
    std::string name = c.name();
    if (weights_.count(name)) throw SessionError("name already bound");
    c.keyword("on");
    const EventSpace& s = space_of(c.name());
    c.expect(':');
    std::vector<Rational> w(s.size());
    std::vector<bool> seen(s.size(), false);
    while (!c.done()) {
      std::string atom = c.name();
      int i = s.atom_index(atom);
      if (i < 0) throw SessionError("unknown atom " + atom);
      if (seen[i]) throw SessionError("atom " + atom + " weighted twice");
      c.expect('=');
      seen[i] = true;
      w[i] = parse_rational(c.word());
    }
    for (size_t i = 0; i < s.size(); ++i)
      if (!seen[i]) throw SessionError("atom " + s.atom_name(i) + " has no weight");
    weights_.emplace(name, WeightPF(s, std::move(w)));
    return {};
  }

  if (cmd == "table") {
    std::string name = c.name();
    if (tables_.count(name)) throw SessionError("name already bound");
    c.keyword("on");
    const EventSpace& s = space_of(c.name());
    c.expect(':');
    std::vector<Rational> values(size_t{1} << s.size());
    std::vector<bool> seen(values.size(), false);
    while (!c.done()) {
      c.skip_ws();
      size_t start = c.pos;
      while (c.pos < text.size() && text[c.pos] != '=' &&
             !isspace(static_cast<unsigned char>(text[c.pos])))
        ++c.pos;
      std::string evtext = text.substr(start, c.pos - start);
      c.expect('=');
      Event e = eval_event(parse_event(evtext), s);
      if (seen[e.bits()]) throw SessionError("event " + evtext + " valued twice");
      seen[e.bits()] = true;
      values[e.bits()] = parse_rational(c.word());
    }
    for (size_t b = 0; b < values.size(); ++b)
      if (!seen[b]) throw SessionError("event " + event_str(Event(s, b)) + " has no value");
    tables_.emplace(name, TablePF(s, std::move(values)));
    return {};
  }

  if (cmd == "cv") {
    std::string name = c.name();
    if (cvs_.count(name)) throw SessionError("name already bound");
    c.keyword("on");
    const EventSpace& s = space_of(c.name());
    c.expect('=');
    cvs_.emplace(name, cv_canon(parse_cv(c.rest()), s));
    return {};
  }

  if (cmd == "objects") {
    while (!c.done()) objects_.insert(c.name());
    return {};
  }

  if (cmd == "config") {
    std::string name = c.name();
    if (configs_.count(name)) throw SessionError("name already bound");
    c.keyword("on");
    const EventSpace& s = space_of(c.name());
    c.expect('=');
    ConfigExprPtr expr = parse_config(c.rest());
    std::vector<ConfigExprPtr> stack{expr};
    while (!stack.empty()) {
      ConfigExprPtr n = stack.back();
      stack.pop_back();
      if (n->kind == ConfigExpr::Kind::Object && !objects_.count(n->object))
        throw SessionError("undeclared object " + n->object);
      if (n->a) stack.push_back(n->a);
      if (n->b) stack.push_back(n->b);
    }
    cfg_canon(expr, s);  // validates the guards against the space
    configs_.emplace(name, BoundConfig{expr, s});
    return {};
  }

  if (cmd == "rv") {
    std::string name = c.name();
    if (rvs_.count(name)) throw SessionError("name already bound");
    c.expect('=');
    c.keyword("rvof");
    rvs_.emplace(name, rv_of_cv(cv_of(c.name())));
    return {};
  }

  if (cmd == "dims") {
    std::vector<std::string> names;
    while (c.peek() != ':' && !c.done()) names.push_back(c.name());
    size_t n = 2;
    if (c.eat(':')) {
      std::string num = c.word();
      n = 0;
      for (char ch : num) {
        if (!isdigit(static_cast<unsigned char>(ch))) throw SessionError("bad atom count " + num);
        n = n * 10 + (ch - '0');
      }
    }
    if (names.empty()) throw SessionError("dims needs names");
    if (n == 0 || n > max_atoms_) throw SessionError("bad dimension size");
    for (const std::string& d : names) {
      if (spaces_.count(d)) throw SessionError("name already bound: " + d);
      std::vector<std::string> atoms;
      for (size_t i = 1; i <= n; ++i) atoms.push_back(d + std::to_string(i));
      spaces_.emplace(d, make_space(atoms));
      dims_.push_back(d);
    }
    return {};
  }

  if (cmd == "family") {
    std::string name = c.name();
    if (families_.count(name)) throw SessionError("name already bound");
    c.expect('=');
    std::vector<Arity> arities;
    while (!c.done()) {
      c.expect('(');
      Arity w;
      while (c.peek() != ')') w.push_back(c.name());
      c.expect(')');
      for (const std::string& d : w)
        if (std::find(dims_.begin(), dims_.end(), d) == dims_.end())
          throw SessionError("unknown dimension " + d);
      arities.push_back(std::move(w));
    }
    ArityFamily fam;
    for (const std::string& d : dims_)
      for (const Arity& w : arities)
        if (std::find(w.begin(), w.end(), d) != w.end() &&
            std::find(fam.dims.begin(), fam.dims.end(), d) == fam.dims.end())
          fam.dims.push_back(d);
    fam.arities.insert(arities.begin(), arities.end());
    if (auto v = validate_family(fam))
      return {"FAIL family " + name + " " + v->condition + " at " + arity_str(v->witness)};
    families_.emplace(name, std::move(fam));
    return {"OK family " + name};
  }

  if (cmd == "pff") {
    std::string name = c.name();
    c.expect(':');
    c.expect('(');
    Arity w;
    while (c.peek() != ')') w.push_back(c.name());
    c.expect(')');
    std::vector<size_t> sizes;
    for (const std::string& d : w) {
      if (std::find(dims_.begin(), dims_.end(), d) == dims_.end())
        throw SessionError("unknown dimension " + d);
      sizes.push_back(spaces_.at(d).size());
    }
    for (const auto& [prev, t] : pffs_[name])
      if (prev == w) throw SessionError("tensor for " + arity_str(w) + " already given");
    size_t cells = 1;
    for (size_t s : sizes) cells *= s;
    std::vector<Rational> flat(cells);
    std::vector<bool> seen(cells, false);
    c.expect('{');
    while (c.peek() != '}') {
      c.expect('(');
      std::vector<size_t> tuple;
      for (size_t k = 0; k < w.size(); ++k) {
        if (k) c.expect(',');
        std::string atom = c.name();
        int i = spaces_.at(w[k]).atom_index(atom);
        if (i < 0) throw SessionError("unknown atom " + atom + " in dimension " + w[k]);
        tuple.push_back(static_cast<size_t>(i));
      }
      c.expect(')');
      c.expect('=');
      size_t idx = 0;
      for (size_t k = 0; k < w.size(); ++k) idx = idx * sizes[k] + tuple[k];
      if (seen[idx]) throw SessionError("tuple valued twice");
      seen[idx] = true;
      c.skip_ws();
      size_t start = c.pos;
      while (c.pos < text.size() && !isspace(static_cast<unsigned char>(text[c.pos])) &&
             text[c.pos] != '}')
        ++c.pos;
      flat[idx] = parse_rational(text.substr(start, c.pos - start));
    }
    c.expect('}');
    if (!c.done()) throw SessionError("unexpected trailing input");
    for (size_t i = 0; i < cells; ++i)
      if (!seen[i]) throw SessionError("tensor for " + arity_str(w) + " is missing entries");
    pffs_[name].push_back({std::move(w), std::move(flat)});
    return {};
  }

  if (cmd == "check") {
    size_t save = c.pos;
    std::string what = c.name();
    if (what == "pff") {
      std::string name = c.name();
      Pff p = build_pff(name);
      if (auto v = check_pff_axioms(p))
        return {"FAIL pff " + name + " " + v->law + " at " + v->detail};
      return {"OK pff " + name};
    }
    if (what == "reduction") {
      std::string name = c.name();
      auto arg = [&]() {
        std::string cvname = c.name();
        c.expect('@');
        std::string dim = c.name();
        return std::pair<std::string, std::string>(cvname, dim);
      };
      auto [xn, dx] = arg();
      auto [yn, dy] = arg();
      Pff p = build_pff(name);
      const CanonCV& x = cv_of(xn);
      const CanonCV& y = cv_of(yn);
      ReducedStats r = reduced_stats(p, dx, x, dy, y);
      std::string tag = name + " " + xn + "@" + dx + " " + yn + "@" + dy;
      auto mismatch = [&](const char* field, const Rational& lhs,
                          const Rational& rhs) -> std::optional<std::string> {
        if (lhs == rhs) return std::nullopt;
        return "FAIL reduction " + tag + " at " + field + " " + lhs.str() + " != " + rhs.str();
      };
      if (auto m = mismatch("e_x", md_e(p, dx, x), r.e_x)) return {*m};
      if (auto m = mismatch("var_x", md_var(p, dx, x), r.var_x)) return {*m};
      if (auto m = mismatch("e_y", md_e(p, dy, y), r.e_y)) return {*m};
      if (auto m = mismatch("var_y", md_var(p, dy, y), r.var_y)) return {*m};
      if (auto m = mismatch("cov", md_cov(p, dx, x, dy, y), r.cov)) return {*m};
      if (auto m = mismatch("corr2", md_corr2(p, dx, x, dy, y), r.corr2)) return {*m};
      return {"OK reduction " + tag + " cov=" + r.cov.str() + " corr2=" + r.corr2.str()};
    }
    c.pos = save;
    std::string systems = c.word();
    std::string name = c.name();
    if (!c.done()) throw SessionError("unexpected trailing input");
    TablePF table = table_of(name);
    std::vector<std::string> out;
    size_t from = 0;
    while (from <= systems.size()) {
      size_t comma = systems.find(',', from);
      std::string sys = systems.substr(from, comma == std::string::npos ? comma : comma - from);
      from = comma == std::string::npos ? systems.size() + 1 : comma + 1;
      auto axioms = axiom_system(sys);
      if (!axioms) throw SessionError("unknown axiom system " + sys);
      if (auto v = check_axioms(table, *axioms))
        out.push_back("FAIL " + sys + " " + name + " " + v->str());
      else
        out.push_back("OK " + sys + " " + name);
    }
    return out;
  }

  if (cmd == "eval") {
    std::string kind = c.name();
    c.expect('[');
    std::vector<std::string> args;
    for (;;) {
      c.skip_ws();
      size_t start = c.pos;
      while (c.pos < text.size() && text[c.pos] != ',' && text[c.pos] != ']') ++c.pos;
      size_t end = c.pos;
      while (end > start && isspace(static_cast<unsigned char>(text[end - 1]))) --end;
      if (end == start) throw SessionError("empty argument");
      args.push_back(text.substr(start, end - start));
      if (c.eat(']')) break;
      c.expect(',');
    }
    if (!c.done()) throw SessionError("unexpected trailing input");

    std::string echo = kind + "[";
    for (size_t i = 0; i < args.size(); ++i) echo += (i ? "," : "") + args[i];
    echo += "]";
    auto need = [&](size_t n) {
      if (args.size() != n)
        throw SessionError(kind + " takes " + std::to_string(n) + " arguments");
    };
    auto at_arg = [&](const std::string& a) {
      size_t at = a.find('@');
      if (at == std::string::npos) throw SessionError("expected name@dimension, got " + a);
      return std::pair<std::string, std::string>(a.substr(0, at), a.substr(at + 1));
    };

    Rational value;
    if (kind == "E" || kind == "VAR") {
      need(2);
      const WeightPF& p = weight_of(args[0]);
      const CanonCV& x = cv_of(args[1]);
      value = kind == "E" ? e_p(x, p) : var_p(x, p);
    } else if (kind == "COV" || kind == "CORR2") {
      need(3);
      const WeightPF& p = weight_of(args[0]);
      const CanonCV& x = cv_of(args[1]);
      const CanonCV& y = cv_of(args[2]);
      value = kind == "COV" ? cov_p(x, y, p) : corr2_p(x, y, p);
    } else if (kind == "EU") {
      need(2);
      const WeightPF& p = weight_of(args[0]);
      auto it = configs_.find(args[1]);
      if (it == configs_.end()) throw SessionError("unknown configuration " + args[1]);
      value = expected_utility(it->second.expr, p);
    } else if (kind == "ERV") {
      need(2);
      const WeightPF& p = weight_of(args[0]);
      auto it = rvs_.find(args[1]);
      if (it == rvs_.end()) throw SessionError("unknown random variable " + args[1]);
      value = e_rv(it->second, p);
    } else if (kind == "MDE" || kind == "MDVAR") {
      need(2);
      Pff p = build_pff(args[0]);
      auto [xn, dim] = at_arg(args[1]);
      value = kind == "MDE" ? md_e(p, dim, cv_of(xn)) : md_var(p, dim, cv_of(xn));
    } else if (kind == "MDCOV" || kind == "MDCORR2") {
      need(3);
      Pff p = build_pff(args[0]);
      auto [xn, dx] = at_arg(args[1]);
      auto [yn, dy] = at_arg(args[2]);
      value = kind == "MDCOV" ? md_cov(p, dx, cv_of(xn), dy, cv_of(yn))
                              : md_corr2(p, dx, cv_of(xn), dy, cv_of(yn));
    } else {
      throw SessionError("unknown evaluation " + kind);
    }
    return {"OK " + echo + " = " + value.str()};
  }

  if (cmd == "elicit") {
    Rational u1 = parse_rational(c.word());
    Rational u2 = parse_rational(c.word());
    Rational u3 = parse_rational(c.word());
    Rational u4 = parse_rational(c.word());
    if (!c.done()) throw SessionError("unexpected trailing input");
    return {"OK elicit = " + elicit_indifference(u1, u2, u3, u4).str()};
  }

  if (cmd == "threshold") {
    Rational high = parse_rational(c.word());
    Rational low = parse_rational(c.word());
    Rational d = parse_rational(c.word());
    if (!c.done()) throw SessionError("unexpected trailing input");
    return {"OK threshold = " + ask_threshold(high, low, d).str()};
  }

  if (cmd == "jointexists") {
    std::string name = c.name();
    if (!c.done()) throw SessionError("unexpected trailing input");
    Pff p = build_pff(name);
    JointResult r = joint_exists(p);
    if (!r.exists) return {"FAIL jointexists " + name + " at " + r.certificate};
    std::vector<size_t> sizes;
    for (const std::string& d : p.dims()) sizes.push_back(p.dim_space(d).size());
    std::string line = "OK jointexists " + name + " witness";
    std::vector<size_t> tup(sizes.size(), 0);
    size_t idx = 0;
    do {
      if (!r.witness[idx].is_zero()) {
        line += " (";
        for (size_t k = 0; k < tup.size(); ++k)
          line += (k ? "," : "") + p.dim_space(p.dims()[k]).atom_name(tup[k]);
        line += ")=" + r.witness[idx].str();
      }
      ++idx;
    } while ([&] {
      size_t k = tup.size();
      while (k > 0) {
        --k;
        if (++tup[k] < sizes[k]) return true;
        tup[k] = 0;
      }
      return false;
    }());
    return {line};
  }

  if (cmd == "fss") {
    TableParser tp{c};
    TExprPtr e = tp.texpr();
    if (!c.done()) throw SessionError("unexpected trailing input");
    std::set<std::string> free;
    texpr_free_vars(e, free);
    std::vector<std::string> vars(free.begin(), free.end());
    GuardTable t = texpr_eval(e, vars);
    if (t.nvars() == 0) return {"OK fss = " + t.as_scalar().str()};
    return {"OK fss = " + t.str()};
  }

  if (cmd == "pmf") {
    std::vector<std::string> vars{c.name()};
    while (c.eat(',')) vars.push_back(c.name());
    c.keyword("of");
    TermPtr term = parse_term(c.rest());
    for (const std::string& v : free_vars(term))
      if (std::find(vars.begin(), vars.end(), v) == vars.end())
        throw SessionError("variable " + v + " is not listed");
    PmfCheck r = is_pmf(gt_parse(term, vars));
    if (!r.ok) return {"FAIL pmf at " + r.reason};
    return {"OK pmf mass 1"};
  }

  throw SessionError("unknown command");
}

}  // namespace mpc
