#include "mpc/guard_table.hpp"

#include <algorithm>
#include <numeric>

namespace mpc {

std::optional<std::vector<GuardRow>> rref(
    size_t nvars,
    std::vector<std::pair<std::vector<Rational>, Rational>> eqs,
    const std::vector<size_t>& priority) {
  std::vector<GuardRow> done;
  std::vector<bool> used(eqs.size(), false);
  for (size_t col : priority) {
    size_t pick = eqs.size();
    for (size_t r = 0; r < eqs.size(); ++r)
      if (!used[r] && !eqs[r].first[col].is_zero()) {
        pick = r;
        break;
      }
    if (pick == eqs.size()) continue;
    used[pick] = true;
    auto& [pc, pr] = eqs[pick];
    Rational inv = pc[col].inv();
    for (auto& c : pc) c *= inv;
    pr *= inv;
    for (size_t r = 0; r < eqs.size(); ++r) {
      if (r == pick || eqs[r].first[col].is_zero()) continue;
      Rational f = eqs[r].first[col];
      for (size_t i = 0; i < nvars; ++i) eqs[r].first[i] -= f * pc[i];
      eqs[r].second -= f * pr;
    }
    for (auto& row : done) {
      if (row.coeffs[col].is_zero()) continue;
      Rational f = row.coeffs[col];
      for (size_t i = 0; i < nvars; ++i) row.coeffs[i] -= f * pc[i];
      row.rhs -= f * pr;
    }
    done.push_back({pc, pr, col});
  }
  for (size_t r = 0; r < eqs.size(); ++r) {
    if (used[r]) continue;
    bool zero = std::all_of(eqs[r].first.begin(), eqs[r].first.end(),
                            [](const Rational& c) { return c.is_zero(); });
    if (!zero) throw std::logic_error("rref left an unused nonzero row");
    if (!eqs[r].second.is_zero()) return std::nullopt;  // 0 = c, inconsistent
  }
  // Order rows by the priority position of their pivot.
  std::vector<size_t> rank(nvars, 0);
  for (size_t i = 0; i < priority.size(); ++i) rank[priority[i]] = i;
  std::sort(done.begin(), done.end(),
            [&](const GuardRow& a, const GuardRow& b) { return rank[a.pivot] < rank[b.pivot]; });
  return done;
}

static std::vector<size_t> natural_priority(size_t nvars) {
  std::vector<size_t> p(nvars);
  std::iota(p.begin(), p.end(), 0);
  return p;
}

static std::pair<std::vector<Rational>, Rational> affine_to_eq(const Poly& p) {
  // p = 0 with p affine becomes sum(coeffs * v) = -constant.
  std::pair<std::vector<Rational>, Rational> eq{std::vector<Rational>(p.nvars()), Rational()};
  for (const auto& [m, c] : p.terms()) {
    size_t var = p.nvars();
    for (size_t i = 0; i < p.nvars(); ++i)
      if (m[i]) {
        var = i;
        break;
      }
    if (var == p.nvars()) eq.second = -c;
    else eq.first[var] = c;
  }
  return eq;
}

std::optional<Guard> Guard::from_equations(size_t nvars, const std::vector<Poly>& eqs) {
  return from_equations(nvars, eqs, natural_priority(nvars));
}

std::optional<Guard> Guard::from_equations(size_t nvars, const std::vector<Poly>& eqs,
                                           const std::vector<size_t>& priority) {
  std::vector<std::pair<std::vector<Rational>, Rational>> rows;
  rows.reserve(eqs.size());
  for (const Poly& p : eqs) {
    if (!p.is_affine()) throw std::invalid_argument("guard equation must be affine");
    rows.push_back(affine_to_eq(p));
  }
  auto r = rref(nvars, std::move(rows), priority);
  if (!r) return std::nullopt;
  Guard g(nvars);
  g.rows_ = std::move(*r);
  return g;
}

std::optional<Guard> Guard::merged(const Guard& o) const {
  std::vector<Poly> eqs = equations();
  for (Poly& p : o.equations()) eqs.push_back(std::move(p));
  return from_equations(nvars_, eqs);
}

std::vector<size_t> Guard::pivot_vars() const {
  std::vector<size_t> out;
  out.reserve(rows_.size());
  for (const auto& r : rows_) out.push_back(r.pivot);
  return out;
}

bool Guard::holds_at(const std::vector<Rational>& point) const {
  for (const auto& row : rows_) {
    Rational v;
    for (size_t i = 0; i < nvars_; ++i)
      if (!row.coeffs[i].is_zero()) v += row.coeffs[i] * point[i];
    if (v != row.rhs) return false;
  }
  return true;
}

Poly Guard::binding(const GuardRow& row) const {
  Poly b = Poly::constant(nvars_, row.rhs);
  for (size_t i = 0; i < nvars_; ++i) {
    if (i == row.pivot || row.coeffs[i].is_zero()) continue;
    b = b - Poly::variable(nvars_, i).scaled(row.coeffs[i]);
  }
  return b;
}

Poly Guard::reduce(const Poly& p) const {
  Poly out = p;
  for (const auto& row : rows_)
    if (out.uses_var(row.pivot)) out = out.substituted(row.pivot, binding(row));
  return out;
}

std::vector<Poly> Guard::equations() const {
  std::vector<Poly> out;
  out.reserve(rows_.size());
  for (const auto& row : rows_) {
    Poly e = Poly::constant(nvars_, -row.rhs);
    for (size_t i = 0; i < nvars_; ++i)
      if (!row.coeffs[i].is_zero()) e = e + Poly::variable(nvars_, i).scaled(row.coeffs[i]);
    out.push_back(std::move(e));
  }
  return out;
}

bool operator==(const Guard& a, const Guard& b) {
  if (a.nvars_ != b.nvars_ || a.rows_.size() != b.rows_.size()) return false;
  for (size_t i = 0; i < a.rows_.size(); ++i) {
    if (a.rows_[i].pivot != b.rows_[i].pivot || a.rows_[i].rhs != b.rows_[i].rhs ||
        a.rows_[i].coeffs != b.rows_[i].coeffs)
      return false;
  }
  return true;
}

bool operator<(const Guard& a, const Guard& b) {
  if (a.nvars() != b.nvars()) return a.nvars() < b.nvars();
  const auto& ra = a.rows();
  const auto& rb = b.rows();
  if (ra.size() != rb.size()) return ra.size() < rb.size();
  for (size_t i = 0; i < ra.size(); ++i) {
    if (ra[i].pivot != rb[i].pivot) return ra[i].pivot < rb[i].pivot;
    for (size_t j = 0; j < a.nvars(); ++j)
      if (ra[i].coeffs[j] != rb[i].coeffs[j]) return ra[i].coeffs[j] < rb[i].coeffs[j];
    if (ra[i].rhs != rb[i].rhs) return ra[i].rhs < rb[i].rhs;
  }
  return false;
}

std::string Guard::str(const std::vector<std::string>& names) const {
  std::string out = "(";
  bool first = true;
  for (const auto& row : rows_) {
    if (!first) out += ", ";
    first = false;
    out += names[row.pivot] + "=" + binding(row).str(names);
  }
  return out + ")";
}

bool subspace_implies(const Guard& sub, const Guard& sup) {
  for (const Poly& eq : sup.equations())
    if (!sub.reduce(eq).is_zero()) return false;
  return true;
}

bool operator==(const GtEntry& a, const GtEntry& b) {
  return a.guard == b.guard && a.coeff == b.coeff;
}

GuardTable::GuardTable(std::vector<std::string> vars) : vars_(std::move(vars)) {}

int GuardTable::var_index(const std::string& name) const {
  for (size_t i = 0; i < vars_.size(); ++i)
    if (vars_[i] == name) return static_cast<int>(i);
  return -1;
}

GuardTable GuardTable::from_poly(std::vector<std::string> vars, const Poly& p) {
  GtEntry e{Guard(vars.size()), p};
  return from_entries(std::move(vars), {std::move(e)});
}

GuardTable GuardTable::from_entries(std::vector<std::string> vars,
                                    std::vector<GtEntry> entries) {
  GuardTable t(std::move(vars));
  for (auto& e : entries) {
    e.coeff = e.guard.reduce(e.coeff);
    if (e.coeff.is_zero()) continue;
    t.entries_.push_back(std::move(e));
  }
  std::sort(t.entries_.begin(), t.entries_.end(),
            [](const GtEntry& a, const GtEntry& b) { return a.guard < b.guard; });
  std::vector<GtEntry> merged;
  for (auto& e : t.entries_) {
    if (!merged.empty() && merged.back().guard == e.guard) {
      merged.back().coeff = merged.back().coeff + e.coeff;
      if (merged.back().coeff.is_zero()) merged.pop_back();
    } else {
      merged.push_back(std::move(e));
    }
  }
  t.entries_ = std::move(merged);
  return t;
}

Rational GuardTable::eval(const std::vector<Rational>& point) const {
  if (point.size() != vars_.size()) throw std::invalid_argument("point arity mismatch");
  Rational out;
  for (const auto& e : entries_)
    if (e.guard.holds_at(point)) out += e.coeff.eval(point);
  return out;
}

Rational GuardTable::as_scalar() const {
  if (!vars_.empty()) throw std::logic_error("as_scalar on a table with variables");
  return eval({});
}

std::string GuardTable::str() const {
  if (entries_.empty()) return "[]";
  std::string out = "[ ";
  bool first = true;
  for (const auto& e : entries_) {
    if (!first) out += " ; ";
    first = false;
    out += e.guard.str(vars_) + " -> " + e.coeff.str(vars_);
  }
  return out + " ]";
}

static void check_same_vars(const GuardTable& a, const GuardTable& b) {
  if (a.vars() != b.vars())
    throw std::invalid_argument("guard tables over different variable lists");
}

GuardTable gt_add(const GuardTable& a, const GuardTable& b) {
  check_same_vars(a, b);
  std::vector<GtEntry> all = a.entries();
  all.insert(all.end(), b.entries().begin(), b.entries().end());
  return GuardTable::from_entries(a.vars(), std::move(all));
}

GuardTable gt_sub(const GuardTable& a, const GuardTable& b) {
  return gt_add(a, gt_scale(b, Rational(-1)));
}

GuardTable gt_scale(const GuardTable& a, const Rational& c) {
  std::vector<GtEntry> out;
  if (!c.is_zero()) {
    out = a.entries();
    for (auto& e : out) e.coeff = e.coeff.scaled(c);
  }
  return GuardTable::from_entries(a.vars(), std::move(out));
}

GuardTable gt_mul(const GuardTable& a, const GuardTable& b) {
  check_same_vars(a, b);
  std::vector<GtEntry> out;
  for (const auto& ea : a.entries())
    for (const auto& eb : b.entries()) {
      auto g = ea.guard.merged(eb.guard);
      if (!g) continue;
      out.push_back({std::move(*g), ea.coeff * eb.coeff});
    }
  return GuardTable::from_entries(a.vars(), std::move(out));
}

GuardTable point_entry_table(
    const std::vector<std::string>& vars,
    const std::vector<std::pair<std::vector<Rational>, Rational>>& points) {
  std::vector<GtEntry> entries;
  for (const auto& [pt, val] : points) {
    if (pt.size() != vars.size()) throw std::invalid_argument("point arity mismatch");
    std::vector<Poly> eqs;
    for (size_t i = 0; i < vars.size(); ++i)
      eqs.push_back(Poly::variable(vars.size(), i) -
                    Poly::constant(vars.size(), pt[i]));
    auto g = Guard::from_equations(vars.size(), eqs);
    entries.push_back({std::move(*g), Poly::constant(vars.size(), val)});
  }
  return GuardTable::from_entries(vars, std::move(entries));
}

// ---------------------------------------------------------------------------
// Parsing terms into tables.

namespace {

// A product factor after flattening: either an indicator around an argument
// term, or an opaque factor parsed under each guard system later.
struct Factor {
  enum class Kind { IndicatorZero, IndicatorOne, Opaque } kind;
  TermPtr arg;
};

bool is_one_shape(const TermPtr& t, TermPtr& arg) {
  if (t->kind != Term::Kind::Mul) return false;
  if (t->b && t->b->kind == Term::Kind::Inv && term_equal(t->a, t->b->a)) {
    arg = t->a;
    return true;
  }
  if (t->a && t->a->kind == Term::Kind::Inv && term_equal(t->b, t->a->a)) {
    arg = t->b;
    return true;
  }
  return false;
}

bool is_zero_shape(const TermPtr& t, TermPtr& arg) {
  // 1 - p * p^-1, in either operand order.
  if (t->kind != Term::Kind::Add) return false;
  auto side = [&](const TermPtr& one, const TermPtr& rest) {
    if (one->kind != Term::Kind::Const || !one->value.is_one()) return false;
    if (rest->kind != Term::Kind::Neg) return false;
    return is_one_shape(rest->a, arg);
  };
  return side(t->a, t->b) || side(t->b, t->a);
}

struct Product {
  Rational sign{1};
  std::vector<Factor> factors;
};

class TableParser {
public:
  TableParser(const std::vector<std::string>& vars) : vars_(vars), n_(vars.size()) {}

  GuardTable run(const TermPtr& term) {
    std::vector<GtEntry> entries;
    for (const auto& prod : flatten_sum(term)) emit(prod, entries);
    return GuardTable::from_entries(vars_, std::move(entries));
  }

private:
  const std::vector<std::string>& vars_;
  size_t n_;

  int var_index(const std::string& name) const {
    for (size_t i = 0; i < n_; ++i)
      if (vars_[i] == name) return static_cast<int>(i);
    return -1;
  }

  std::vector<Product> flatten_sum(const TermPtr& t, bool negate = false) {
    TermPtr arg;
    if (t->kind == Term::Kind::Add && !is_zero_shape(t, arg)) {
      auto out = flatten_sum(t->a, negate);
      auto rhs = flatten_sum(t->b, negate);
      out.insert(out.end(), rhs.begin(), rhs.end());
      return out;
    }
    if (t->kind == Term::Kind::Neg) return flatten_sum(t->a, !negate);
    std::vector<Product> prods = flatten_product(t);
    if (negate)
      for (auto& p : prods) p.sign = -p.sign;
    return prods;
  }

  // Distributes sums inside products, keeping indicator shapes atomic so the
  // guard analysis sees them whole.
  std::vector<Product> flatten_product(const TermPtr& t) {
    TermPtr arg;
    if (is_one_shape(t, arg)) return {{Rational(1), {{Factor::Kind::IndicatorOne, arg}}}};
    if (is_zero_shape(t, arg)) return {{Rational(1), {{Factor::Kind::IndicatorZero, arg}}}};
    if (t->kind == Term::Kind::Neg) {
      auto out = flatten_product(t->a);
      for (auto& p : out) p.sign = -p.sign;
      return out;
    }
    if (t->kind == Term::Kind::Mul) {
      std::vector<Product> out;
      for (const auto& left : flatten_product(t->a))
        for (const auto& right : flatten_product(t->b)) {
          Product p{left.sign * right.sign, left.factors};
          p.factors.insert(p.factors.end(), right.factors.begin(), right.factors.end());
          out.push_back(std::move(p));
        }
      return out;
    }
    if (t->kind == Term::Kind::Add) {
      std::vector<Product> out;
      for (const auto& p : flatten_sum(t)) out.push_back(p);
      return out;
    }
    return {{Rational(1), {{Factor::Kind::Opaque, t}}}};
  }

  // Signed guard systems an indicator factor expands to.
  struct SignedGuard {
    Rational weight;
    Guard guard;
  };

  // Indicator factors refine the current guard systems; a factor whose
  // argument is not yet analyzable (for instance sign of a variable another
  // indicator will pin) is retried after the rest have been applied.
  void emit(const Product& prod, std::vector<GtEntry>& entries) {
    std::vector<SignedGuard> systems{{prod.sign, Guard(n_)}};
    std::vector<TermPtr> opaque;
    std::vector<Factor> pending;
    for (const auto& f : prod.factors) {
      if (f.kind == Factor::Kind::Opaque) opaque.push_back(f.arg);
      else pending.push_back(f);
    }
    while (!pending.empty()) {
      bool progressed = false;
      std::vector<Factor> stuck;
      for (const auto& f : pending) {
        std::vector<SignedGuard> next;
        try {
          for (const auto& sg : systems) {
            std::vector<Guard> zero_systems = constraint_disjuncts(f.arg, sg.guard);
            if (f.kind == Factor::Kind::IndicatorOne) {
              // one(p) = 1 - zero(p), the disjuncts being pairwise disjoint
              next.push_back(sg);
              for (const auto& z : zero_systems)
                if (auto m = sg.guard.merged(z)) next.push_back({-sg.weight, std::move(*m)});
            } else {
              for (const auto& z : zero_systems)
                if (auto m = sg.guard.merged(z)) next.push_back({sg.weight, std::move(*m)});
            }
          }
        } catch (const GtUnsupported&) {
          stuck.push_back(f);
          continue;
        }
        systems = std::move(next);
        progressed = true;
        if (systems.empty()) return;  // indicator is identically zero here
      }
      if (!progressed) {
        // Re-run one stuck factor outside the try to surface its error.
        for (const auto& sg : systems) constraint_disjuncts(stuck.front().arg, sg.guard);
        throw std::logic_error("stuck indicator factor parsed cleanly on retry");
      }
      pending = std::move(stuck);
    }
    for (const auto& sg : systems) {
      Poly coeff = Poly::constant(n_, sg.weight);
      for (const auto& t : opaque) coeff = coeff * eval_under(t, sg.guard);
      coeff = sg.guard.reduce(coeff);
      if (!coeff.is_zero()) entries.push_back({sg.guard, std::move(coeff)});
    }
  }

  // The disjoint guard systems where an indicator argument vanishes, relative
  // to an enclosing system already in force.
  std::vector<Guard> constraint_disjuncts(const TermPtr& arg, const Guard& under) {
    Poly p = eval_under(arg, under);
    if (p.is_zero()) return {Guard(n_)};
    if (p.is_constant()) return {};
    if (p.is_affine()) {
      auto g = Guard::from_equations(n_, {p});
      if (!g) return {};
      return {std::move(*g)};
    }
    auto used = p.used_vars();
    if (used.size() == 1) return root_disjuncts(p, used[0]);
    return sum_of_squares_disjuncts(arg, under);
  }

  std::vector<Guard> root_disjuncts(const Poly& p, size_t var) {
    std::vector<Guard> out;
    for (const Rational& r : rational_roots(p, var)) {
      Poly eq = Poly::variable(n_, var) - Poly::constant(n_, r);
      out.push_back(std::move(*Guard::from_equations(n_, {eq})));
    }
    return out;
  }

  // Sums of squares vanish exactly where every summand does; each summand
  // must be a square of an affine or univariate form, optionally scaled by a
  // positive rational.
  std::vector<Guard> sum_of_squares_disjuncts(const TermPtr& arg, const Guard& under) {
    std::vector<std::vector<Guard>> conjuncts;
    collect_square_summands(arg, false, under, conjuncts);
    std::vector<Guard> acc{Guard(n_)};
    for (const auto& options : conjuncts) {
      std::vector<Guard> next;
      for (const auto& g : acc)
        for (const auto& o : options)
          if (auto m = g.merged(o)) next.push_back(std::move(*m));
      acc = std::move(next);
      if (acc.empty()) return {};
    }
    return acc;
  }

  void collect_square_summands(const TermPtr& t, bool negated, const Guard& under,
                               std::vector<std::vector<Guard>>& out) {
    if (t->kind == Term::Kind::Add) {
      collect_square_summands(t->a, negated, under, out);
      collect_square_summands(t->b, negated, under, out);
      return;
    }
    if (t->kind == Term::Kind::Neg) {
      collect_square_summands(t->a, !negated, under, out);
      return;
    }
    Rational scale(1);
    TermPtr body = t;
    if (body->kind == Term::Kind::Mul && body->a->kind == Term::Kind::Const) {
      scale = body->a->value;
      body = body->b;
    } else if (body->kind == Term::Kind::Mul && body->b->kind == Term::Kind::Const) {
      scale = body->b->value;
      body = body->a;
    }
    if (negated) scale = -scale;
    if (body->kind == Term::Kind::Const) {
      Rational v = scale * body->value;
      if (v.is_zero()) return;             // contributes nothing
      if (v.sgn() > 0) {
        out.push_back({});                  // positive offset: never zero
        return;
      }
      throw GtUnsupported("indicator argument is not a supported pattern", term_str(t));
    }
    if (body->kind != Term::Kind::Mul || !term_equal(body->a, body->b) || scale.sgn() <= 0)
      throw GtUnsupported("indicator argument is not a supported pattern", term_str(t));
    Poly q = eval_under(body->a, under);
    if (q.is_zero()) return;
    std::vector<Guard> options;
    if (q.is_constant()) {
      out.push_back({});  // nonzero constant squared: never zero
      return;
    }
    if (q.is_affine()) {
      options.push_back(std::move(*Guard::from_equations(n_, {q})));
    } else {
      auto used = q.used_vars();
      if (used.size() != 1)
        throw GtUnsupported("indicator argument is not a supported pattern", term_str(body));
      options = root_disjuncts(q, used[0]);
    }
    out.push_back(std::move(options));
  }

  // Turns a term into a polynomial relative to a guard: pinned variables are
  // substituted first, so sign and inverse only ever see constants.
  Poly eval_under(const TermPtr& t, const Guard& g) {
    switch (t->kind) {
      case Term::Kind::Const: return Poly::constant(n_, t->value);
      case Term::Kind::Var: {
        int i = var_index(t->name);
        if (i < 0) throw GtUnsupported("unknown table variable", t->name);
        return g.reduce(Poly::variable(n_, static_cast<size_t>(i)));
      }
      case Term::Kind::Add: return eval_under(t->a, g) + eval_under(t->b, g);
      case Term::Kind::Neg: return -eval_under(t->a, g);
      case Term::Kind::Mul: {
        TermPtr arg;
        if (is_one_shape(t, arg)) {
          Poly p = eval_under(arg, g);
          if (!p.is_constant())
            throw GtUnsupported("indicator nested outside the supported patterns",
                                term_str(t));
          return Poly::constant(n_, p.constant_value().is_zero() ? Rational(0) : Rational(1));
        }
        return eval_under(t->a, g) * eval_under(t->b, g);
      }
      case Term::Kind::Inv: {
        Poly p = eval_under(t->a, g);
        if (!p.is_constant())
          throw GtUnsupported("inverse of a non-constant subterm", term_str(t));
        return Poly::constant(n_, p.constant_value().inv());
      }
      case Term::Kind::Sign: {
        Poly p = eval_under(t->a, g);
        if (!p.is_constant())
          throw GtUnsupported("sign of a non-constant subterm", term_str(t));
        return Poly::constant(n_, p.constant_value().sign());
      }
    }
    throw std::logic_error("bad term kind");
  }
};

}  // namespace

GuardTable gt_parse(const TermPtr& term, const std::vector<std::string>& vars) {
  return TableParser(vars).run(term);
}

}  // namespace mpc
