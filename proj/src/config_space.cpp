#include "mpc/config_space.hpp"

#include <algorithm>
#include <stdexcept>

namespace mpc {

namespace {

ConfigExprPtr mk(ConfigExpr e) { return std::make_shared<const ConfigExpr>(std::move(e)); }

EventExprPtr event_to_expr(const Event& e) {
  if (e.empty()) return e_bot();
  EventExprPtr out;
  for (size_t i : e.atom_indices()) {
    EventExprPtr a = e_atom(e.space().atom_name(i));
    out = out ? e_or(out, a) : a;
  }
  return out;
}

}  // namespace

ConfigExprPtr cfg_empty() {
  return mk({ConfigExpr::Kind::Empty, "", nullptr, nullptr, nullptr, nullptr});
}
ConfigExprPtr cfg_object(std::string name) {
  return mk({ConfigExpr::Kind::Object, std::move(name), nullptr, nullptr, nullptr, nullptr});
}
ConfigExprPtr cfg_par(ConfigExprPtr a, ConfigExprPtr b) {
  return mk({ConfigExpr::Kind::Par, "", nullptr, nullptr, std::move(a), std::move(b)});
}
ConfigExprPtr cfg_guard(EventExprPtr e, ConfigExprPtr a) {
  return mk({ConfigExpr::Kind::Guard, "", std::move(e), nullptr, std::move(a), nullptr});
}
ConfigExprPtr cfg_yield(ConfigExprPtr a, CVExprPtr x) {
  return mk({ConfigExpr::Kind::Yield, "", nullptr, std::move(x), std::move(a), nullptr});
}

std::string config_expr_str(const ConfigExprPtr& c) {
  switch (c->kind) {
    case ConfigExpr::Kind::Empty: return "eps";
    case ConfigExpr::Kind::Object: return c->object;
    case ConfigExpr::Kind::Par:
      return "(" + config_expr_str(c->a) + " || " + config_expr_str(c->b) + ")";
    case ConfigExpr::Kind::Guard:
      return "(" + event_expr_str(c->event) + " :-> " + config_expr_str(c->a) + ")";
    case ConfigExpr::Kind::Yield:
      return "(" + config_expr_str(c->a) + " ~> " + cv_expr_str(c->yield) + ")";
  }
  return "?";
}

CanonConfig::CanonConfig(EventSpace space, std::vector<ConfigTriple> triples)
    : space_(std::move(space)) {
  for (ConfigTriple& t : triples) {
    if (t.event.space() != space_ || t.yield.space() != space_) throw SpaceMismatch();
    if (t.event.empty()) continue;
    triples_.push_back(std::move(t));
  }
  std::sort(triples_.begin(), triples_.end(), [](const ConfigTriple& a, const ConfigTriple& b) {
    if (a.event.bits() != b.event.bits()) return a.event.bits() < b.event.bits();
    if (a.object != b.object) return a.object < b.object;
    return a.yield.values() < b.yield.values();
  });
}

bool operator==(const CanonConfig& a, const CanonConfig& b) {
  if (a.space_ != b.space_) throw SpaceMismatch();
  for (size_t i = 0; i < a.space_.size(); ++i) {
    std::vector<std::pair<std::string, Rational>> here, there;
    for (const ConfigTriple& t : a.triples_)
      if (t.event.has_atom(i)) here.push_back({t.object, t.yield.at(i)});
    for (const ConfigTriple& t : b.triples_)
      if (t.event.has_atom(i)) there.push_back({t.object, t.yield.at(i)});
    std::sort(here.begin(), here.end());
    std::sort(there.begin(), there.end());
    if (here != there) return false;
  }
  return true;
}

namespace {

void canon_rec(const ConfigExprPtr& c, const EventSpace& space, const Event& guard,
               const CVExprPtr& yield, std::vector<ConfigTriple>& out) {
  switch (c->kind) {
    case ConfigExpr::Kind::Empty:
      return;
    case ConfigExpr::Kind::Object:
      out.push_back({guard, c->object,
                     yield ? cv_canon(yield, space) : cv_const(space, Rational(0))});
      return;
    case ConfigExpr::Kind::Par:
      canon_rec(c->a, space, guard, yield, out);
      canon_rec(c->b, space, guard, yield, out);
      return;
    case ConfigExpr::Kind::Guard:
      canon_rec(c->a, space, guard & eval_event(c->event, space), yield, out);
      return;
    case ConfigExpr::Kind::Yield:
      // The outermost attachment is the binding one, so an already-seen
      // yield shadows this one.
      canon_rec(c->a, space, guard, yield ? yield : c->yield, out);
      return;
  }
  throw std::logic_error("cfg_canon: bad kind");
}

}  // namespace

CanonConfig cfg_canon(const ConfigExprPtr& c, const EventSpace& space) {
  std::vector<ConfigTriple> triples;
  canon_rec(c, space, ev_top(space), nullptr, triples);
  return CanonConfig(space, std::move(triples));
}

CanonCV utility(const CanonConfig& c) {
  CanonCV acc = cv_const(c.space(), Rational(0));
  for (const ConfigTriple& t : c.triples()) acc = acc + cv_guarded(t.event, t.yield);
  return acc;
}

Rational expected_utility(const ConfigExprPtr& c, const WeightPF& p) {
  return e_p(utility(cfg_canon(c, p.space())), p);
}

namespace {

// Two-branch option paying `on` when the atom event holds and `off` when it
// does not, with distinct carrier objects.
ConfigExprPtr two_branch(const EventExprPtr& e, const std::string& c_on, const Rational& on,
                         const std::string& c_off, const Rational& off) {
  return cfg_par(cfg_guard(e, cfg_yield(cfg_object(c_on), cv_value(on))),
                 cfg_guard(e_not(e), cfg_yield(cfg_object(c_off), cv_value(off))));
}

}  // namespace

Rational elicit_indifference(const Rational& u1, const Rational& u2,
                             const Rational& u3, const Rational& u4) {
  Rational den = u4 - u2 + u1 - u3;
  if (den.is_zero())
    throw std::domain_error("indifference weight is undetermined for these payoffs");
  Rational p = (u4 - u2) / den;
  if (p.sgn() >= 0 && p <= Rational(1)) {
    // Substitute the weight back through the expected utilities of the two
    // options and insist they agree.
    EventSpace s = make_space({"e", "o"});
    WeightPF w(s, {p, Rational(1) - p});
    EventExprPtr e = e_atom("e");
    Rational eu1 = expected_utility(two_branch(e, "c1", u1, "c2", u2), w);
    Rational eu3 = expected_utility(two_branch(e, "c3", u3, "c4", u4), w);
    if (eu1 != eu3) throw std::logic_error("indifference weight failed verification");
  }
  return p;
}

Rational ask_threshold(const Rational& high, const Rational& low, const Rational& d) {
  if (!(low < high)) throw std::invalid_argument("the threshold needs low < high");
  return Rational(1) - d / (high - low);
}

bool prefers_asking(const WeightPF& p, const Event& e,
                    const Rational& high, const Rational& low, const Rational& d) {
  if (e.space() != p.space()) throw SpaceMismatch();
  EventExprPtr ev = event_to_expr(e);
  // Keeping the ticket: one object whose yield is high on the event, low off
  // it. Asking first: either way the holder ends up with the sure payoff
  // minus the asking price.
  ConfigExprPtr keep = cfg_yield(cfg_object("q1"),
                                 cv_add(cv_guard(ev, cv_value(high)),
                                        cv_guard(e_not(ev), cv_value(low))));
  ConfigExprPtr ask = cfg_par(
      cfg_guard(ev, cfg_yield(cfg_object("q1"), cv_value(high - d))),
      cfg_guard(e_not(ev), cfg_yield(cfg_object("q2"), cv_value(high - d))));
  return expected_utility(ask, p) > expected_utility(keep, p);
}

namespace {

struct ConfigParser {
  const std::string& text;
  size_t pos;

  void skip_ws() {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
  }
  bool lit(const char* s) {
    skip_ws();
    size_t n = std::char_traits<char>::length(s);
    if (text.compare(pos, n, s) != 0) return false;
    pos += n;
    return true;
  }
  [[noreturn]] void err(const std::string& msg) { throw ParseError(msg, pos + 1); }

  ConfigExprPtr par() {
    ConfigExprPtr e = guard();
    while (lit("||")) e = cfg_par(e, guard());
    return e;
  }

  ConfigExprPtr guard() {
    size_t save = pos;
    skip_ws();
    try {
      size_t p = pos;
      EventExprPtr ev = parse_event_prefix(text, p);
      size_t q = p;
      while (q < text.size() && (text[q] == ' ' || text[q] == '\t')) ++q;
      if (text.compare(q, 3, ":->") == 0) {
        pos = q + 3;
        return cfg_guard(ev, guard());
      }
    } catch (const ParseError&) {
    }
    pos = save;
    return yield();
  }

  ConfigExprPtr yield() {
    ConfigExprPtr e = primary();
    while (lit("~>")) e = cfg_yield(e, parse_cv_prefix(text, pos));
    return e;
  }

  ConfigExprPtr primary() {
    skip_ws();
    if (lit("(")) {
      ConfigExprPtr e = par();
      if (!lit(")")) err("expected ')'");
      return e;
    }
    if (pos < text.size() && (isalpha(static_cast<unsigned char>(text[pos])) || text[pos] == '_')) {
      size_t start = pos;
      while (pos < text.size() &&
             (isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
        ++pos;
      std::string name = text.substr(start, pos - start);
      if (name == "eps") return cfg_empty();
      return cfg_object(name);
    }
    err("expected a configuration");
  }
};

}  // namespace

ConfigExprPtr parse_config(const std::string& text) {
  ConfigParser p{text, 0};
  ConfigExprPtr e = p.par();
  p.skip_ws();
  if (p.pos != text.size()) throw ParseError("unexpected trailing input", p.pos + 1);
  return e;
}

}  // namespace mpc
