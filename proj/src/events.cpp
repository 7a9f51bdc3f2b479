#include "mpc/events.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <set>
#include <stdexcept>

namespace mpc {

EventSpace::EventSpace(std::vector<std::string> atoms) : atoms_(std::move(atoms)) {
  if (atoms_.empty()) throw std::invalid_argument("event space needs at least one atom");
  if (atoms_.size() > 64) throw std::invalid_argument("event space limited to 64 atoms");
  std::set<std::string> seen;
  for (const auto& a : atoms_) {
    if (a.empty()) throw std::invalid_argument("empty atom name");
    if (!seen.insert(a).second) throw std::invalid_argument("duplicate atom name: " + a);
  }
}

int EventSpace::atom_index(const std::string& name) const {
  for (size_t i = 0; i < atoms_.size(); ++i)
    if (atoms_[i] == name) return static_cast<int>(i);
  return -1;
}

static uint64_t full_mask(const EventSpace& s) {
  return s.size() == 64 ? ~uint64_t{0} : (uint64_t{1} << s.size()) - 1;
}

Event::Event(EventSpace space, uint64_t bits) : space_(std::move(space)), bits_(bits) {
  if (bits_ & ~full_mask(space_)) throw std::invalid_argument("event bits outside space");
}

bool Event::full() const { return bits_ == full_mask(space_); }
size_t Event::count() const { return static_cast<size_t>(std::popcount(bits_)); }

std::vector<size_t> Event::atom_indices() const {
  std::vector<size_t> out;
  for (size_t i = 0; i < space_.size(); ++i)
    if (has_atom(i)) out.push_back(i);
  return out;
}

Event Event::operator&(const Event& o) const {
  if (space_ != o.space_) throw SpaceMismatch();
  return Event(space_, bits_ & o.bits_);
}
Event Event::operator|(const Event& o) const {
  if (space_ != o.space_) throw SpaceMismatch();
  return Event(space_, bits_ | o.bits_);
}
Event Event::operator~() const { return Event(space_, ~bits_ & full_mask(space_)); }

EventSpace make_space(const std::vector<std::string>& atoms) { return EventSpace(atoms); }
Event ev_top(const EventSpace& s) { return Event(s, full_mask(s)); }
Event ev_bot(const EventSpace& s) { return Event(s, 0); }
Event ev_atom(const EventSpace& s, const std::string& name) {
  int i = s.atom_index(name);
  if (i < 0) throw UnknownAtom(name);
  return Event(s, uint64_t{1} << i);
}
Event ev_atom(const EventSpace& s, size_t index) {
  if (index >= s.size()) throw std::invalid_argument("atom index out of range");
  return Event(s, uint64_t{1} << index);
}

std::vector<Event> all_events(const EventSpace& s) {
  std::vector<Event> out;
  uint64_t n = full_mask(s);
  out.reserve(static_cast<size_t>(n) + 1);
  for (uint64_t m = 0;; ++m) {
    out.emplace_back(s, m);
    if (m == n) break;
  }
  return out;
}

std::string event_str(const Event& e) {
  if (e.empty()) return "F";
  if (e.full()) return "T";
  std::string out;
  for (size_t i : e.atom_indices()) {
    if (!out.empty()) out += "|";
    out += e.space().atom_name(i);
  }
  return out;
}

namespace {
EventExprPtr mk(EventExpr::Kind k, std::string n, EventExprPtr a, EventExprPtr b) {
  auto e = std::make_shared<EventExpr>();
  e->kind = k;
  e->name = std::move(n);
  e->a = std::move(a);
  e->b = std::move(b);
  return e;
}
}  // namespace

EventExprPtr e_top() { return mk(EventExpr::Kind::Top, "", nullptr, nullptr); }
EventExprPtr e_bot() { return mk(EventExpr::Kind::Bot, "", nullptr, nullptr); }
EventExprPtr e_atom(std::string name) { return mk(EventExpr::Kind::Atom, std::move(name), nullptr, nullptr); }
EventExprPtr e_and(EventExprPtr a, EventExprPtr b) { return mk(EventExpr::Kind::And, "", std::move(a), std::move(b)); }
EventExprPtr e_or(EventExprPtr a, EventExprPtr b) { return mk(EventExpr::Kind::Or, "", std::move(a), std::move(b)); }
EventExprPtr e_not(EventExprPtr a) { return mk(EventExpr::Kind::Not, "", std::move(a), nullptr); }

std::string event_expr_str(const EventExprPtr& e) {
  switch (e->kind) {
    case EventExpr::Kind::Top: return "T";
    case EventExpr::Kind::Bot: return "F";
    case EventExpr::Kind::Atom: return e->name;
    case EventExpr::Kind::And:
      return "(" + event_expr_str(e->a) + " & " + event_expr_str(e->b) + ")";
    case EventExpr::Kind::Or:
      return "(" + event_expr_str(e->a) + " | " + event_expr_str(e->b) + ")";
    case EventExpr::Kind::Not: return "!" + event_expr_str(e->a);
  }
  return "?";
}

Event eval_event(const EventExprPtr& e, const EventSpace& s) {
  switch (e->kind) {
    case EventExpr::Kind::Top: return ev_top(s);
    case EventExpr::Kind::Bot: return ev_bot(s);
    case EventExpr::Kind::Atom: return ev_atom(s, e->name);
    case EventExpr::Kind::And: return eval_event(e->a, s) & eval_event(e->b, s);
    case EventExpr::Kind::Or: return eval_event(e->a, s) | eval_event(e->b, s);
    case EventExpr::Kind::Not: return ~eval_event(e->a, s);
  }
  throw std::logic_error("bad event expr kind");
}

namespace {

struct EventParser {
  const std::string& text;
  size_t pos;

  void skip_ws() {
    while (pos < text.size() && isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }
  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }

  EventExprPtr or_level() {
    EventExprPtr e = and_level();
    while (peek() == '|') {
      ++pos;
      e = e_or(e, and_level());
    }
    return e;
  }
  EventExprPtr and_level() {
    EventExprPtr e = not_level();
    while (peek() == '&') {
      ++pos;
      e = e_and(e, not_level());
    }
    return e;
  }
  EventExprPtr not_level() {
    if (peek() == '!') {
      ++pos;
      return e_not(not_level());
    }
    return primary();
  }
  EventExprPtr primary() {
    char c = peek();
    if (c == '(') {
      ++pos;
      EventExprPtr e = or_level();
      if (peek() != ')') throw ParseError("expected ')'", pos + 1);
      ++pos;
      return e;
    }
    if (isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = pos;
      while (pos < text.size() &&
             (isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
        ++pos;
      std::string name = text.substr(start, pos - start);
      if (name == "T") return e_top();
      if (name == "F") return e_bot();
      return e_atom(name);
    }
    throw ParseError("expected event expression", pos + 1);
  }
};

}  // namespace

EventExprPtr parse_event_prefix(const std::string& text, size_t& pos) {
  EventParser p{text, pos};
  EventExprPtr e = p.or_level();
  pos = p.pos;
  return e;
}

EventExprPtr parse_event(const std::string& text) {
  size_t pos = 0;
  EventExprPtr e = parse_event_prefix(text, pos);
  while (pos < text.size() && isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  if (pos != text.size()) throw ParseError("unexpected trailing input", pos + 1);
  return e;
}

}  // namespace mpc
