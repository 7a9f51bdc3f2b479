#ifndef MPC_EVENTS_HPP
#define MPC_EVENTS_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "mpc/term.hpp"

namespace mpc {

// A finite sample space: ordered, distinct atom names. Events are the full
// power set, carried as bitmasks over the atom order.
class EventSpace {
public:
  EventSpace() = default;
  explicit EventSpace(std::vector<std::string> atoms);

  size_t size() const { return atoms_.size(); }
  const std::vector<std::string>& atoms() const { return atoms_; }
  const std::string& atom_name(size_t i) const { return atoms_[i]; }
  // Index of a named atom, or -1.
  int atom_index(const std::string& name) const;

  friend bool operator==(const EventSpace& a, const EventSpace& b) {
    return a.atoms_ == b.atoms_;
  }
  friend bool operator!=(const EventSpace& a, const EventSpace& b) { return !(a == b); }

private:
  std::vector<std::string> atoms_;
};

struct SpaceMismatch : std::runtime_error {
  SpaceMismatch() : std::runtime_error("events from different spaces") {}
};

class Event {
public:
  Event() = default;
  Event(EventSpace space, uint64_t bits);

  const EventSpace& space() const { return space_; }
  uint64_t bits() const { return bits_; }
  bool empty() const { return bits_ == 0; }
  bool full() const;
  size_t count() const;
  bool has_atom(size_t i) const { return bits_ >> i & 1; }
  // Indices of the atoms below this event, ascending.
  std::vector<size_t> atom_indices() const;
  bool is_atomic() const { return count() == 1; }

  Event operator&(const Event& o) const;
  Event operator|(const Event& o) const;
  Event operator~() const;

  friend bool operator==(const Event& a, const Event& b) {
    if (a.space_ != b.space_) throw SpaceMismatch();
    return a.bits_ == b.bits_;
  }
  friend bool operator!=(const Event& a, const Event& b) { return !(a == b); }

private:
  EventSpace space_;
  uint64_t bits_ = 0;
};

EventSpace make_space(const std::vector<std::string>& atoms);
Event ev_top(const EventSpace& s);
Event ev_bot(const EventSpace& s);
Event ev_atom(const EventSpace& s, const std::string& name);
Event ev_atom(const EventSpace& s, size_t index);
// All 2^n events of the space, by ascending bitmask.
std::vector<Event> all_events(const EventSpace& s);
// Render as T, F, or a '|' join of atom names.
std::string event_str(const Event& e);

// Syntactic event expressions: atoms by name, &, |, !, T, F.
struct EventExpr;
using EventExprPtr = std::shared_ptr<const EventExpr>;

struct EventExpr {
  enum class Kind { Top, Bot, Atom, And, Or, Not };
  Kind kind;
  std::string name;  // Atom
  EventExprPtr a, b;
};

EventExprPtr e_top();
EventExprPtr e_bot();
EventExprPtr e_atom(std::string name);
EventExprPtr e_and(EventExprPtr a, EventExprPtr b);
EventExprPtr e_or(EventExprPtr a, EventExprPtr b);
EventExprPtr e_not(EventExprPtr a);
std::string event_expr_str(const EventExprPtr& e);

struct UnknownAtom : std::runtime_error {
  explicit UnknownAtom(const std::string& name)
      : std::runtime_error("unknown atom: " + name) {}
};

Event eval_event(const EventExprPtr& e, const EventSpace& s);

// Precedence ! > & > |; parentheses; T and F constants.
EventExprPtr parse_event(const std::string& text);
// Parses a prefix of `text` starting at `pos`, advancing it.
EventExprPtr parse_event_prefix(const std::string& text, size_t& pos);

}  // namespace mpc

#endif
