#ifndef MPC_PROBABILITY_HPP
#define MPC_PROBABILITY_HPP

#include <optional>
#include <string>
#include <vector>

#include "mpc/events.hpp"
#include "mpc/rational.hpp"

namespace mpc {

// An arbitrary assignment of rationals to all events of a space, indexed by
// event bitmask. No laws are assumed; audits decide which ones hold.
class TablePF {
public:
  TablePF(EventSpace space, std::vector<Rational> values);

  const EventSpace& space() const { return space_; }
  const std::vector<Rational>& values() const { return values_; }
  Rational eval(const Event& e) const;

private:
  EventSpace space_;
  std::vector<Rational> values_;
};

struct BadWeights : std::invalid_argument {
  explicit BadWeights(const std::string& what) : std::invalid_argument(what) {}
};

// Nonnegative atom weights summing to 1; events get the sum of their atoms.
class WeightPF {
public:
  WeightPF(EventSpace space, std::vector<Rational> weights);

  const EventSpace& space() const { return space_; }
  const std::vector<Rational>& weights() const { return weights_; }
  Rational atom_weight(size_t i) const { return weights_[i]; }
  Rational eval(const Event& e) const;
  // All 2^n event values as a table.
  TablePF table() const;

private:
  EventSpace space_;
  std::vector<Rational> weights_;
};

// The three conditioning operators. They agree when the condition has
// positive value and differ in what they return on a null condition:
// p0 gives 0, p1 gives 1 and ps gives the unconditioned value.
enum class CondVariant { p0, p1, ps };
Rational cond_p(CondVariant v, const TablePF& p, const Event& x, const Event& y);

enum class PfAxiom {
  Unit,          // P(T) = 1
  Zero,          // P(F) = 0
  Nonneg,        // P(x) = |P(x)|
  Modularity,    // P(x|y) + P(x&y) = P(x) + P(y)
  Cancellation,  // P(x&y) * P(y) * P(y)^-1 = P(x&y)
  Bayes,         // p0(x|y) = p0(y|x) * P(x) / P(y)
  BayesTotal,    // p0(x|y) = p0(y|x) * P(x) * (p0(y|z)P(z) + p0(y|!z)P(!z))^-1
};

const char* axiom_name(PfAxiom a);

struct AxiomViolation {
  PfAxiom axiom;
  std::vector<Event> where;  // instantiation of x, then y, then z, as needed
  Rational lhs, rhs;
  std::string str() const;
};

// First violation over all event instantiations, scanning by ascending
// bitmask with x outermost, or nothing when the axiom holds everywhere.
std::optional<AxiomViolation> check_axiom(const TablePF& p, PfAxiom a);
// Axioms in order; first violation wins.
std::optional<AxiomViolation> check_axioms(const TablePF& p, const std::vector<PfAxiom>& axioms);

// Named axiom systems: PF, WPF, PF', BR, BR2.
std::optional<std::vector<PfAxiom>> axiom_system(const std::string& name);

// Smallest table (by grid order, last event position varying fastest) that
// satisfies every `satisfy` axiom and violates at least one axiom of every
// system in `violate`. Values are drawn from `grid`.
std::optional<TablePF> search_counterexample(const EventSpace& space,
                                             const std::vector<PfAxiom>& satisfy,
                                             const std::vector<std::vector<PfAxiom>>& violate,
                                             const std::vector<Rational>& grid);

}  // namespace mpc

#endif
