#include "mpc/probability.hpp"

#include <stdexcept>

namespace mpc {

TablePF::TablePF(EventSpace space, std::vector<Rational> values)
    : space_(std::move(space)), values_(std::move(values)) {
  if (values_.size() != (size_t{1} << space_.size()))
    throw std::invalid_argument("table needs one value per event");
}

Rational TablePF::eval(const Event& e) const {
  if (e.space() != space_) throw SpaceMismatch();
  return values_[e.bits()];
}

WeightPF::WeightPF(EventSpace space, std::vector<Rational> weights)
    : space_(std::move(space)), weights_(std::move(weights)) {
  if (weights_.size() != space_.size())
    throw BadWeights("need one weight per atom");
  Rational total;
  for (const Rational& w : weights_) {
    if (w.sgn() < 0) throw BadWeights("negative weight " + w.str());
    total += w;
  }
  if (!total.is_one()) throw BadWeights("weights sum to " + total.str() + ", not 1");
}

Rational WeightPF::eval(const Event& e) const {
  if (e.space() != space_) throw SpaceMismatch();
  Rational total;
  for (size_t i : e.atom_indices()) total += weights_[i];
  return total;
}

TablePF WeightPF::table() const {
  std::vector<Rational> values;
  for (const Event& e : all_events(space_)) values.push_back(eval(e));
  return TablePF(space_, std::move(values));
}

Rational cond_p(CondVariant v, const TablePF& p, const Event& x, const Event& y) {
  Rational py = p.eval(y);
  Rational joint = p.eval(x & y) * py.inv();
  if (!py.is_zero()) return joint;
  switch (v) {
    case CondVariant::p0: return joint;  // 0, since the inverse of 0 is 0
    case CondVariant::p1: return Rational(1);
    case CondVariant::ps: return p.eval(x);
  }
  throw std::logic_error("cond_p: bad variant");
}

const char* axiom_name(PfAxiom a) {
  switch (a) {
    case PfAxiom::Unit: return "unit";
    case PfAxiom::Zero: return "zero";
    case PfAxiom::Nonneg: return "nonneg";
    case PfAxiom::Modularity: return "modularity";
    case PfAxiom::Cancellation: return "cancellation";
    case PfAxiom::Bayes: return "bayes";
    case PfAxiom::BayesTotal: return "bayes-total";
  }
  return "?";
}

std::string AxiomViolation::str() const {
  std::string s = axiom_name(axiom);
  if (where.empty()) return s + " at value=" + lhs.str() + ", expected=" + rhs.str();
  static const char* names[] = {"x", "y", "z"};
  s += " at ";
  for (size_t i = 0; i < where.size(); ++i) {
    if (i) s += ", ";
    s += std::string(names[i]) + "=" + event_str(where[i]);
  }
  return s;
}

namespace {

using Viol = std::optional<AxiomViolation>;

Viol fail(PfAxiom a, std::vector<Event> where, Rational lhs, Rational rhs) {
  return AxiomViolation{a, std::move(where), std::move(lhs), std::move(rhs)};
}

// Scans instantiations by ascending bitmask, x outermost, and reports the
// first one where the two sides differ.
template <typename F0>
Viol scan0(PfAxiom a, F0 sides) {
  auto [lhs, rhs] = sides();
  if (lhs != rhs) return fail(a, {}, lhs, rhs);
  return std::nullopt;
}

template <typename F1>
Viol scan1(PfAxiom a, const TablePF& p, F1 sides) {
  for (const Event& x : all_events(p.space())) {
    auto [lhs, rhs] = sides(x);
    if (lhs != rhs) return fail(a, {x}, lhs, rhs);
  }
  return std::nullopt;
}

template <typename F2>
Viol scan2(PfAxiom a, const TablePF& p, F2 sides) {
  for (const Event& x : all_events(p.space()))
    for (const Event& y : all_events(p.space())) {
      auto [lhs, rhs] = sides(x, y);
      if (lhs != rhs) return fail(a, {x, y}, lhs, rhs);
    }
  return std::nullopt;
}

template <typename F3>
Viol scan3(PfAxiom a, const TablePF& p, F3 sides) {
  for (const Event& x : all_events(p.space()))
    for (const Event& y : all_events(p.space()))
      for (const Event& z : all_events(p.space())) {
        auto [lhs, rhs] = sides(x, y, z);
        if (lhs != rhs) return fail(a, {x, y, z}, lhs, rhs);
      }
  return std::nullopt;
}

}  // namespace

std::optional<AxiomViolation> check_axiom(const TablePF& p, PfAxiom a) {
  using R = std::pair<Rational, Rational>;
  switch (a) {
    case PfAxiom::Unit:
      return scan0(a, [&]() -> R { return {p.eval(ev_top(p.space())), Rational(1)}; });
    case PfAxiom::Zero:
      return scan0(a, [&]() -> R { return {p.eval(ev_bot(p.space())), Rational(0)}; });
    case PfAxiom::Nonneg:
      return scan1(a, p, [&](const Event& x) -> R {
        return {p.eval(x), p.eval(x).abs()};
      });
    case PfAxiom::Modularity:
      return scan2(a, p, [&](const Event& x, const Event& y) -> R {
        return {p.eval(x | y), p.eval(x) + p.eval(y) - p.eval(x & y)};
      });
    case PfAxiom::Cancellation:
      return scan2(a, p, [&](const Event& x, const Event& y) -> R {
        Rational py = p.eval(y);
        return {p.eval(x & y) * py * py.inv(), p.eval(x & y)};
      });
    case PfAxiom::Bayes:
      return scan2(a, p, [&](const Event& x, const Event& y) -> R {
        return {cond_p(CondVariant::p0, p, x, y),
                cond_p(CondVariant::p0, p, y, x) * p.eval(x) * p.eval(y).inv()};
      });
    case PfAxiom::BayesTotal:
      return scan3(a, p, [&](const Event& x, const Event& y, const Event& z) -> R {
        Rational den = cond_p(CondVariant::p0, p, y, z) * p.eval(z) +
                       cond_p(CondVariant::p0, p, y, ~z) * p.eval(~z);
        return {cond_p(CondVariant::p0, p, x, y),
                cond_p(CondVariant::p0, p, y, x) * p.eval(x) * den.inv()};
      });
  }
  throw std::logic_error("check_axiom: bad axiom");
}

std::optional<AxiomViolation> check_axioms(const TablePF& p, const std::vector<PfAxiom>& axioms) {
  for (PfAxiom a : axioms)
    if (auto v = check_axiom(p, a)) return v;
  return std::nullopt;
}

std::optional<std::vector<PfAxiom>> axiom_system(const std::string& name) {
  using A = PfAxiom;
  if (name == "PF") return std::vector<A>{A::Unit, A::Zero, A::Nonneg, A::Modularity};
  if (name == "WPF") return std::vector<A>{A::Unit, A::Zero, A::Nonneg, A::Cancellation};
  if (name == "PF'") return std::vector<A>{A::Unit, A::Zero, A::Nonneg, A::BayesTotal};
  if (name == "BR") return std::vector<A>{A::Bayes};
  if (name == "BR2") return std::vector<A>{A::BayesTotal};
  return std::nullopt;
}

std::optional<TablePF> search_counterexample(const EventSpace& space,
                                             const std::vector<PfAxiom>& satisfy,
                                             const std::vector<std::vector<PfAxiom>>& violate,
                                             const std::vector<Rational>& grid) {
  if (grid.empty()) return std::nullopt;
  size_t slots = size_t{1} << space.size();
  std::vector<size_t> pick(slots, 0);
  while (true) {
    std::vector<Rational> values;
    values.reserve(slots);
    for (size_t i : pick) values.push_back(grid[i]);
    TablePF cand(space, std::move(values));

    bool good = !check_axioms(cand, satisfy).has_value();
    for (const auto& system : violate) {
      if (!good) break;
      bool broken = false;
      for (PfAxiom a : system)
        if (check_axiom(cand, a)) { broken = true; break; }
      good = broken;
    }
    if (good) return cand;

    size_t k = slots;
    while (k > 0) {
      --k;
      if (++pick[k] < grid.size()) break;
      pick[k] = 0;
      if (k == 0) return std::nullopt;
    }
  }
}

}  // namespace mpc
