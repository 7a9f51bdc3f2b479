#ifndef MPC_RANDOM_VARIABLE_HPP
#define MPC_RANDOM_VARIABLE_HPP

#include <vector>

#include "mpc/condval.hpp"

namespace mpc {

// A random variable as the explicit function from atoms to rationals that a
// conditional value denotes pointwise.
class RandomVariable {
public:
  RandomVariable(EventSpace space, std::vector<Rational> values);

  const EventSpace& space() const { return space_; }
  const std::vector<Rational>& values() const { return values_; }
  Rational at(size_t atom) const { return values_[atom]; }

private:
  EventSpace space_;
  std::vector<Rational> values_;
};

RandomVariable rv_of_cv(const CanonCV& x);

// Sum of finitely many atom contributions; the atom enumeration is finite by
// construction, so the summation never collapses to its empty default.
Rational sum_over_atoms(const std::vector<Rational>& contributions);

// Moments computed atom by atom against the weights.
Rational e_rv(const RandomVariable& x, const WeightPF& p);
Rational var_rv(const RandomVariable& x, const WeightPF& p);
Rational cov_rv(const RandomVariable& x, const RandomVariable& y, const WeightPF& p);
Rational corr2_rv(const RandomVariable& x, const RandomVariable& y, const WeightPF& p);

}  // namespace mpc

#endif
