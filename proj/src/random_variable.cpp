#include "mpc/random_variable.hpp"

#include <stdexcept>

namespace mpc {

RandomVariable::RandomVariable(EventSpace space, std::vector<Rational> values)
    : space_(std::move(space)), values_(std::move(values)) {
  if (values_.size() != space_.size())
    throw std::invalid_argument("random variable needs one value per atom");
}

RandomVariable rv_of_cv(const CanonCV& x) {
  return RandomVariable(x.space(), x.values());
}

Rational sum_over_atoms(const std::vector<Rational>& contributions) {
  Rational total;
  for (const Rational& c : contributions) total += c;
  return total;
}

Rational e_rv(const RandomVariable& x, const WeightPF& p) {
  if (x.space() != p.space()) throw SpaceMismatch();
  std::vector<Rational> parts;
  parts.reserve(x.values().size());
  for (size_t i = 0; i < x.values().size(); ++i) parts.push_back(x.at(i) * p.atom_weight(i));
  return sum_over_atoms(parts);
}

Rational var_rv(const RandomVariable& x, const WeightPF& p) {
  RandomVariable x2(x.space(), [&] {
    std::vector<Rational> v;
    v.reserve(x.values().size());
    for (const Rational& r : x.values()) v.push_back(r * r);
    return v;
  }());
  Rational m = e_rv(x, p);
  return e_rv(x2, p) - m * m;
}

Rational cov_rv(const RandomVariable& x, const RandomVariable& y, const WeightPF& p) {
  if (x.space() != y.space()) throw SpaceMismatch();
  std::vector<Rational> v;
  v.reserve(x.values().size());
  for (size_t i = 0; i < x.values().size(); ++i) v.push_back(x.at(i) * y.at(i));
  RandomVariable xy(x.space(), std::move(v));
  return e_rv(xy, p) - e_rv(x, p) * e_rv(y, p);
}

Rational corr2_rv(const RandomVariable& x, const RandomVariable& y, const WeightPF& p) {
  Rational c = cov_rv(x, y, p);
  return c * c * (var_rv(x, p) * var_rv(y, p)).inv();
}

}  // namespace mpc
