#ifndef MPC_CONDVAL_HPP
#define MPC_CONDVAL_HPP

#include <memory>
#include <string>
#include <vector>

#include "mpc/events.hpp"
#include "mpc/pmf.hpp"
#include "mpc/probability.hpp"

namespace mpc {

// Conditional-value expressions: embedded constants v(r), event guards
// e :-> X, and the ring operations with totalized inverse. Square and the
// three-armed conditional are provided as expansions.
struct CVExpr;
using CVExprPtr = std::shared_ptr<const CVExpr>;

struct CVExpr {
  enum class Kind { Value, Guard, Add, Neg, Mul, Inv };
  Kind kind;
  Rational value;      // Value
  EventExprPtr event;  // Guard
  CVExprPtr a, b;
};

CVExprPtr cv_value(Rational v);
CVExprPtr cv_guard(EventExprPtr e, CVExprPtr x);
CVExprPtr cv_add(CVExprPtr a, CVExprPtr b);
CVExprPtr cv_sub(CVExprPtr a, CVExprPtr b);
CVExprPtr cv_neg(CVExprPtr a);
CVExprPtr cv_mul(CVExprPtr a, CVExprPtr b);
CVExprPtr cv_inv(CVExprPtr a);
CVExprPtr cv_square(CVExprPtr a);
// x when e holds, z otherwise: (e :-> x) + (!e :-> z).
CVExprPtr cv_cond(CVExprPtr x, EventExprPtr e, CVExprPtr z);

std::string cv_expr_str(const CVExprPtr& x);

// A conditional value in canonical form: one rational per atom of the space.
// Guarding zeroes the value outside the event; every ring operation acts
// pointwise per atom.
class CanonCV {
public:
  CanonCV(EventSpace space, std::vector<Rational> values);

  const EventSpace& space() const { return space_; }
  const std::vector<Rational>& values() const { return values_; }
  Rational at(size_t atom) const { return values_[atom]; }

  CanonCV operator-() const;
  CanonCV operator+(const CanonCV& o) const;
  CanonCV operator-(const CanonCV& o) const;
  CanonCV operator*(const CanonCV& o) const;
  CanonCV inv() const;

  friend bool operator==(const CanonCV& a, const CanonCV& b) {
    if (a.space_ != b.space_) throw SpaceMismatch();
    return a.values_ == b.values_;
  }
  friend bool operator!=(const CanonCV& a, const CanonCV& b) { return !(a == b); }

private:
  EventSpace space_;
  std::vector<Rational> values_;
};

CanonCV cv_canon(const CVExprPtr& x, const EventSpace& space);
CanonCV cv_const(const EventSpace& space, Rational v);
// e :-> X at the canonical level.
CanonCV cv_guarded(const Event& e, const CanonCV& x);

// Flat form: each distinct nonzero value paired with the event where it is
// taken, ordered by first atom of occurrence. The events are disjoint.
struct FlatEntry {
  Event event;
  Rational value;
};
std::vector<FlatEntry> cv_flat_entries(const CanonCV& x);
// The same as an expression: a sum of guarded constants, v(0) when empty.
CVExprPtr cv_flat(const CanonCV& x);

// Expected value through the flat form, and the derived second moments.
// corr2 is totalized: zero variance on either side gives 0.
Rational e_p(const CanonCV& x, const WeightPF& p);
Rational var_p(const CanonCV& x, const WeightPF& p);
Rational cov_p(const CanonCV& x, const CanonCV& y, const WeightPF& p);
Rational corr2_p(const CanonCV& x, const CanonCV& y, const WeightPF& p);

// Distribution of a conditional value under atom weights, as a one-variable
// mass function; the value 0 collects the weight of the zero set.
PmfView pmf_of_cv(const CanonCV& x, const WeightPF& p);
// Joint distribution of a pair over the same space, as a two-variable mass
// function.
PmfView joint_pmf(const CanonCV& x, const CanonCV& y, const WeightPF& p);
// Whether the joint distribution is the product of the marginals.
bool cv_independent(const CanonCV& x, const CanonCV& y, const WeightPF& p);

// Grammar: + - * infix, unary -, postfix ^-1 and ^2, ':->' guards binding
// tighter than * and grouping to the right, v(term) with a closed meadow
// term, parentheses.
CVExprPtr parse_cv(const std::string& text);
// Parses a prefix of `text` starting at `pos`, advancing it.
CVExprPtr parse_cv_prefix(const std::string& text, size_t& pos);

}  // namespace mpc

#endif
