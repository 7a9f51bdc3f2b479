#ifndef MPC_CONFIG_SPACE_HPP
#define MPC_CONFIG_SPACE_HPP

#include <memory>
#include <string>
#include <vector>

#include "mpc/condval.hpp"

namespace mpc {

// Configurations: the empty configuration, named objects, parallel
// composition, event guards and yield attachment. A yield assigns a
// conditional value to every object of a configuration; reattaching further
// out rebinds nothing, the outermost yield of an object wins.
struct ConfigExpr;
using ConfigExprPtr = std::shared_ptr<const ConfigExpr>;

struct ConfigExpr {
  enum class Kind { Empty, Object, Par, Guard, Yield };
  Kind kind;
  std::string object;  // Object
  EventExprPtr event;  // Guard
  CVExprPtr yield;     // Yield
  ConfigExprPtr a, b;
};

ConfigExprPtr cfg_empty();
ConfigExprPtr cfg_object(std::string name);
ConfigExprPtr cfg_par(ConfigExprPtr a, ConfigExprPtr b);
ConfigExprPtr cfg_guard(EventExprPtr e, ConfigExprPtr a);
ConfigExprPtr cfg_yield(ConfigExprPtr a, CVExprPtr x);

std::string config_expr_str(const ConfigExprPtr& c);

// One guarded object with its yield. The guard collects the conditions on
// the path to the object; a bare object carries the zero yield.
struct ConfigTriple {
  Event event;
  std::string object;
  CanonCV yield;
};

// Canonical form of a configuration over a space: its guarded objects with
// resolved yields, dead guards dropped. Two configurations are equal when
// every atom sees the same multiset of (object, yield value) pairs.
class CanonConfig {
public:
  CanonConfig(EventSpace space, std::vector<ConfigTriple> triples);

  const EventSpace& space() const { return space_; }
  const std::vector<ConfigTriple>& triples() const { return triples_; }

  friend bool operator==(const CanonConfig& a, const CanonConfig& b);
  friend bool operator!=(const CanonConfig& a, const CanonConfig& b) { return !(a == b); }

private:
  EventSpace space_;
  std::vector<ConfigTriple> triples_;
};

CanonConfig cfg_canon(const ConfigExprPtr& c, const EventSpace& space);

// Total utility: the sum over the configuration's objects of their yields,
// cut down to the guards under which the objects are present.
CanonCV utility(const CanonConfig& c);

// Expected utility of a configuration under atom weights.
Rational expected_utility(const ConfigExprPtr& c, const WeightPF& p);

// The event weight that makes an agent indifferent between two two-branch
// options: the first paying u1 on the event and u2 off it, the second paying
// u3 on the event and u4 off it. Throws std::domain_error when the payoffs
// make every weight indifferent or none.
Rational elicit_indifference(const Rational& u1, const Rational& u2,
                             const Rational& u3, const Rational& u4);

// The event weight below which paying `d` to always receive the high payoff
// beats keeping an uncertain high/low ticket: 1 - d/(high - low).
// Requires low < high.
Rational ask_threshold(const Rational& high, const Rational& low, const Rational& d);

// The same comparison, decided by building both configurations and comparing
// expected utilities under p.
bool prefers_asking(const WeightPF& p, const Event& e,
                    const Rational& high, const Rational& low, const Rational& d);

// Grammar: '||' for parallel composition (weakest), ':->' guards, '~>' yield
// attachment with a conditional-value right side, 'eps' for the empty
// configuration, object names, parentheses.
ConfigExprPtr parse_config(const std::string& text);

}  // namespace mpc

#endif
