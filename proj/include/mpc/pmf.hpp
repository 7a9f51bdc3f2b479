#ifndef MPC_PMF_HPP
#define MPC_PMF_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mpc/guard_table.hpp"

namespace mpc {

// A guard table certified to be a finitely supported mass function: every
// entry pins all variables to a single point, every coefficient is a
// nonnegative constant, and the values sum to exactly 1.
struct PmfView {
  GuardTable table;

  // The support as (point, mass) pairs in canonical entry order.
  std::vector<std::pair<std::vector<Rational>, Rational>> points() const;
};

// Outcome of the mass-function test. `reason` is empty on success, otherwise
// the first disqualification found: "infinite support", "non-constant
// coefficient", "negative value", or "mass <m>" with the offending total.
struct PmfCheck {
  bool ok = false;
  std::string reason;
  Rational mass;
  std::optional<PmfView> view;
};

PmfCheck is_pmf(const GuardTable& table);

// Rewrite a table over a wider variable list that contains all of its own.
GuardTable gt_lift(const GuardTable& t, const std::vector<std::string>& vars);

// Keep the listed variable positions and sum the others out. Summing a mass
// function over part of its variables again yields a mass function.
PmfView marginalise(const PmfView& g, const std::vector<size_t>& kept);

// Whether a two-variable mass function is the product of its marginals.
bool is_independent(const PmfView& g);

// Moments of mass functions, computed by multiplying the table with the
// matching coordinate polynomial and summing over everything.
Rational e_pmf(const PmfView& f);     // one variable
Rational var_pmf(const PmfView& f);   // one variable
Rational cov_pmf(const PmfView& g);   // two variables
// Squared correlation, totalized: zero variance gives 0.
Rational corr2_pmf(const PmfView& g);

}  // namespace mpc

#endif
