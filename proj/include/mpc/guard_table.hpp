#ifndef MPC_GUARD_TABLE_HPP
#define MPC_GUARD_TABLE_HPP

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mpc/poly.hpp"
#include "mpc/term.hpp"

namespace mpc {

// One row of a reduced affine system: sum(coeffs[i] * var_i) = rhs, with a
// unit pivot coefficient that no other row uses.
struct GuardRow {
  std::vector<Rational> coeffs;
  Rational rhs;
  size_t pivot;
};

std::optional<std::vector<GuardRow>> rref(
    size_t nvars,
    std::vector<std::pair<std::vector<Rational>, Rational>> eqs,
    const std::vector<size_t>& priority);

// A satisfiable conjunction of affine equations over the table variables,
// kept in reduced row echelon form, so equal constraint sets compare equal.
// Point bindings (x = c) and acyclic links (x = expression in other
// variables) are both rows of this form.
class Guard {
public:
  explicit Guard(size_t nvars) : nvars_(nvars) {}

  // Equations are affine polynomials required to equal zero. Returns nothing
  // when they are inconsistent.
  static std::optional<Guard> from_equations(size_t nvars, const std::vector<Poly>& eqs);
  // Same, with an explicit pivot preference order over the variables.
  static std::optional<Guard> from_equations(size_t nvars, const std::vector<Poly>& eqs,
                                             const std::vector<size_t>& priority);
  std::optional<Guard> merged(const Guard& o) const;

  size_t nvars() const { return nvars_; }
  const std::vector<GuardRow>& rows() const { return rows_; }
  bool is_top() const { return rows_.empty(); }
  size_t dim() const { return nvars_ - rows_.size(); }
  std::vector<size_t> pivot_vars() const;
  bool is_point() const { return rows_.size() == nvars_; }

  bool holds_at(const std::vector<Rational>& point) const;
  // Substitute every pivot variable by its binding expression.
  Poly reduce(const Poly& p) const;
  // The binding of a pivot row as a polynomial over the free variables.
  Poly binding(const GuardRow& row) const;
  // Rows as affine polynomials equal to zero.
  std::vector<Poly> equations() const;

  friend bool operator==(const Guard& a, const Guard& b);
  friend bool operator!=(const Guard& a, const Guard& b) { return !(a == b); }
  friend bool operator<(const Guard& a, const Guard& b);

  std::string str(const std::vector<std::string>& names) const;

private:
  size_t nvars_;
  std::vector<GuardRow> rows_;
};

// True when every point of `sub` satisfies `sup`'s equations.
bool subspace_implies(const Guard& sub, const Guard& sup);

struct GtEntry {
  Guard guard;
  Poly coeff;
};

struct GtUnsupported : std::runtime_error {
  std::string subterm;
  explicit GtUnsupported(const std::string& what, const std::string& sub = "")
      : std::runtime_error(sub.empty() ? what : what + ": " + sub), subterm(sub) {}
};

// Piecewise-polynomial function of rational tuples: the sum, over entries
// whose guard holds at the point, of the coefficient polynomial there.
// Canonical form: coefficients reduced through their guard's bindings,
// nonzero, guards distinct and sorted.
class GuardTable {
public:
  explicit GuardTable(std::vector<std::string> vars);
  static GuardTable from_poly(std::vector<std::string> vars, const Poly& p);
  static GuardTable from_entries(std::vector<std::string> vars, std::vector<GtEntry> entries);

  const std::vector<std::string>& vars() const { return vars_; }
  size_t nvars() const { return vars_.size(); }
  const std::vector<GtEntry>& entries() const { return entries_; }
  int var_index(const std::string& name) const;

  Rational eval(const std::vector<Rational>& point) const;
  // Value of the zero-variable table.
  Rational as_scalar() const;

  friend bool operator==(const GuardTable& a, const GuardTable& b) {
    return a.vars_ == b.vars_ && a.entries_ == b.entries_;
  }
  friend bool operator!=(const GuardTable& a, const GuardTable& b) { return !(a == b); }

  std::string str() const;

private:
  std::vector<std::string> vars_;
  std::vector<GtEntry> entries_;
};

bool operator==(const GtEntry& a, const GtEntry& b);

GuardTable gt_add(const GuardTable& a, const GuardTable& b);
GuardTable gt_sub(const GuardTable& a, const GuardTable& b);
GuardTable gt_scale(const GuardTable& a, const Rational& c);
GuardTable gt_mul(const GuardTable& a, const GuardTable& b);

// Sum of products of rational constants, polynomial factors and indicators
// zero(p) / one(p), where p is a univariate polynomial with rational root
// analysis, an affine form, or a sum of squares of those. Sign and inverse
// are admitted only where a guard pins their argument to a constant.
GuardTable gt_parse(const TermPtr& term, const std::vector<std::string>& vars);

// Finite-support summation over the named variables: for each remaining
// parameter point, the sum of the table over all rational assignments of the
// summed variables when finitely many are nonzero, else 0.
GuardTable fss(const GuardTable& table, const std::set<std::string>& summed);
Rational fss_all(const GuardTable& table);

// Pointwise indicator of the support: 1 where the table is nonzero, 0 where
// it vanishes.
GuardTable support_indicator(const GuardTable& table);
// Pointwise indicator of the zero set: 1 - support_indicator.
GuardTable zero_indicator(const GuardTable& table);

// Emptiness detector over one variable: the table over the remaining
// parameters whose value is 1 where the slice through `var` has nonempty
// support and 0 where it is empty everywhere.
GuardTable support_nonempty(const GuardTable& table, const std::string& var);

// Table of a single point constraint per variable.
GuardTable point_entry_table(const std::vector<std::string>& vars,
                             const std::vector<std::pair<std::vector<Rational>, Rational>>& points);

}  // namespace mpc

#endif
