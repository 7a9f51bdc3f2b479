#ifndef MPC_POLY_HPP
#define MPC_POLY_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mpc/rational.hpp"

namespace mpc {

// Sparse multivariate polynomial over a fixed variable count. Monomials are
// exponent vectors aligned with the owning table's variable order.
class Poly {
public:
  using Mono = std::vector<uint32_t>;

  Poly() : nvars_(0) {}
  explicit Poly(size_t nvars) : nvars_(nvars) {}
  static Poly constant(size_t nvars, Rational c);
  static Poly variable(size_t nvars, size_t idx);

  size_t nvars() const { return nvars_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  // The constant term; only meaningful when is_constant().
  Rational constant_value() const;
  const std::map<Mono, Rational>& terms() const { return terms_; }

  bool uses_var(size_t idx) const;
  std::vector<size_t> used_vars() const;
  uint32_t degree_in(size_t idx) const;
  uint32_t total_degree() const;
  bool is_affine() const { return total_degree() <= 1; }
  // Affine coefficient of a variable; only meaningful when is_affine().
  Rational affine_coeff(size_t idx) const;

  Poly operator-() const;
  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator*(const Poly& o) const;
  Poly scaled(const Rational& c) const;
  Poly pow(uint32_t e) const;

  // Replace one variable by a polynomial (same variable count).
  Poly substituted(size_t idx, const Poly& by) const;
  Rational eval(const std::vector<Rational>& point) const;
  // Rewrite over a narrower variable list: map[i] = new index of old var i,
  // or -1 for variables this polynomial must not use.
  Poly reindexed(const std::vector<int>& map, size_t new_nvars) const;

  // Coefficient polynomials grouped by the monomial part over `group` vars;
  // keys are exponent vectors over `group`, values only use other vars.
  std::map<Mono, Poly> grouped_by(const std::vector<size_t>& group) const;

  friend bool operator==(const Poly& a, const Poly& b) {
    return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
  }
  friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }
  friend bool operator<(const Poly& a, const Poly& b);

  // Deterministic rendering, e.g. "1/2*x^2*y - t + 3".
  std::string str(const std::vector<std::string>& names) const;

private:
  size_t nvars_;
  std::map<Mono, Rational> terms_;
  void add_term(const Mono& m, const Rational& c);
};

// Rational roots of a univariate polynomial (exact, via the rational root
// bound on the cleared-denominator form). `idx` is the variable it uses.
std::vector<Rational> rational_roots(const Poly& p, size_t idx);

}  // namespace mpc

#endif
