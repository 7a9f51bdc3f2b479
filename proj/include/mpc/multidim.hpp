#ifndef MPC_MULTIDIM_HPP
#define MPC_MULTIDIM_HPP

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mpc/condval.hpp"

namespace mpc {

// A sequence of distinct dimension names: the signature of one member of a
// family of probability functions.
using Arity = std::vector<std::string>;

std::string arity_str(const Arity& w);

// A set of arities over fixed dimensions. A well-formed family is closed
// under permutation and nonempty subsequence and contains every singleton.
struct ArityFamily {
  std::vector<std::string> dims;
  std::set<Arity> arities;
};

struct FamilyViolation {
  std::string condition;  // "permutation", "subsequence" or "singleton"
  Arity witness;          // the missing arity
};

std::optional<FamilyViolation> validate_family(const ArityFamily& w);

// Closure of the given arities under permutation and nonempty subsequence.
std::set<Arity> arity_closure(const std::vector<Arity>& given);

struct MissingArity : std::runtime_error {
  Arity arity;
  explicit MissingArity(Arity w)
      : std::runtime_error("no probability function of arity " + arity_str(w)),
        arity(std::move(w)) {}
};

struct PffError : std::runtime_error {
  explicit PffError(const std::string& what) : std::runtime_error(what) {}
};

// A finished family: one tensor of atom-tuple weights per arity, coherent
// under permutation and marginalisation, nonnegative, each summing to 1.
// Events evaluate by summing the tensor over the atom tuples below them.
class Pff {
public:
  const std::vector<std::string>& dims() const { return dims_; }
  const EventSpace& dim_space(const std::string& dim) const;
  std::set<Arity> arities() const;
  bool has_arity(const Arity& w) const { return tensors_.count(w) > 0; }

  const std::vector<Rational>& tensor(const Arity& w) const;
  Rational tensor_at(const Arity& w, const std::vector<size_t>& atoms) const;
  Rational eval(const Arity& w, const std::vector<Event>& events) const;

private:
  friend class PffBuilder;
  std::vector<std::string> dims_;
  std::map<std::string, EventSpace> spaces_;
  std::map<Arity, std::vector<Rational>> tensors_;
};

// Collects tensors arity by arity, then derives every permutation and
// marginal, checking that all routes to the same arity agree.
class PffBuilder {
public:
  PffBuilder(std::vector<std::string> dims, std::vector<EventSpace> spaces);

  // `flat` is row-major over the atom tuples of the arity.
  void add_tensor(const Arity& w, std::vector<Rational> flat);
  Pff finalize() const;

private:
  std::vector<std::string> dims_;
  std::map<std::string, EventSpace> spaces_;
  std::map<Arity, std::vector<Rational>> given_;
  std::vector<size_t> sizes(const Arity& w) const;
};

struct PffViolation {
  std::string law;  // "unit", "zero", "nonneg", "modularity", "permutation", "marginal"
  std::string detail;
};

// Exhaustive audit of the family laws over all event tuples of every arity.
std::optional<PffViolation> check_pff_axioms(const Pff& p);

// Moments against the matching one- and two-dimensional members.
Rational md_e(const Pff& p, const std::string& dim, const CanonCV& x);
Rational md_var(const Pff& p, const std::string& dim, const CanonCV& x);
Rational md_cov(const Pff& p, const std::string& dx, const CanonCV& x,
                const std::string& dy, const CanonCV& y);
Rational md_corr2(const Pff& p, const std::string& dx, const CanonCV& x,
                  const std::string& dy, const CanonCV& y);

// The two-dimensional product space: atoms are pairs, events of the factors
// embed as rectangles, conditional values embed cylindrically.
struct ProductSpace {
  EventSpace space;
  EventSpace left, right;

  Event pair(const Event& e, const Event& f) const;
  CanonCV lift_left(const CanonCV& x) const;
  CanonCV lift_right(const CanonCV& y) const;
};

std::pair<ProductSpace, WeightPF> lift_product(const Pff& p, const std::string& da,
                                               const std::string& db);

struct ReducedStats {
  Rational e_x, var_x, e_y, var_y, cov, corr2;
};

// The same moments computed on the product space with ordinary
// one-dimensional machinery.
ReducedStats reduced_stats(const Pff& p, const std::string& dx, const CanonCV& x,
                           const std::string& dy, const CanonCV& y);

struct JointResult {
  bool exists = false;
  // Row-major weights over the atom tuples of all dimensions, when they exist.
  std::vector<Rational> witness;
  // A violated derived inequality, when they do not.
  std::string certificate;
};

// Searches for a single nonnegative weighting of full atom tuples whose
// marginals reproduce every tensor of the family, by exact elimination.
JointResult joint_exists(const Pff& p, size_t max_cells = 4096);

}  // namespace mpc

#endif
