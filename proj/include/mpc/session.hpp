#ifndef MPC_SESSION_HPP
#define MPC_SESSION_HPP

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "mpc/config_space.hpp"
#include "mpc/multidim.hpp"
#include "mpc/probability.hpp"
#include "mpc/random_variable.hpp"

namespace mpc {

// Line interpreter for the calculator language. Declarations bind named
// spaces, probability functions, conditional values, configurations,
// dimensions, families and random variables; checks and evaluations produce
// report lines that start with OK or FAIL. Declarations are silent.
class Session {
public:
  explicit Session(size_t max_atoms = 3, uint64_t seed = 0);

  // Report lines produced by one input line; empty for blank lines,
  // comments and successful declarations. Never throws: problems come back
  // as FAIL lines.
  std::vector<std::string> run_line(const std::string& line);

  // Whether any FAIL line was produced so far.
  bool failed() const { return failed_; }

private:
  size_t max_atoms_;
  uint64_t seed_;  // reserved for sampling commands; parsed and kept
  bool failed_ = false;

  std::map<std::string, EventSpace> spaces_;
  std::vector<std::string> dims_;  // declaration order of dimension names
  std::map<std::string, WeightPF> weights_;
  std::map<std::string, TablePF> tables_;
  std::map<std::string, CanonCV> cvs_;
  std::set<std::string> objects_;
  struct BoundConfig {
    ConfigExprPtr expr;
    EventSpace space;
  };
  std::map<std::string, BoundConfig> configs_;
  std::map<std::string, ArityFamily> families_;
  std::map<std::string, std::vector<std::pair<Arity, std::vector<Rational>>>> pffs_;
  std::map<std::string, RandomVariable> rvs_;

  std::vector<std::string> dispatch(const std::string& line);
  const EventSpace& space_of(const std::string& name) const;
  const WeightPF& weight_of(const std::string& name) const;
  const CanonCV& cv_of(const std::string& name) const;
  TablePF table_of(const std::string& name) const;
  Pff build_pff(const std::string& name) const;
};

}  // namespace mpc

#endif
