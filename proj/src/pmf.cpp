#include "mpc/pmf.hpp"

#include <map>
#include <stdexcept>

namespace mpc {

std::vector<std::pair<std::vector<Rational>, Rational>> PmfView::points() const {
  std::vector<std::pair<std::vector<Rational>, Rational>> out;
  for (const GtEntry& e : table.entries()) {
    std::vector<Rational> pt(table.nvars());
    for (const GuardRow& row : e.guard.rows()) pt[row.pivot] = row.rhs;
    out.push_back({std::move(pt), e.coeff.constant_value()});
  }
  return out;
}

PmfCheck is_pmf(const GuardTable& table) {
  PmfCheck res;
  for (const GtEntry& e : table.entries()) {
    if (!e.guard.is_point()) {
      // A non-point guard keeps some variable free, so the entry is nonzero
      // on infinitely many rational points.
      res.reason = "infinite support";
      res.mass = fss_all(table);
      return res;
    }
    if (!e.coeff.is_constant()) {
      // Unreachable for canonical tables (point guards reduce coefficients
      // to constants); kept so a malformed table is still rejected.
      res.reason = "non-constant coefficient";
      return res;
    }
  }
  for (const GtEntry& e : table.entries()) {
    if (e.coeff.constant_value().sgn() < 0) {
      res.reason = "negative value";
      res.mass = fss_all(table);
      return res;
    }
  }
  res.mass = fss_all(table);
  if (!res.mass.is_one()) {
    res.reason = "mass " + res.mass.str();
    return res;
  }
  res.ok = true;
  res.view = PmfView{table};
  return res;
}

GuardTable gt_lift(const GuardTable& t, const std::vector<std::string>& vars) {
  std::vector<int> map(t.nvars(), -1);
  for (size_t i = 0; i < t.nvars(); ++i) {
    for (size_t j = 0; j < vars.size(); ++j) {
      if (vars[j] == t.vars()[i]) {
        map[i] = static_cast<int>(j);
        break;
      }
    }
    if (map[i] < 0) throw std::invalid_argument("gt_lift: variable " + t.vars()[i] + " missing");
  }
  std::vector<GtEntry> entries;
  for (const GtEntry& e : t.entries()) {
    std::vector<Poly> eqs;
    for (const Poly& q : e.guard.equations()) eqs.push_back(q.reindexed(map, vars.size()));
    auto g = Guard::from_equations(vars.size(), eqs);
    // Satisfiable in the old variables, hence satisfiable here.
    entries.push_back({*g, e.coeff.reindexed(map, vars.size())});
  }
  return GuardTable::from_entries(vars, std::move(entries));
}

PmfView marginalise(const PmfView& g, const std::vector<size_t>& kept) {
  std::vector<bool> keep(g.table.nvars(), false);
  for (size_t i : kept) {
    if (i >= g.table.nvars()) throw std::out_of_range("marginalise: bad variable index");
    keep[i] = true;
  }
  std::set<std::string> dropped;
  for (size_t i = 0; i < g.table.nvars(); ++i)
    if (!keep[i]) dropped.insert(g.table.vars()[i]);
  return PmfView{fss(g.table, dropped)};
}

bool is_independent(const PmfView& g) {
  if (g.table.nvars() != 2) throw std::invalid_argument("is_independent: needs two variables");
  GuardTable m0 = marginalise(g, {0}).table;
  GuardTable m1 = marginalise(g, {1}).table;
  GuardTable prod = gt_mul(gt_lift(m0, g.table.vars()), gt_lift(m1, g.table.vars()));
  return prod == g.table;
}

Rational e_pmf(const PmfView& f) {
  if (f.table.nvars() != 1) throw std::invalid_argument("e_pmf: needs one variable");
  GuardTable x = GuardTable::from_poly(f.table.vars(), Poly::variable(1, 0));
  return fss_all(gt_mul(x, f.table));
}

Rational var_pmf(const PmfView& f) {
  if (f.table.nvars() != 1) throw std::invalid_argument("var_pmf: needs one variable");
  GuardTable x2 = GuardTable::from_poly(f.table.vars(), Poly::variable(1, 0).pow(2));
  Rational m = e_pmf(f);
  return fss_all(gt_mul(x2, f.table)) - m * m;
}

Rational cov_pmf(const PmfView& g) {
  if (g.table.nvars() != 2) throw std::invalid_argument("cov_pmf: needs two variables");
  GuardTable xy = GuardTable::from_poly(
      g.table.vars(), Poly::variable(2, 0) * Poly::variable(2, 1));
  Rational ex = e_pmf(marginalise(g, {0}));
  Rational ey = e_pmf(marginalise(g, {1}));
  return fss_all(gt_mul(xy, g.table)) - ex * ey;
}

Rational corr2_pmf(const PmfView& g) {
  Rational c = cov_pmf(g);
  Rational vx = var_pmf(marginalise(g, {0}));
  Rational vy = var_pmf(marginalise(g, {1}));
  return c * c * (vx * vy).inv();
}

}  // namespace mpc
