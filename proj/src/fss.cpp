#include "mpc/guard_table.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace mpc {

namespace {

std::vector<size_t> priority_with_first(size_t nvars, const std::vector<bool>& first) {
  std::vector<size_t> p;
  p.reserve(nvars);
  for (size_t i = 0; i < nvars; ++i)
    if (first[i]) p.push_back(i);
  for (size_t i = 0; i < nvars; ++i)
    if (!first[i]) p.push_back(i);
  return p;
}

// Per-entry data for summation. The guard is re-reduced so summed variables
// take pivots first; rows pivoting on a parameter then mention no summed
// variable at all, so they say where the entry applies, while rows pivoting
// on a summed variable bind it over the remaining free summed variables and
// the parameters.
struct EntryInfo {
  Guard activation;
  std::vector<Poly> bindings;
  bool has_free;
  Poly coeff;
};

EntryInfo make_info(const GtEntry& e, size_t n, const std::vector<bool>& summed,
                    size_t summed_count, const std::vector<size_t>& prio) {
  Guard g = *Guard::from_equations(n, e.guard.equations(), prio);
  std::vector<Poly> eqs = g.equations();
  std::vector<Poly> act, bind;
  for (size_t i = 0; i < g.rows().size(); ++i) {
    if (summed[g.rows()[i].pivot]) bind.push_back(eqs[i]);
    else act.push_back(eqs[i]);
  }
  EntryInfo info{*Guard::from_equations(n, act, prio), std::move(bind), false, g.reduce(e.coeff)};
  info.has_free = info.bindings.size() < summed_count;
  return info;
}

Poly divide_monomial(const Poly& q, const Poly::Mono& m) {
  Poly out(q.nvars());
  for (const auto& [mono, c] : q.terms()) {
    Poly t = Poly::constant(q.nvars(), c);
    for (size_t i = 0; i < q.nvars(); ++i)
      for (uint32_t k = m[i]; k < mono[i]; ++k) t = t * Poly::variable(q.nvars(), i);
    out = out + t;
  }
  return out;
}

// A finite set of affine subspaces covering the rational zero set of q, or
// nothing when no such representation is found here. Handles affine forms,
// univariate polynomials through their rational roots, and monomial content.
std::optional<std::vector<Guard>> vanish(const Poly& q) {
  size_t n = q.nvars();
  if (q.is_zero()) return std::vector<Guard>{Guard(n)};
  if (q.is_constant()) return std::vector<Guard>{};
  if (q.is_affine()) return std::vector<Guard>{*Guard::from_equations(n, {q})};
  auto used = q.used_vars();
  if (used.size() == 1) {
    std::vector<Guard> out;
    for (const Rational& r : rational_roots(q, used[0])) {
      Poly eq = Poly::variable(n, used[0]) - Poly::constant(n, r);
      out.push_back(*Guard::from_equations(n, {eq}));
    }
    return out;
  }
  Poly::Mono gcd = q.terms().begin()->first;
  for (const auto& [mono, c] : q.terms())
    for (size_t i = 0; i < n; ++i) gcd[i] = std::min(gcd[i], mono[i]);
  bool trivial = std::all_of(gcd.begin(), gcd.end(), [](uint32_t k) { return k == 0; });
  if (trivial) return std::nullopt;
  std::vector<Guard> out;
  for (size_t i = 0; i < n; ++i)
    if (gcd[i] > 0) out.push_back(*Guard::from_equations(n, {Poly::variable(n, i)}));
  Poly rest = divide_monomial(q, gcd);
  if (rest.is_constant()) return out;
  auto rec = vanish(rest);
  if (!rec) return std::nullopt;
  out.insert(out.end(), rec->begin(), rec->end());
  return out;
}

std::set<Guard> close_under_intersection(std::set<Guard> cands) {
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<Guard> snapshot(cands.begin(), cands.end());
    for (size_t i = 0; i < snapshot.size(); ++i)
      for (size_t j = i + 1; j < snapshot.size(); ++j) {
        auto m = snapshot[i].merged(snapshot[j]);
        if (m && cands.insert(*m).second) changed = true;
      }
  }
  return cands;
}

// The parameter locus where two entries bind the summed variables to the
// same slice, when that locus is a proper affine condition; nothing when the
// slices can never coincide or always do trivially differ in shape.
std::optional<Guard> coincidence(const EntryInfo& a, const EntryInfo& b, size_t n,
                                 const std::vector<bool>& summed,
                                 const std::vector<size_t>& prio) {
  Guard ga = *Guard::from_equations(n, a.bindings, prio);
  Guard gb = *Guard::from_equations(n, b.bindings, prio);
  if (ga.pivot_vars() != gb.pivot_vars()) return std::nullopt;
  std::vector<Poly> eqs;
  for (size_t i = 0; i < ga.rows().size(); ++i) {
    const GuardRow& ra = ga.rows()[i];
    const GuardRow& rb = gb.rows()[i];
    Poly diff(n);
    for (size_t v = 0; v < n; ++v) {
      if (ra.coeffs[v] == rb.coeffs[v]) continue;
      if (summed[v]) return std::nullopt;  // slices differ at every parameter point
      diff = diff + Poly::variable(n, v).scaled(ra.coeffs[v] - rb.coeffs[v]);
    }
    diff = diff - Poly::constant(n, ra.rhs - rb.rhs);
    if (!diff.is_zero()) eqs.push_back(std::move(diff));
  }
  auto g = Guard::from_equations(n, eqs);
  if (!g) return std::nullopt;
  return *g;
}

struct GenericValue {
  Poly value;
  bool infinite = false;
  // For each slice group that keeps a nonzero combined coefficient, the
  // parameter polynomials multiplying its summed-variable monomials.
  std::vector<std::vector<Poly>> survivor_coeffs;
};

GenericValue eval_generic(const Guard& L, const std::vector<EntryInfo>& infos, size_t n,
                          const std::vector<size_t>& summed_idx,
                          const std::vector<size_t>& prio) {
  GenericValue out{Poly(n)};
  std::map<Guard, Poly> groups;
  std::vector<Poly> l_eqs = L.equations();
  for (const EntryInfo& e : infos) {
    if (!subspace_implies(L, e.activation)) continue;
    std::vector<Poly> eqs = e.bindings;
    eqs.insert(eqs.end(), l_eqs.begin(), l_eqs.end());
    Guard sys = *Guard::from_equations(n, eqs, prio);
    Poly c = sys.reduce(e.coeff);
    if (c.is_zero()) continue;
    if (!e.has_free) {
      out.value = out.value + c;
      continue;
    }
    auto [it, fresh] = groups.try_emplace(std::move(sys), Poly(n));
    it->second = it->second + c;
  }
  for (const auto& [sys, sigma] : groups) {
    if (sigma.is_zero()) continue;
    out.infinite = true;
    std::vector<Poly> coeffs;
    for (const auto& [mono, p] : sigma.grouped_by(summed_idx))
      if (!p.is_zero()) coeffs.push_back(p);
    out.survivor_coeffs.push_back(std::move(coeffs));
  }
  if (out.infinite) out.value = Poly(n);
  return out;
}

std::vector<Guard> dimension_order(const std::set<Guard>& cands) {
  std::vector<Guard> order(cands.begin(), cands.end());
  std::sort(order.begin(), order.end(), [](const Guard& a, const Guard& b) {
    if (a.dim() != b.dim()) return a.dim() > b.dim();
    return a < b;
  });
  return order;
}

}  // namespace

GuardTable fss(const GuardTable& table, const std::set<std::string>& summed_names) {
  if (summed_names.empty()) return table;
  size_t n = table.nvars();
  std::vector<bool> summed(n, false);
  for (const std::string& name : summed_names) {
    int i = table.var_index(name);
    if (i < 0) throw std::invalid_argument("summed variable not in table: " + name);
    summed[static_cast<size_t>(i)] = true;
  }
  std::vector<size_t> prio = priority_with_first(n, summed);
  std::vector<size_t> summed_idx;
  for (size_t i = 0; i < n; ++i)
    if (summed[i]) summed_idx.push_back(i);

  std::vector<EntryInfo> infos;
  infos.reserve(table.entries().size());
  for (const GtEntry& e : table.entries())
    infos.push_back(make_info(e, n, summed, summed_idx.size(), prio));

  // Candidate parameter subspaces: where entries switch on, where slices of
  // free entries start to coincide, and closures under intersection. A
  // fixpoint then adds the loci where a surviving combined coefficient dies.
  std::set<Guard> cands{Guard(n)};
  for (const EntryInfo& e : infos) cands.insert(e.activation);
  for (size_t i = 0; i < infos.size(); ++i) {
    if (!infos[i].has_free) continue;
    for (size_t j = i + 1; j < infos.size(); ++j) {
      if (!infos[j].has_free) continue;
      if (auto c = coincidence(infos[i], infos[j], n, summed, prio)) cands.insert(*c);
    }
  }
  cands = close_under_intersection(std::move(cands));

  std::map<Guard, GenericValue> evals;
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<Guard> snapshot(cands.begin(), cands.end());
    for (const Guard& L : snapshot) {
      auto it = evals.find(L);
      if (it == evals.end())
        it = evals.emplace(L, eval_generic(L, infos, n, summed_idx, prio)).first;
      for (const auto& group : it->second.survivor_coeffs) {
        bool immortal = false;
        for (const Poly& q : group)
          if (q.is_constant() && !q.is_zero()) {
            immortal = true;
            break;
          }
        if (immortal) continue;
        std::optional<std::vector<Guard>> comps;
        for (const Poly& q : group) {
          comps = vanish(q);
          if (comps) break;
        }
        if (!comps)
          throw GtUnsupported("summation leaves a coefficient whose zero set has no affine cover",
                              group.front().str(table.vars()));
        for (const Guard& K : *comps) {
          auto m = L.merged(K);
          if (m && cands.insert(*m).second) changed = true;
        }
      }
    }
    if (changed) cands = close_under_intersection(std::move(cands));
  }

  // Assemble corrections from the largest subspaces down, so each subspace's
  // generic value comes out exactly.
  std::vector<GtEntry> result;
  for (const Guard& L : dimension_order(cands)) {
    const GenericValue& gv = evals.at(L);
    Poly cur(n);
    for (const GtEntry& r : result)
      if (subspace_implies(L, r.guard)) cur = cur + L.reduce(r.coeff);
    Poly delta = gv.value - cur;
    if (!delta.is_zero()) result.push_back({L, std::move(delta)});
  }

  std::vector<std::string> pvars;
  std::vector<int> remap(n, -1);
  for (size_t i = 0; i < n; ++i) {
    if (summed[i]) continue;
    remap[i] = static_cast<int>(pvars.size());
    pvars.push_back(table.vars()[i]);
  }
  std::vector<GtEntry> out;
  out.reserve(result.size());
  for (const GtEntry& r : result) {
    std::vector<Poly> eqs;
    for (const Poly& e : r.guard.equations()) eqs.push_back(e.reindexed(remap, pvars.size()));
    out.push_back({*Guard::from_equations(pvars.size(), eqs),
                   r.coeff.reindexed(remap, pvars.size())});
  }
  return GuardTable::from_entries(std::move(pvars), std::move(out));
}

Rational fss_all(const GuardTable& table) {
  std::set<std::string> all(table.vars().begin(), table.vars().end());
  if (all.empty()) return table.as_scalar();
  return fss(table, all).as_scalar();
}

GuardTable zero_indicator(const GuardTable& table) {
  size_t n = table.nvars();
  std::set<Guard> cands{Guard(n)};
  for (const GtEntry& e : table.entries()) cands.insert(e.guard);
  cands = close_under_intersection(std::move(cands));

  auto cell_value = [&](const Guard& L) {
    Poly v(n);
    for (const GtEntry& e : table.entries())
      if (subspace_implies(L, e.guard)) v = v + L.reduce(e.coeff);
    return v;
  };

  std::map<Guard, Poly> vals;
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<Guard> snapshot(cands.begin(), cands.end());
    for (const Guard& L : snapshot) {
      auto it = vals.find(L);
      if (it == vals.end()) it = vals.emplace(L, cell_value(L)).first;
      const Poly& v = it->second;
      if (v.is_zero() || v.is_constant()) continue;
      auto comps = vanish(v);
      if (!comps)
        throw GtUnsupported("zero set of the table has no affine cover", v.str(table.vars()));
      for (const Guard& K : *comps) {
        auto m = L.merged(K);
        if (m && cands.insert(*m).second) changed = true;
      }
    }
    if (changed) cands = close_under_intersection(std::move(cands));
  }

  std::vector<GtEntry> result;
  for (const Guard& L : dimension_order(cands)) {
    Rational target = vals.at(L).is_zero() ? Rational(1) : Rational(0);
    Poly cur(n);
    for (const GtEntry& r : result)
      if (subspace_implies(L, r.guard)) cur = cur + L.reduce(r.coeff);
    Poly delta = Poly::constant(n, target) - cur;
    if (!delta.is_zero()) result.push_back({L, std::move(delta)});
  }
  return GuardTable::from_entries(table.vars(), std::move(result));
}

GuardTable support_indicator(const GuardTable& table) {
  GuardTable one = GuardTable::from_poly(table.vars(), Poly::constant(table.nvars(), Rational(1)));
  return gt_sub(one, zero_indicator(table));
}

GuardTable support_nonempty(const GuardTable& table, const std::string& var) {
  int vi = table.var_index(var);
  if (vi < 0) throw std::invalid_argument("variable not in table: " + var);
  size_t n = table.nvars();
  GtEntry at_zero{*Guard::from_equations(n, {Poly::variable(n, static_cast<size_t>(vi))}),
                  Poly::constant(n, Rational(1))};
  GuardTable bump = GuardTable::from_entries(table.vars(), {at_zero});
  std::set<std::string> s{var};
  // 1 where the slice through var has finite support, 0 where infinite.
  GuardTable finite = gt_sub(fss(gt_add(table, bump), s), fss(table, s));
  // Support size where finite, 0 where infinite.
  GuardTable count = fss(support_indicator(table), s);
  GuardTable some = support_indicator(count);
  GuardTable one = GuardTable::from_poly(finite.vars(), Poly::constant(finite.nvars(), Rational(1)));
  return gt_add(gt_mul(some, finite), gt_sub(one, finite));
}

}  // namespace mpc
