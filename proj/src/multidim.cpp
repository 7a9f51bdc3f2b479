#include "mpc/multidim.hpp"

#include <algorithm>
#include <numeric>

#include "mpc/guard_table.hpp"

namespace mpc {

namespace {

std::vector<size_t> row_major_strides(const std::vector<size_t>& sizes) {
  std::vector<size_t> s(sizes.size(), 1);
  for (size_t i = sizes.size(); i-- > 1;) s[i - 1] = s[i] * sizes[i];
  return s;
}

size_t flat_index(const std::vector<size_t>& tuple, const std::vector<size_t>& strides) {
  size_t f = 0;
  for (size_t i = 0; i < tuple.size(); ++i) f += tuple[i] * strides[i];
  return f;
}

// Advances a tuple odometer with the last position fastest; false at the end.
bool next_tuple(std::vector<size_t>& t, const std::vector<size_t>& sizes) {
  size_t k = t.size();
  while (k > 0) {
    --k;
    if (++t[k] < sizes[k]) return true;
    t[k] = 0;
  }
  return false;
}

}  // namespace

std::string arity_str(const Arity& w) {
  std::string s = "(";
  for (size_t i = 0; i < w.size(); ++i) {
    if (i) s += " ";
    s += w[i];
  }
  return s + ")";
}

namespace {

void require_well_formed(const Arity& w, const std::vector<std::string>& dims) {
  if (w.empty()) throw std::invalid_argument("empty arity");
  for (size_t i = 0; i < w.size(); ++i) {
    if (std::find(dims.begin(), dims.end(), w[i]) == dims.end())
      throw std::invalid_argument("unknown dimension " + w[i]);
    for (size_t j = i + 1; j < w.size(); ++j)
      if (w[i] == w[j]) throw std::invalid_argument("repeated dimension " + w[i]);
  }
}

std::vector<Arity> permutations_of(const Arity& w) {
  std::vector<size_t> perm(w.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::sort(perm.begin(), perm.end(),
            [&](size_t a, size_t b) { return w[a] < w[b]; });
  std::vector<Arity> out;
  do {
    Arity p;
    p.reserve(w.size());
    for (size_t i : perm) p.push_back(w[i]);
    out.push_back(std::move(p));
  } while (std::next_permutation(perm.begin(), perm.end(),
                                 [&](size_t a, size_t b) { return w[a] < w[b]; }));
  return out;
}

std::vector<Arity> subsequences_of(const Arity& w) {
  std::vector<Arity> out;
  for (uint64_t mask = 1; mask < (uint64_t{1} << w.size()); ++mask) {
    Arity s;
    for (size_t i = 0; i < w.size(); ++i)
      if (mask >> i & 1) s.push_back(w[i]);
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace

std::optional<FamilyViolation> validate_family(const ArityFamily& w) {
  for (const Arity& a : w.arities) require_well_formed(a, w.dims);
  for (const Arity& a : w.arities)
    for (const Arity& p : permutations_of(a))
      if (!w.arities.count(p)) return FamilyViolation{"permutation", p};
  for (const Arity& a : w.arities)
    for (const Arity& s : subsequences_of(a))
      if (!w.arities.count(s)) return FamilyViolation{"subsequence", s};
  for (const std::string& d : w.dims)
    if (!w.arities.count({d})) return FamilyViolation{"singleton", {d}};
  return std::nullopt;
}

std::set<Arity> arity_closure(const std::vector<Arity>& given) {
  std::set<Arity> out;
  for (const Arity& a : given)
    for (const Arity& s : subsequences_of(a))
      for (const Arity& p : permutations_of(s)) out.insert(p);
  return out;
}

const EventSpace& Pff::dim_space(const std::string& dim) const {
  auto it = spaces_.find(dim);
  if (it == spaces_.end()) throw std::invalid_argument("unknown dimension " + dim);
  return it->second;
}

std::set<Arity> Pff::arities() const {
  std::set<Arity> out;
  for (const auto& [w, t] : tensors_) out.insert(w);
  return out;
}

const std::vector<Rational>& Pff::tensor(const Arity& w) const {
  auto it = tensors_.find(w);
  if (it == tensors_.end()) throw MissingArity(w);
  return it->second;
}

Rational Pff::tensor_at(const Arity& w, const std::vector<size_t>& atoms) const {
  std::vector<size_t> sizes;
  sizes.reserve(w.size());
  for (const std::string& d : w) sizes.push_back(dim_space(d).size());
  return tensor(w)[flat_index(atoms, row_major_strides(sizes))];
}

Rational Pff::eval(const Arity& w, const std::vector<Event>& events) const {
  if (events.size() != w.size())
    throw std::invalid_argument("arity and event tuple lengths differ");
  const std::vector<Rational>& t = tensor(w);
  std::vector<size_t> sizes;
  for (size_t k = 0; k < w.size(); ++k) {
    if (events[k].space() != dim_space(w[k])) throw SpaceMismatch();
    sizes.push_back(dim_space(w[k]).size());
  }
  std::vector<size_t> strides = row_major_strides(sizes);
  Rational total;
  std::vector<size_t> tuple(w.size(), 0);
  do {
    bool in = true;
    for (size_t k = 0; k < w.size() && in; ++k) in = events[k].has_atom(tuple[k]);
    if (in) total += t[flat_index(tuple, strides)];
  } while (next_tuple(tuple, sizes));
  return total;
}

PffBuilder::PffBuilder(std::vector<std::string> dims, std::vector<EventSpace> spaces)
    : dims_(std::move(dims)) {
  if (dims_.size() != spaces.size())
    throw std::invalid_argument("need one space per dimension");
  for (size_t i = 0; i < dims_.size(); ++i) {
    if (spaces[i].size() == 0) throw std::invalid_argument("empty dimension " + dims_[i]);
    if (!spaces_.emplace(dims_[i], std::move(spaces[i])).second)
      throw std::invalid_argument("repeated dimension " + dims_[i]);
  }
}

std::vector<size_t> PffBuilder::sizes(const Arity& w) const {
  std::vector<size_t> out;
  out.reserve(w.size());
  for (const std::string& d : w) out.push_back(spaces_.at(d).size());
  return out;
}

void PffBuilder::add_tensor(const Arity& w, std::vector<Rational> flat) {
  require_well_formed(w, dims_);
  if (given_.count(w)) throw PffError("tensor for " + arity_str(w) + " already given");
  std::vector<size_t> sz = sizes(w);
  size_t want = 1;
  for (size_t s : sz) want *= s;
  if (flat.size() != want)
    throw PffError("tensor for " + arity_str(w) + " needs " + std::to_string(want) + " entries");
  given_.emplace(w, std::move(flat));
}

Pff PffBuilder::finalize() const {
  if (given_.empty()) throw PffError("no tensors given");
  std::map<Arity, std::vector<Rational>> tensors = given_;

  auto place = [&](const Arity& w, std::vector<Rational> t) {
    auto it = tensors.find(w);
    if (it == tensors.end()) {
      tensors.emplace(w, std::move(t));
      return true;
    }
    if (it->second != t)
      throw PffError("tensors for " + arity_str(w) + " disagree between routes");
    return false;
  };

  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<Arity> keys;
    for (const auto& [w, t] : tensors) keys.push_back(w);
    for (const Arity& w : keys) {
      std::vector<size_t> sz = sizes(w);
      std::vector<size_t> strides = row_major_strides(sz);
      const std::vector<Rational> t = tensors.at(w);

      // Every rearrangement of the dimensions, with the tensor transposed
      // to match.
      std::vector<size_t> perm(w.size());
      std::iota(perm.begin(), perm.end(), 0);
      do {
        Arity wp;
        std::vector<size_t> szp;
        for (size_t i : perm) {
          wp.push_back(w[i]);
          szp.push_back(sz[i]);
        }
        std::vector<size_t> stridesp = row_major_strides(szp);
        std::vector<Rational> tp(t.size());
        std::vector<size_t> tup(w.size(), 0);
        do {
          std::vector<size_t> orig(w.size());
          for (size_t i = 0; i < w.size(); ++i) orig[perm[i]] = tup[i];
          tp[flat_index(tup, stridesp)] = t[flat_index(orig, strides)];
        } while (next_tuple(tup, szp));
        changed |= place(wp, std::move(tp));
      } while (std::next_permutation(perm.begin(), perm.end()));

      // Every marginal, summing one dimension out.
      if (w.size() < 2) continue;
      for (size_t k = 0; k < w.size(); ++k) {
        Arity wm;
        std::vector<size_t> szm;
        for (size_t i = 0; i < w.size(); ++i)
          if (i != k) {
            wm.push_back(w[i]);
            szm.push_back(sz[i]);
          }
        std::vector<size_t> stridesm = row_major_strides(szm);
        size_t cells = 1;
        for (size_t s : szm) cells *= s;
        std::vector<Rational> tm(cells);
        std::vector<size_t> tup(w.size(), 0);
        do {
          std::vector<size_t> red;
          for (size_t i = 0; i < w.size(); ++i)
            if (i != k) red.push_back(tup[i]);
          tm[flat_index(red, stridesm)] += t[flat_index(tup, strides)];
        } while (next_tuple(tup, sz));
        changed |= place(wm, std::move(tm));
      }
    }
  }

  for (const std::string& d : dims_)
    if (!tensors.count({d})) throw PffError("no tensor involves dimension " + d);
  for (const auto& [w, t] : tensors) {
    Rational mass;
    for (const Rational& v : t) {
      if (v.sgn() < 0)
        throw PffError("negative entry " + v.str() + " in tensor " + arity_str(w));
      mass += v;
    }
    if (!mass.is_one())
      throw PffError("tensor " + arity_str(w) + " has mass " + mass.str());
  }

  Pff p;
  p.dims_ = dims_;
  p.spaces_ = spaces_;
  p.tensors_ = std::move(tensors);
  return p;
}

namespace {

std::string tuple_str(const std::vector<Event>& events) {
  std::string s = "(";
  for (size_t i = 0; i < events.size(); ++i) {
    if (i) s += ", ";
    s += event_str(events[i]);
  }
  return s + ")";
}

}  // namespace

std::optional<PffViolation> check_pff_axioms(const Pff& p) {
  for (const Arity& w : p.arities()) {
    std::vector<std::vector<Event>> evs;
    std::vector<size_t> counts;
    for (const std::string& d : w) {
      evs.push_back(all_events(p.dim_space(d)));
      counts.push_back(evs.back().size());
    }
    auto tuple_events = [&](const std::vector<size_t>& tup) {
      std::vector<Event> es;
      es.reserve(w.size());
      for (size_t k = 0; k < w.size(); ++k) es.push_back(evs[k][tup[k]]);
      return es;
    };

    std::vector<Event> tops;
    for (size_t k = 0; k < w.size(); ++k) tops.push_back(ev_top(p.dim_space(w[k])));
    if (p.eval(w, tops) != Rational(1))
      return PffViolation{"unit", arity_str(w) + " " + tuple_str(tops)};

    for (size_t k = 0; k < w.size(); ++k) {
      std::vector<Event> es = tops;
      es[k] = ev_bot(p.dim_space(w[k]));
      if (!p.eval(w, es).is_zero())
        return PffViolation{"zero", arity_str(w) + " " + tuple_str(es)};
    }

    std::vector<size_t> tup(w.size(), 0);
    do {
      std::vector<Event> es = tuple_events(tup);
      Rational v = p.eval(w, es);
      if (v != v.abs())
        return PffViolation{"nonneg", arity_str(w) + " " + tuple_str(es)};
    } while (next_tuple(tup, counts));

    for (size_t k = 0; k < w.size(); ++k) {
      std::vector<size_t> rest_counts = counts;
      rest_counts[k] = 1;
      std::vector<size_t> rtup(w.size(), 0);
      do {
        std::vector<Event> base = tuple_events(rtup);
        for (const Event& x : evs[k])
          for (const Event& y : evs[k]) {
            std::vector<Event> ex = base, ey = base, eor = base, eand = base;
            ex[k] = x;
            ey[k] = y;
            eor[k] = x | y;
            eand[k] = x & y;
            Rational lhs = p.eval(w, eor);
            Rational rhs = p.eval(w, ex) + p.eval(w, ey) - p.eval(w, eand);
            if (lhs != rhs)
              return PffViolation{"modularity",
                                  arity_str(w) + " slot " + w[k] + " x=" + event_str(x) +
                                      ", y=" + event_str(y) + " rest " + tuple_str(base)};
          }
      } while (next_tuple(rtup, rest_counts));
    }

    std::vector<size_t> perm(w.size());
    std::iota(perm.begin(), perm.end(), 0);
    do {
      Arity wp;
      for (size_t i : perm) wp.push_back(w[i]);
      std::vector<size_t> t2(w.size(), 0);
      do {
        std::vector<Event> es = tuple_events(t2);
        std::vector<Event> esp;
        for (size_t i : perm) esp.push_back(es[i]);
        if (p.eval(w, es) != p.eval(wp, esp))
          return PffViolation{"permutation",
                              arity_str(w) + " vs " + arity_str(wp) + " " + tuple_str(es)};
      } while (next_tuple(t2, counts));
    } while (std::next_permutation(perm.begin(), perm.end()));

    if (w.size() >= 2) {
      for (size_t k = 0; k < w.size(); ++k) {
        Arity wm;
        for (size_t i = 0; i < w.size(); ++i)
          if (i != k) wm.push_back(w[i]);
        std::vector<size_t> rest_counts = counts;
        rest_counts[k] = 1;
        std::vector<size_t> rtup(w.size(), 0);
        do {
          std::vector<Event> es = tuple_events(rtup);
          es[k] = tops[k];
          std::vector<Event> esm;
          for (size_t i = 0; i < w.size(); ++i)
            if (i != k) esm.push_back(es[i]);
          if (p.eval(w, es) != p.eval(wm, esm))
            return PffViolation{"marginal",
                                arity_str(w) + " slot " + w[k] + " " + tuple_str(es)};
        } while (next_tuple(rtup, rest_counts));
      }
    }
  }
  return std::nullopt;
}

Rational md_e(const Pff& p, const std::string& dim, const CanonCV& x) {
  if (x.space() != p.dim_space(dim)) throw SpaceMismatch();
  Rational total;
  for (const FlatEntry& fe : cv_flat_entries(x)) total += fe.value * p.eval({dim}, {fe.event});
  return total;
}

Rational md_var(const Pff& p, const std::string& dim, const CanonCV& x) {
  Rational m = md_e(p, dim, x);
  return md_e(p, dim, x * x) - m * m;
}

Rational md_cov(const Pff& p, const std::string& dx, const CanonCV& x,
                const std::string& dy, const CanonCV& y) {
  if (dx == dy) throw std::invalid_argument("covariance needs two distinct dimensions");
  if (x.space() != p.dim_space(dx) || y.space() != p.dim_space(dy)) throw SpaceMismatch();
  Rational mixed;
  for (const FlatEntry& fx : cv_flat_entries(x))
    for (const FlatEntry& fy : cv_flat_entries(y))
      mixed += fx.value * fy.value * p.eval({dx, dy}, {fx.event, fy.event});
  return mixed - md_e(p, dx, x) * md_e(p, dy, y);
}

Rational md_corr2(const Pff& p, const std::string& dx, const CanonCV& x,
                  const std::string& dy, const CanonCV& y) {
  Rational c = md_cov(p, dx, x, dy, y);
  return c * c * (md_var(p, dx, x) * md_var(p, dy, y)).inv();
}

Event ProductSpace::pair(const Event& e, const Event& f) const {
  if (e.space() != left || f.space() != right) throw SpaceMismatch();
  uint64_t bits = 0;
  for (size_t i = 0; i < left.size(); ++i)
    for (size_t j = 0; j < right.size(); ++j)
      if (e.has_atom(i) && f.has_atom(j)) bits |= uint64_t{1} << (i * right.size() + j);
  return Event(space, bits);
}

CanonCV ProductSpace::lift_left(const CanonCV& x) const {
  if (x.space() != left) throw SpaceMismatch();
  std::vector<Rational> v(space.size());
  for (size_t i = 0; i < left.size(); ++i)
    for (size_t j = 0; j < right.size(); ++j) v[i * right.size() + j] = x.at(i);
  return CanonCV(space, std::move(v));
}

CanonCV ProductSpace::lift_right(const CanonCV& y) const {
  if (y.space() != right) throw SpaceMismatch();
  std::vector<Rational> v(space.size());
  for (size_t i = 0; i < left.size(); ++i)
    for (size_t j = 0; j < right.size(); ++j) v[i * right.size() + j] = y.at(j);
  return CanonCV(space, std::move(v));
}

std::pair<ProductSpace, WeightPF> lift_product(const Pff& p, const std::string& da,
                                               const std::string& db) {
  const std::vector<Rational>& t = p.tensor({da, db});
  const EventSpace& sa = p.dim_space(da);
  const EventSpace& sb = p.dim_space(db);
  std::vector<std::string> atoms;
  for (size_t i = 0; i < sa.size(); ++i)
    for (size_t j = 0; j < sb.size(); ++j)
      atoms.push_back("(" + sa.atom_name(i) + "," + sb.atom_name(j) + ")");
  ProductSpace ps{make_space(atoms), sa, sb};
  WeightPF w(ps.space, t);
  return {std::move(ps), std::move(w)};
}

ReducedStats reduced_stats(const Pff& p, const std::string& dx, const CanonCV& x,
                           const std::string& dy, const CanonCV& y) {
  auto [ps, w] = lift_product(p, dx, dy);
  CanonCV x0 = ps.lift_left(x);
  CanonCV y1 = ps.lift_right(y);
  ReducedStats r{e_p(x0, w), var_p(x0, w), e_p(y1, w), var_p(y1, w),
                 cov_p(x0, y1, w), corr2_p(x0, y1, w)};
  return r;
}

namespace {

// One linear inequality sum(coeffs * y) <= bound over the free variables.
struct Ineq {
  std::vector<Rational> coeffs;
  Rational bound;
};

}  // namespace

JointResult joint_exists(const Pff& p, size_t max_cells) {
  const std::vector<std::string>& dims = p.dims();
  std::vector<size_t> sizes;
  size_t cells = 1;
  for (const std::string& d : dims) {
    sizes.push_back(p.dim_space(d).size());
    cells *= sizes.back();
    if (cells > max_cells) throw std::invalid_argument("joint tuple space exceeds the bound");
  }
  std::vector<size_t> strides = row_major_strides(sizes);

  // One equation per atom tuple of each arity: the joint weights projecting
  // onto that tuple must sum to the tensor entry there.
  std::vector<std::pair<std::vector<Rational>, Rational>> eqs;
  for (const Arity& w : p.arities()) {
    std::vector<size_t> pos;
    for (const std::string& d : w)
      pos.push_back(std::find(dims.begin(), dims.end(), d) - dims.begin());
    std::vector<size_t> wsizes;
    for (const std::string& d : w) wsizes.push_back(p.dim_space(d).size());
    std::vector<size_t> wstrides = row_major_strides(wsizes);
    const std::vector<Rational>& t = p.tensor(w);

    std::vector<std::vector<Rational>> rows(t.size(),
                                            std::vector<Rational>(cells, Rational(0)));
    std::vector<size_t> tup(dims.size(), 0);
    do {
      std::vector<size_t> proj;
      proj.reserve(w.size());
      for (size_t k : pos) proj.push_back(tup[k]);
      rows[flat_index(proj, wstrides)][flat_index(tup, strides)] = Rational(1);
    } while (next_tuple(tup, sizes));
    for (size_t r = 0; r < rows.size(); ++r) eqs.push_back({std::move(rows[r]), t[r]});
  }
  std::vector<std::pair<std::vector<Rational>, Rational>> eqs_copy = eqs;

  std::vector<size_t> order(cells);
  std::iota(order.begin(), order.end(), 0);
  auto solved = rref(cells, std::move(eqs_copy), order);
  if (!solved) return {false, {}, "the marginal equations are inconsistent"};

  std::vector<int> pivot_row(cells, -1);
  for (size_t r = 0; r < solved->size(); ++r) pivot_row[(*solved)[r].pivot] = static_cast<int>(r);
  std::vector<size_t> free_vars;
  for (size_t i = 0; i < cells; ++i)
    if (pivot_row[i] < 0) free_vars.push_back(i);
  size_t m = free_vars.size();

  // Nonnegativity of every cell, written over the free variables.
  std::vector<Ineq> start;
  for (size_t i = 0; i < cells; ++i) {
    Ineq q{std::vector<Rational>(m, Rational(0)), Rational(0)};
    if (pivot_row[i] >= 0) {
      const GuardRow& row = (*solved)[pivot_row[i]];
      for (size_t j = 0; j < m; ++j) q.coeffs[j] = row.coeffs[free_vars[j]];
      q.bound = row.rhs;
    } else {
      size_t j = std::find(free_vars.begin(), free_vars.end(), i) - free_vars.begin();
      q.coeffs[j] = Rational(-1);
    }
    start.push_back(std::move(q));
  }

  // Fourier-Motzkin elimination, keeping each stage for witness recovery.
  std::vector<std::vector<Ineq>> stages(m + 1);
  stages[m] = std::move(start);
  for (size_t k = m; k-- > 0;) {
    std::vector<Ineq> next;
    std::vector<const Ineq*> pos, neg;
    for (const Ineq& q : stages[k + 1]) {
      int s = q.coeffs[k].sgn();
      if (s > 0) pos.push_back(&q);
      else if (s < 0) neg.push_back(&q);
      else next.push_back({std::vector<Rational>(q.coeffs.begin(), q.coeffs.begin() + k),
                           q.bound});
    }
    for (const Ineq* u : pos)
      for (const Ineq* l : neg) {
        // u: a y_k + r <= b with a > 0; l: -c y_k + r' <= b' with c > 0.
        // c*u + a*l removes y_k.
        Rational a = u->coeffs[k], c = -l->coeffs[k];
        Ineq q{std::vector<Rational>(k), c * u->bound + a * l->bound};
        for (size_t j = 0; j < k; ++j) q.coeffs[j] = c * u->coeffs[j] + a * l->coeffs[j];
        next.push_back(std::move(q));
      }
    stages[k] = std::move(next);
  }
  for (const Ineq& q : stages[0])
    if (q.bound.sgn() < 0)
      return {false, {}, "elimination derives 0 <= " + q.bound.str()};

  // Recover free-variable values stage by stage.
  std::vector<Rational> y(m);
  for (size_t k = 0; k < m; ++k) {
    std::optional<Rational> lo, hi;
    for (const Ineq& q : stages[k + 1]) {
      int s = q.coeffs[k].sgn();
      if (s == 0) continue;
      Rational rest = q.bound;
      for (size_t j = 0; j < k; ++j) rest -= q.coeffs[j] * y[j];
      Rational v = rest / q.coeffs[k];
      if (s > 0) hi = hi ? std::min(*hi, v) : v;
      else lo = lo ? std::max(*lo, v) : v;
    }
    if (lo && hi) {
      if (*hi < *lo) throw std::logic_error("joint_exists: bounds crossed during recovery");
      y[k] = (*lo + *hi) / Rational(2);
    } else if (lo) {
      y[k] = *lo;
    } else if (hi) {
      y[k] = *hi;
    } else {
      y[k] = Rational(0);
    }
  }

  std::vector<Rational> q(cells);
  for (size_t j = 0; j < m; ++j) q[free_vars[j]] = y[j];
  for (const GuardRow& row : *solved) {
    Rational v = row.rhs;
    for (size_t j = 0; j < m; ++j) v -= row.coeffs[free_vars[j]] * y[j];
    q[row.pivot] = v;
  }

  // The witness must check out against the original system.
  for (const Rational& v : q)
    if (v.sgn() < 0) throw std::logic_error("joint_exists: negative witness entry");
  for (const auto& [coeffs, rhs] : eqs) {
    Rational v;
    for (size_t i = 0; i < cells; ++i) v += coeffs[i] * q[i];
    if (v != rhs) throw std::logic_error("joint_exists: witness misses an equation");
  }
  return {true, std::move(q), ""};
}

}  // namespace mpc
