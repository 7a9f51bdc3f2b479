#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <vector>

#include "mpc/config_space.hpp"
#include "mpc/multidim.hpp"
#include "mpc/random_variable.hpp"
#include "mpc/session.hpp"

using namespace mpc;

namespace {

using Problems = std::vector<std::string>;

Rational q(long long n, long long d) { return Rational(BigInt(n), BigInt(d)); }

void require(Problems& p, bool ok, const std::string& what) {
  if (!ok) p.push_back(what);
}

std::vector<Rational> rand_values(size_t n, std::mt19937_64& rng, int lo, int hi) {
  std::uniform_int_distribution<int> num(lo, hi);
  std::uniform_int_distribution<int> den(1, 2);
  std::vector<Rational> v(n);
  for (Rational& x : v) x = Rational(BigInt(num(rng)), BigInt(den(rng)));
  return v;
}

WeightPF rand_weights(const EventSpace& s, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(0, 6);
  std::vector<Rational> w(s.size());
  Rational total;
  for (Rational& x : w) {
    x = Rational(num(rng));
    total += x;
  }
  if (total.is_zero()) {
    w[0] = Rational(1);
    total = Rational(1);
  }
  for (Rational& x : w) x /= total;
  return WeightPF(s, w);
}

std::vector<Rational> rand_tensor(size_t cells, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(0, 5);
  std::vector<Rational> t(cells);
  Rational total;
  for (Rational& x : t) {
    x = Rational(num(rng));
    total += x;
  }
  if (total.is_zero()) {
    t[0] = Rational(1);
    total = Rational(1);
  }
  for (Rational& x : t) x /= total;
  return t;
}

ConfigExprPtr rand_cfg(const EventSpace& s, std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 4);
  std::uniform_int_distribution<int> obj(1, 3);
  std::uniform_int_distribution<size_t> atom(0, s.size() - 1);
  std::uniform_int_distribution<int> val(-2, 2);
  switch (pick(rng)) {
    case 0:
      return cfg_empty();
    case 1:
      return cfg_object("c" + std::to_string(obj(rng)));
    case 2:
      return cfg_par(rand_cfg(s, rng, depth - 1), rand_cfg(s, rng, depth - 1));
    case 3: {
      EventExprPtr e = e_atom(s.atom_name(atom(rng)));
      if (atom(rng) == 0) e = e_or(e, e_atom(s.atom_name(atom(rng))));
      return cfg_guard(e, rand_cfg(s, rng, depth - 1));
    }
    default:
      return cfg_yield(rand_cfg(s, rng, depth - 1), cv_value(Rational(val(rng))));
  }
}

GuardTable parse_table(const std::string& text, std::vector<std::string> vars) {
  return gt_parse(parse_term(text), vars);
}

// 1. Every equational law of each calculus holds on its sample grid:
// meadow and sign laws over rationals, restricted cancellation, the
// conditional-value ring with embedded constants and guards, configuration
// laws, utility extraction, the family laws, event pairing and cylinder
// lifts.
Problems axiom_suites() {
  Problems p;
  auto law = [&](const char* lhs, const char* rhs) {
    EqCheck r = check_equation(parse_term(lhs), parse_term(rhs));
    require(p, r.ok, std::string("law ") + lhs + " = " + rhs + " fails");
  };
  law("(x+y)+z", "x+(y+z)");
  law("x+y", "y+x");
  law("x+0", "x");
  law("x+(-x)", "0");
  law("(x*y)*z", "x*(y*z)");
  law("x*y", "y*x");
  law("1*x", "x");
  law("x*(y+z)", "x*y+x*z");
  law("(x^-1)^-1", "x");
  law("x*(x*x^-1)", "x");
  law("s(one(x))", "one(x)");
  law("s(zero(x))", "zero(x)");
  law("s(0-1)", "0-1");
  law("s(x^-1)", "s(x)");
  law("s(x*y)", "s(x)*s(y)");
  law("zero(s(x)-s(y))*(s(x+y)-s(x))", "0");
  for (const Rational& v : default_grid())
    if (!v.is_zero())
      require(p, v * v.inv() == Rational(1),
              "nonzero cancellation fails at " + v.str());

  std::mt19937_64 rng(20260816);
  for (size_t atoms = 1; atoms <= 3; ++atoms) {
    std::vector<std::string> names;
    for (size_t i = 0; i < atoms; ++i) names.push_back(std::string(1, char('a' + i)));
    EventSpace s = make_space(names);
    CanonCV zero = cv_const(s, Rational(0)), one = cv_const(s, Rational(1));
    for (int i = 0; i < 30; ++i) {
      CanonCV x(s, rand_values(atoms, rng, -3, 3));
      CanonCV y(s, rand_values(atoms, rng, -3, 3));
      CanonCV z(s, rand_values(atoms, rng, -3, 3));
      require(p, (x + y) + z == x + (y + z), "value addition not associative");
      require(p, x + y == y + x, "value addition not commutative");
      require(p, x + zero == x, "zero not neutral");
      require(p, x + (-x) == zero, "negation not inverse");
      require(p, (x * y) * z == x * (y * z), "value product not associative");
      require(p, x * y == y * x, "value product not commutative");
      require(p, one * x == x, "one not neutral");
      require(p, x * (y + z) == x * y + x * z, "value product not distributive");
      require(p, x.inv().inv() == x, "double inverse moves a value");
      require(p, x * (x * x.inv()) == x, "restricted cancellation fails");
    }
    for (const Rational& a : {Rational(0), Rational(2), q(-3, 2)})
      for (const Rational& b : {Rational(0), Rational(1), q(5, 3)}) {
        require(p, cv_const(s, -a) == -cv_const(s, a), "constants do not negate");
        require(p, cv_const(s, a.inv()) == cv_const(s, a).inv(),
                "constants do not invert");
        require(p, cv_const(s, a + b) == cv_const(s, a) + cv_const(s, b),
                "constants do not add");
        require(p, cv_const(s, a * b) == cv_const(s, a) * cv_const(s, b),
                "constants do not multiply");
        if (cv_const(s, a) == zero)
          require(p, a.is_zero(), "a nonzero constant embeds to zero");
      }
    for (const Event& e : all_events(s)) {
      for (int i = 0; i < 8; ++i) {
        CanonCV x(s, rand_values(atoms, rng, -3, 3));
        CanonCV y(s, rand_values(atoms, rng, -3, 3));
        require(p, cv_guarded(ev_top(s), x) == x, "top guard changes a value");
        require(p, cv_guarded(ev_bot(s), x) == zero, "bottom guard keeps a value");
        require(p, cv_guarded(e, x + y) == cv_guarded(e, x) + cv_guarded(e, y),
                "guard does not distribute over addition");
        require(p, cv_guarded(e, x * y) == cv_guarded(e, x) * cv_guarded(e, y),
                "guard does not distribute over product");
        require(p, cv_guarded(e, -x) == -cv_guarded(e, x),
                "guard does not commute with negation");
        require(p, cv_guarded(e, x.inv()) == cv_guarded(e, x).inv(),
                "guard does not commute with inverse");
        for (const Event& f : all_events(s)) {
          require(p,
                  cv_guarded(e | f, x) ==
                      cv_guarded(e, x) + cv_guarded(f, x) - cv_guarded(e & f, x),
                  "guards are not modular");
          require(p, cv_guarded(e & f, x) == cv_guarded(e, cv_guarded(f, x)),
                  "guard conjunction is not nesting");
          CanonCV picked = cv_guarded(e, x) + cv_guarded(~e, y);
          for (size_t a = 0; a < s.size(); ++a)
            require(p, picked.at(a) == (e.has_atom(a) ? x.at(a) : y.at(a)),
                    "guarded choice picks the wrong arm");
        }
      }
    }
  }

  for (size_t atoms = 2; atoms <= 3; ++atoms) {
    std::vector<std::string> names;
    for (size_t i = 0; i < atoms; ++i) names.push_back(std::string(1, char('e' + i)));
    EventSpace s = make_space(names);
    WeightPF pw = rand_weights(s, rng);
    auto canon = [&](const ConfigExprPtr& c) { return cfg_canon(c, s); };
    for (int i = 0; i < 150; ++i) {
      ConfigExprPtr a = rand_cfg(s, rng, 3), b = rand_cfg(s, rng, 3),
                    c = rand_cfg(s, rng, 3);
      EventExprPtr e = e_atom(s.atom_name(0)), f = e_atom(s.atom_name(1));
      CVExprPtr x = cv_value(Rational(9)), y = cv_value(Rational(-4));
      require(p, canon(cfg_par(a, b)) == canon(cfg_par(b, a)),
              "parallel composition not commutative");
      require(p, canon(cfg_par(cfg_par(a, b), c)) == canon(cfg_par(b, cfg_par(a, c))),
              "parallel composition not associative");
      require(p, canon(cfg_par(a, cfg_empty())) == canon(a),
              "empty configuration not neutral");
      require(p, canon(cfg_guard(e_top(), a)) == canon(a), "top guard changes a config");
      require(p, canon(cfg_guard(e_bot(), a)) == canon(cfg_empty()),
              "bottom guard keeps a config");
      require(p,
              canon(cfg_guard(e, cfg_par(a, b))) ==
                  canon(cfg_par(cfg_guard(e, a), cfg_guard(e, b))),
              "guard does not distribute over parallel");
      require(p,
              canon(cfg_par(cfg_guard(e, a), cfg_guard(f, a))) ==
                  canon(cfg_par(cfg_guard(e_or(e, f), a), cfg_guard(e_and(e, f), a))),
              "guard split by union and intersection differs");
      require(p, canon(cfg_guard(e_and(e, f), a)) == canon(cfg_guard(e, cfg_guard(f, a))),
              "nested guards differ from conjunction");
      require(p, canon(cfg_object("c1")) ==
                     canon(cfg_yield(cfg_object("c1"), cv_value(Rational(0)))),
              "bare object differs from zero yield");
      require(p, canon(cfg_yield(cfg_yield(a, x), y)) == canon(cfg_yield(a, y)),
              "outermost yield does not win");
      require(p, canon(cfg_yield(cfg_empty(), x)) == canon(cfg_empty()),
              "empty configuration takes a yield");
      require(p,
              canon(cfg_yield(cfg_par(a, b), x)) ==
                  canon(cfg_par(cfg_yield(a, x), cfg_yield(b, x))),
              "yield does not distribute over parallel");
      require(p, expected_utility(cfg_par(a, b), pw) ==
                     expected_utility(a, pw) + expected_utility(b, pw),
              "utility not additive over parallel");
      require(p,
              e_p(utility(canon(cfg_guard(e, a))), pw) ==
                  e_p(cv_guarded(eval_event(e, s), utility(canon(a))), pw),
              "utility does not commute with guards");
      require(p, expected_utility(cfg_yield(cfg_object("c2"), x), pw) == Rational(9),
              "yield extraction misses the attached value");
    }
    require(p, expected_utility(cfg_empty(), pw) == Rational(0),
            "empty configuration has utility");
  }

  for (int i = 0; i < 10; ++i) {
    EventSpace a = make_space({"a1", "a2"});
    EventSpace b = make_space({"b1", "b2", "b3"});
    PffBuilder builder({"a", "b"}, {a, b});
    builder.add_tensor({"a", "b"}, rand_tensor(6, rng));
    Pff fam = builder.finalize();
    auto v = check_pff_axioms(fam);
    require(p, !v.has_value(),
            v ? "family law " + v->law + " fails at " + v->detail : "");

    auto [prod, w] = lift_product(fam, "a", "b");
    auto evs_a = all_events(prod.left);
    auto evs_b = all_events(prod.right);
    require(p, prod.pair(ev_top(prod.left), ev_top(prod.right)) == ev_top(prod.space),
            "paired tops are not top");
    for (const Event& e1 : evs_a)
      for (const Event& e2 : evs_b) {
        require(p, prod.pair(e1, ev_bot(prod.right)) == ev_bot(prod.space),
                "pairing with bottom is not bottom");
        require(p, prod.pair(ev_bot(prod.left), e2) == ev_bot(prod.space),
                "pairing with bottom is not bottom");
        require(p, w.eval(prod.pair(e1, e2)) == fam.eval({"a", "b"}, {e1, e2}),
                "product weights disagree with the family");
        for (const Event& f1 : evs_a)
          for (const Event& f2 : evs_b) {
            require(p,
                    (prod.pair(e1, e2) & prod.pair(f1, f2)) ==
                        prod.pair(e1 & f1, e2 & f2),
                    "pairing does not respect intersection");
            require(p,
                    prod.pair(e1, e2 | f2) == (prod.pair(e1, e2) | prod.pair(e1, f2)),
                    "pairing does not respect right unions");
            require(p,
                    prod.pair(e1 | f1, e2) == (prod.pair(e1, e2) | prod.pair(f1, e2)),
                    "pairing does not respect left unions");
          }
      }
    for (int j = 0; j < 10; ++j) {
      CanonCV x(prod.left, rand_values(2, rng, -3, 3));
      CanonCV y(prod.left, rand_values(2, rng, -3, 3));
      require(p, prod.lift_left(x + y) == prod.lift_left(x) + prod.lift_left(y),
              "cylinder lift not additive");
      require(p, prod.lift_left(x * y) == prod.lift_left(x) * prod.lift_left(y),
              "cylinder lift not multiplicative");
      require(p, prod.lift_left(-x) == -prod.lift_left(x),
              "cylinder lift does not negate");
      require(p, prod.lift_left(x.inv()) == prod.lift_left(x).inv(),
              "cylinder lift does not invert");
      require(p,
              prod.lift_left(cv_const(prod.left, Rational(5))) ==
                  cv_const(prod.space, Rational(5)),
              "cylinder lift moves constants");
      for (const Event& e : evs_a)
        require(p,
                prod.lift_left(cv_guarded(e, x)) ==
                    cv_guarded(prod.pair(e, ev_top(prod.right)), prod.lift_left(x)),
                "cylinder lift does not respect guards");
      CanonCV z(prod.right, rand_values(3, rng, -3, 3));
      for (const Event& e : evs_b)
        require(p,
                prod.lift_right(cv_guarded(e, z)) ==
                    cv_guarded(prod.pair(ev_top(prod.left), e), prod.lift_right(z)),
                "cylinder lift does not respect right guards");
    }
  }
  return p;
}

// 2. The summation facts: empty and spanning bodies sum to zero, the origin
// indicator to one, adding it shifts finite sums by one and leaves infinite
// ones alone, closed factors pull out, point links resolve, finite sums add,
// and a joint sum differs from iterated sums on the separating body.
Problems summation_facts() {
  Problems p;
  auto total = [&](const char* text, std::vector<std::string> vars) {
    return fss_all(parse_table(text, vars));
  };
  require(p, total("0", {"x"}) == Rational(0), "sum of nothing is not 0");
  require(p, total("1", {"x"}) == Rational(0), "spanning constant sums to a value");
  require(p, total("one(x)", {"x"}) == Rational(0), "spanning indicator sums to a value");
  require(p, total("one(x)", {"x"}) != Rational(-1),
          "spanning indicator behaves like a finite carrier");
  require(p, total("zero(x)", {"x"}) == Rational(1), "origin indicator misses its mass");
  for (const char* body : {"zero(x-1)*x", "zero(x^2-1)", "zero(x-2)*5"}) {
    std::string with = std::string(body) + "+zero(x)";
    require(p, total(with.c_str(), {"x"}) == total(body, {"x"}) + Rational(1),
            "origin indicator does not shift a finite sum by one");
  }
  require(p, total("1+zero(x)", {"x"}) == total("1", {"x"}),
          "origin indicator shifts an infinite sum");
  require(p, total("one(x)+zero(x)", {"x"}) == total("one(x)", {"x"}),
          "origin indicator shifts an infinite sum");

  GuardTable pulled = fss(parse_table("(zero(x-1)+zero(x-2))*y", {"x", "y"}), {"x"});
  GuardTable twice = parse_table("2*y", {"y"});
  for (const Rational& v : default_grid())
    require(p, pulled.eval({v}) == twice.eval({v}), "closed factor does not pull out");

  GuardTable linked = fss(parse_table("x*zero(y-x)", {"x", "y"}), {"x"});
  for (const Rational& v : default_grid())
    require(p, linked.eval({v}) == v, "point link does not resolve");
  require(p, total("x*zero(5/3-x)", {"x"}) == q(5, 3), "closed point link misses");

  GuardTable t = parse_table("zero(x-1)*2", {"x"});
  GuardTable r = parse_table("zero(x-1)*(0-2)+zero(x-3)", {"x"});
  require(p, fss_all(t) + fss_all(r) == fss_all(gt_add(t, r)),
          "finite sums are not additive");

  GuardTable sep = parse_table("zero(x)*zero(y)+zero(1-x)", {"x", "y"});
  require(p, fss_all(sep) == Rational(0), "joint sum of the separating body is wrong");
  require(p, fss_all(fss(sep, {"y"})) == Rational(1),
          "iterated sum of the separating body is wrong");
  return p;
}

// 3. The mass-function test is sensitive to representation over the
// rationals: the candidate density with irrational carrier has mass 0 and
// is rejected, adding the origin indicator gives mass 1 and acceptance.
Problems mass_sensitivity() {
  Problems p;
  const char* shape = "(1/4)*zero(x^2-2)*((1+s(x))*x+(1-s(x))*(2-x))";
  PmfCheck bare = is_pmf(parse_table(shape, {"x"}));
  require(p, !bare.ok, "the massless candidate is accepted");
  require(p, bare.reason == "mass 0", "rejection reason is not mass 0");
  PmfCheck fixed = is_pmf(parse_table(std::string(shape) + "+zero(x)", {"x"}));
  require(p, fixed.ok, "the corrected candidate is rejected");
  require(p, fixed.mass == Rational(1), "the corrected candidate has wrong mass");
  return p;
}

// 4. Weight functions satisfy every axiom system; the two-atom assignment
// (0,0,1) satisfies the weakened systems and the Bayes rule but fails
// modularity exactly on the atoms; no assignment satisfies the full axioms
// while violating the Bayes rule.
Problems probability_audits() {
  Problems p;
  std::mt19937_64 rng(4143);
  for (size_t atoms = 1; atoms <= 3; ++atoms) {
    std::vector<std::string> names;
    for (size_t i = 0; i < atoms; ++i) names.push_back(std::string(1, char('a' + i)));
    EventSpace s = make_space(names);
    for (int i = 0; i < 8; ++i) {
      TablePF t = rand_weights(s, rng).table();
      for (const char* sys : {"PF", "WPF", "PF'", "BR", "BR2"}) {
        auto v = check_axioms(t, *axiom_system(sys));
        require(p, !v.has_value(),
                v ? std::string(sys) + " fails on a weight function: " + v->str() : "");
      }
    }
  }

  EventSpace s = make_space({"e", "f"});
  TablePF skew(s, {Rational(0), Rational(0), Rational(0), Rational(1)});
  require(p, !check_axioms(skew, *axiom_system("WPF")).has_value(),
          "the skew assignment fails the weakened axioms");
  require(p, !check_axioms(skew, *axiom_system("BR")).has_value(),
          "the skew assignment fails the Bayes rule");
  auto v = check_axioms(skew, *axiom_system("PF"));
  require(p, v.has_value(), "the skew assignment passes the full axioms");
  if (v) {
    require(p, v->axiom == PfAxiom::Modularity, "the failing axiom is not modularity");
    require(p, v->str() == "modularity at x=e, y=f",
            "the first witness is not the atom pair");
  }

  std::vector<Rational> grid{Rational(0), q(1, 2), Rational(1)};
  require(p, !search_counterexample(s, *axiom_system("PF"), {{PfAxiom::Bayes}}, grid)
                   .has_value(),
          "a full model violating the Bayes rule was found");
  auto found = search_counterexample(s, *axiom_system("WPF"), {{PfAxiom::Modularity}},
                                     {Rational(0), Rational(1)});
  require(p, found.has_value() && found->values() == skew.values(),
          "the search does not find the skew assignment first");
  return p;
}

// 5. Over a grid of two-atom assignments, every table satisfying unit,
// zero, nonnegativity and the total Bayes rule is additive over
// complementary splits.
Problems total_bayes_additivity() {
  Problems p;
  EventSpace s = make_space({"e", "f"});
  auto evs = all_events(s);
  std::vector<Rational> grid{Rational(0), q(1, 4), q(1, 3), q(1, 2),
                             q(2, 3),     q(3, 4), Rational(1)};
  std::vector<PfAxiom> axioms{PfAxiom::Unit, PfAxiom::Zero, PfAxiom::Nonneg,
                              PfAxiom::BayesTotal};
  size_t passed = 0;
  std::vector<size_t> idx(4, 0);
  for (;;) {
    TablePF t(s, {grid[idx[0]], grid[idx[1]], grid[idx[2]], grid[idx[3]]});
    if (!check_axioms(t, axioms).has_value()) {
      ++passed;
      for (const Event& y : evs)
        for (const Event& z : evs)
          require(p, t.eval(y) == t.eval(y & z) + t.eval(y & ~z),
                  "a total-Bayes table is not additive");
    }
    size_t k = idx.size();
    while (true) {
      if (k == 0) break;
      if (++idx[--k] < grid.size()) break;
      idx[k] = 0;
    }
    bool done = true;
    for (size_t i : idx) done &= i == 0;
    if (done) break;
  }
  require(p, passed >= 3, "the scan filtered out every table");
  return p;
}

// 6. A guarded unit breaks unrestricted cancellation while the value ring
// laws hold, and flattening a canonical value and re-canonicalizing is the
// identity.
Problems guarded_unit_and_flat_forms() {
  Problems p;
  for (size_t atoms = 2; atoms <= 3; ++atoms) {
    std::vector<std::string> names;
    for (size_t i = 0; i < atoms; ++i) names.push_back(std::string(1, char('a' + i)));
    EventSpace s = make_space(names);
    CanonCV x = cv_guarded(ev_atom(s, size_t(0)), cv_const(s, Rational(1)));
    require(p, x != cv_const(s, Rational(0)), "the guarded unit is zero");
    require(p, x * x.inv() != cv_const(s, Rational(1)),
            "the guarded unit cancels to one");
    require(p, x * (x * x.inv()) == x, "restricted cancellation fails on the witness");
  }
  std::mt19937_64 rng(606);
  EventSpace s = make_space({"a", "b", "c"});
  for (int i = 0; i < 1000; ++i) {
    CanonCV y(s, rand_values(3, rng, -3, 3));
    require(p, cv_canon(cv_flat(y), s) == y, "flat form does not round trip");
  }
  return p;
}

// 7. The three routes to each moment agree: flat-form sums, distribution
// extraction, and per-atom random-variable sums, exhaustively on two atoms
// and sampled on three.
Problems moment_routes() {
  Problems p;
  EventSpace s = make_space({"e", "f"});
  std::vector<WeightPF> ps;
  for (auto [a, b] : std::vector<std::pair<Rational, Rational>>{
           {Rational(0), Rational(1)},
           {Rational(1), Rational(0)},
           {q(1, 2), q(1, 2)},
           {q(1, 3), q(2, 3)},
           {q(1, 4), q(3, 4)}})
    ps.push_back(WeightPF(s, {a, b}));
  auto agree = [&](const CanonCV& x, const CanonCV& y, const WeightPF& w) {
    RandomVariable rx = rv_of_cv(x), ry = rv_of_cv(y);
    PmfView fx = pmf_of_cv(x, w);
    PmfView g = joint_pmf(x, y, w);
    require(p, e_p(x, w) == e_pmf(fx), "expected values disagree across routes");
    require(p, e_p(x, w) == e_rv(rx, w), "expected values disagree across routes");
    require(p, var_p(x, w) == var_pmf(fx), "variances disagree across routes");
    require(p, var_p(x, w) == var_rv(rx, w), "variances disagree across routes");
    require(p, cov_p(x, y, w) == cov_pmf(g), "covariances disagree across routes");
    require(p, cov_p(x, y, w) == cov_rv(rx, ry, w),
            "covariances disagree across routes");
    require(p, corr2_p(x, y, w) == corr2_pmf(g),
            "correlations disagree across routes");
    require(p, corr2_p(x, y, w) == corr2_rv(rx, ry, w),
            "correlations disagree across routes");
  };
  for (long long x0 = -2; x0 <= 2; ++x0)
    for (long long x1 = -2; x1 <= 2; ++x1)
      for (long long y0 = -2; y0 <= 2; ++y0)
        for (long long y1 = -2; y1 <= 2; ++y1) {
          CanonCV x(s, {Rational(x0), Rational(x1)});
          CanonCV y(s, {Rational(y0), Rational(y1)});
          for (const WeightPF& w : ps) agree(x, y, w);
        }
  std::mt19937_64 rng(707);
  EventSpace s3 = make_space({"a", "b", "c"});
  for (int i = 0; i < 200; ++i) {
    CanonCV x(s3, rand_values(3, rng, -3, 3));
    CanonCV y(s3, rand_values(3, rng, -3, 3));
    agree(x, y, rand_weights(s3, rng));
  }
  return p;
}

// 8. The decision helpers: the elicited indifference weight is 1/3 for
// payoffs (10,0,2,4) and back-substitutes to equal expected utilities; the
// asking threshold for (10,0,2) is 4/5 and a 21-point sweep of the weight
// line prefers asking exactly below it.
Problems decision_calculus() {
  Problems p;
  Rational w = elicit_indifference(Rational(10), Rational(0), Rational(2), Rational(4));
  require(p, w == q(1, 3), "the elicited weight is not 1/3");
  EventSpace s = make_space({"e", "o"});
  WeightPF pw(s, {w, Rational(1) - w});
  ConfigExprPtr opt1 = parse_config("(e :-> c1 ~> v(10)) || (!e :-> c2 ~> v(0))");
  ConfigExprPtr opt3 = parse_config("(e :-> c3 ~> v(2)) || (!e :-> c4 ~> v(4))");
  require(p, expected_utility(opt1, pw) == expected_utility(opt3, pw),
          "the elicited weight does not equalize the options");
  require(p, expected_utility(opt1, pw) == q(10, 3),
          "the equalized expected utility is not 10/3");

  require(p, ask_threshold(Rational(10), Rational(0), Rational(2)) == q(4, 5),
          "the asking threshold is not 4/5");
  Event e = ev_atom(s, "e");
  for (int i = 0; i <= 20; ++i) {
    Rational weight(BigInt(i), BigInt(20));
    WeightPF pe(s, {weight, Rational(1) - weight});
    bool asks = prefers_asking(pe, e, Rational(10), Rational(0), Rational(2));
    require(p, asks == (weight < q(4, 5)),
            "asking preference flips at the wrong weight " + weight.str());
    ConfigExprPtr keep = parse_config("q1 ~> ((e :-> v(10)) + (!e :-> v(0)))");
    ConfigExprPtr ask = parse_config("(e :-> q1 ~> v(8)) || (!e :-> q2 ~> v(8))");
    require(p, asks == (expected_utility(ask, pe) > expected_utility(keep, pe)),
            "the configuration route disagrees with the helper");
  }
  return p;
}

// 9. Dimensionwise covariance and squared correlation equal the same
// statistics computed on the lifted product space.
Problems dimensionwise_reduction() {
  Problems p;
  std::mt19937_64 rng(909);
  for (int i = 0; i < 30; ++i) {
    size_t na = 2 + i % 2, nb = 2 + (i / 2) % 2;
    std::vector<std::string> an, bn;
    for (size_t k = 1; k <= na; ++k) an.push_back("a" + std::to_string(k));
    for (size_t k = 1; k <= nb; ++k) bn.push_back("b" + std::to_string(k));
    EventSpace a = make_space(an), b = make_space(bn);
    PffBuilder builder({"a", "b"}, {a, b});
    builder.add_tensor({"a", "b"}, rand_tensor(na * nb, rng));
    Pff fam = builder.finalize();
    CanonCV x(a, rand_values(na, rng, -2, 2));
    CanonCV y(b, rand_values(nb, rng, -2, 2));
    ReducedStats r = reduced_stats(fam, "a", x, "b", y);
    require(p, r.e_x == md_e(fam, "a", x), "expected values differ from the product route");
    require(p, r.var_x == md_var(fam, "a", x), "variances differ from the product route");
    require(p, r.e_y == md_e(fam, "b", y), "expected values differ from the product route");
    require(p, r.var_y == md_var(fam, "b", y), "variances differ from the product route");
    require(p, r.cov == md_cov(fam, "a", x, "b", y),
            "covariances differ from the product route");
    require(p, r.corr2 == md_corr2(fam, "a", x, "b", y),
            "correlations differ from the product route");
  }
  return p;
}

// 10. Marginals obtained from a real joint are always recovered by the
// search, and the pairwise-contradictory three-dimensional family is
// certified infeasible.
Problems joint_recovery() {
  Problems p;
  std::mt19937_64 rng(1010);
  for (int trial = 0; trial < 20; ++trial) {
    size_t nc = 2 + trial % 2;
    EventSpace a = make_space({"a1", "a2"});
    EventSpace b = make_space({"b1", "b2"});
    std::vector<std::string> cn;
    for (size_t k = 1; k <= nc; ++k) cn.push_back("c" + std::to_string(k));
    EventSpace c = make_space(cn);
    std::vector<Rational> joint = rand_tensor(4 * nc, rng);
    auto at = [&](size_t i, size_t j, size_t k) { return joint[(i * 2 + j) * nc + k]; };
    std::vector<Rational> ab(4), ac(2 * nc), bc(2 * nc);
    for (size_t i = 0; i < 2; ++i)
      for (size_t j = 0; j < 2; ++j)
        for (size_t k = 0; k < nc; ++k) {
          ab[i * 2 + j] += at(i, j, k);
          ac[i * nc + k] += at(i, j, k);
          bc[j * nc + k] += at(i, j, k);
        }
    PffBuilder builder({"a", "b", "c"}, {a, b, c});
    builder.add_tensor({"a", "b"}, ab);
    builder.add_tensor({"a", "c"}, ac);
    builder.add_tensor({"b", "c"}, bc);
    JointResult r = joint_exists(builder.finalize());
    require(p, r.exists, "a realizable family is reported infeasible");
    if (!r.exists) continue;
    std::vector<Rational> rab(4), rac(2 * nc), rbc(2 * nc);
    for (size_t i = 0; i < 2; ++i)
      for (size_t j = 0; j < 2; ++j)
        for (size_t k = 0; k < nc; ++k) {
          Rational t = r.witness[(i * 2 + j) * nc + k];
          require(p, t >= Rational(0), "the witness has a negative cell");
          rab[i * 2 + j] += t;
          rac[i * nc + k] += t;
          rbc[j * nc + k] += t;
        }
    require(p, rab == ab && rac == ac && rbc == bc,
            "the witness does not reproduce the marginals");
  }

  EventSpace a = make_space({"a1", "a2"});
  EventSpace b = make_space({"b1", "b2"});
  EventSpace c = make_space({"c1", "c2"});
  PffBuilder builder({"a", "b", "c"}, {a, b, c});
  std::vector<Rational> agree{q(1, 2), Rational(0), Rational(0), q(1, 2)};
  std::vector<Rational> disagree{Rational(0), q(1, 2), q(1, 2), Rational(0)};
  builder.add_tensor({"a", "b"}, agree);
  builder.add_tensor({"a", "c"}, agree);
  builder.add_tensor({"b", "c"}, disagree);
  JointResult r = joint_exists(builder.finalize());
  require(p, !r.exists, "the contradictory family is reported feasible");
  require(p, !r.certificate.empty(), "infeasibility comes without a certificate");
  return p;
}

// 11. Every recorded script reproduces its output byte for byte through the
// interpreter, the failure flag matches the presence of FAIL lines, and the
// deliberately failing script fails.
Problems command_scripts() {
  Problems p;
  namespace fs = std::filesystem;
  fs::path dir = fs::path(MPC_SOURCE_DIR) / "tests" / "golden";
  std::vector<fs::path> scripts;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.path().extension() == ".mpc") scripts.push_back(entry.path());
  std::sort(scripts.begin(), scripts.end());
  require(p, scripts.size() >= 6, "golden scripts are missing");
  for (const fs::path& script : scripts) {
    fs::path expected = script;
    expected.replace_extension(".out");
    std::ifstream in(script), want_in(expected);
    if (!in || !want_in) {
      require(p, false, "cannot open " + script.filename().string());
      continue;
    }
    std::stringstream want;
    want << want_in.rdbuf();
    Session session;
    std::string line, got;
    while (std::getline(in, line))
      for (const std::string& out : session.run_line(line)) got += out + "\n";
    require(p, got == want.str(),
            "output mismatch for " + script.filename().string());
    bool expect_fail = want.str().rfind("FAIL", 0) == 0 ||
                       want.str().find("\nFAIL") != std::string::npos;
    require(p, session.failed() == expect_fail,
            "failure flag mismatch for " + script.filename().string());
  }

  std::ifstream in(dir / "expect_fail.mpcf");
  require(p, bool(in), "the failing script is missing");
  Session session;
  std::string line;
  bool any = false;
  while (std::getline(in, line)) any |= !session.run_line(line).empty();
  require(p, any && session.failed(), "the failing script does not fail");
  return p;
}

}  // namespace

int main() {
  struct Entry {
    const char* label;
    Problems (*run)();
  };
  const Entry entries[] = {
      {"axiom suites hold on their sample grids", axiom_suites},
      {"finite-support summation facts", summation_facts},
      {"mass-function sensitivity", mass_sensitivity},
      {"probability audits and counterexample search", probability_audits},
      {"total Bayes rule forces additivity", total_bayes_additivity},
      {"guarded unit and flat forms", guarded_unit_and_flat_forms},
      {"moment routes agree", moment_routes},
      {"decision calculus", decision_calculus},
      {"dimensionwise reduction", dimensionwise_reduction},
      {"joint recovery and infeasibility", joint_recovery},
      {"command scripts round trip", command_scripts},
  };
  int failures = 0;
  int n = 0;
  for (const Entry& e : entries) {
    ++n;
    Problems problems;
    try {
      problems = e.run();
    } catch (const std::exception& ex) {
      problems.push_back(std::string("exception: ") + ex.what());
    }
    if (problems.empty()) {
      std::cout << "PASS " << n << " - " << e.label << "\n";
    } else {
      ++failures;
      std::cout << "FAIL " << n << " - " << e.label << " (" << problems.size()
                << " problems): " << problems.front() << "\n";
    }
  }
  if (failures) std::cout << failures << " of " << n << " criteria failed\n";
  else std::cout << "all " << n << " criteria passed\n";
  return failures == 0 ? 0 : 1;
}
