#include "mpc/pmf.hpp"

#include "doctest.h"

using namespace mpc;

namespace {

GuardTable parse(const char* text, std::vector<std::string> vars) {
  return gt_parse(parse_term(text), vars);
}

Rational q(long long n, long long d) { return Rational(BigInt(n), BigInt(d)); }

PmfView two_coin(const Rational& p11) {
  // Mass p11 on (1,1), the rest split so both marginals are (1/2, 1/2) on
  // {0,1}: a one-parameter family of joints with fixed marginals.
  Rational half = q(1, 2);
  return *is_pmf(point_entry_table(
                     {"x", "y"},
                     {{{Rational(1), Rational(1)}, p11},
                      {{Rational(1), Rational(0)}, half - p11},
                      {{Rational(0), Rational(1)}, half - p11},
                      {{Rational(0), Rational(0)}, p11}}))
              .view;
}

}  // namespace

TEST_CASE("mass functions must be pointwise, nonnegative and of unit mass") {
  PmfCheck ok = is_pmf(parse("zero(x-1)*1/3+zero(x-2)*2/3", {"x"}));
  CHECK(ok.ok);
  CHECK(ok.reason.empty());
  CHECK(ok.mass == Rational(1));
  REQUIRE(ok.view.has_value());
  auto pts = ok.view->points();
  REQUIRE(pts.size() == 2);
  CHECK(pts[0].first == std::vector<Rational>{Rational(1)});
  CHECK(pts[0].second == q(1, 3));

  CHECK(is_pmf(parse("one(x)", {"x"})).reason == "infinite support");
  CHECK(is_pmf(parse("zero(x-1)*2", {"x"})).reason == "mass 2");
  CHECK(is_pmf(parse("zero(x)*2-zero(x-1)", {"x"})).reason == "negative value");
  CHECK(is_pmf(parse("0", {"x"})).reason == "mass 0");
  CHECK(is_pmf(parse("zero(x-y)", {"x", "y"})).reason == "infinite support");
}

TEST_CASE("the irrational-root candidate has no mass until the origin is added") {
  const char* shape = "(1/4)*zero(x^2-2)*((1+s(x))*x+(1-s(x))*(2-x))";
  PmfCheck bare = is_pmf(parse(shape, {"x"}));
  CHECK(!bare.ok);
  CHECK(bare.reason == "mass 0");
  PmfCheck fixed = is_pmf(parse((std::string(shape) + "+zero(x)").c_str(), {"x"}));
  CHECK(fixed.ok);
  CHECK(fixed.mass == Rational(1));
}

TEST_CASE("marginals of a joint sum out the dropped coordinate") {
  PmfView g = two_coin(q(1, 3));
  PmfView mx = marginalise(g, {0});
  PmfView my = marginalise(g, {1});
  CHECK(mx.table.eval({Rational(0)}) == q(1, 2));
  CHECK(mx.table.eval({Rational(1)}) == q(1, 2));
  CHECK(my.table.eval({Rational(0)}) == q(1, 2));
  CHECK(my.table.eval({Rational(1)}) == q(1, 2));
  CHECK(mx.table.vars() == std::vector<std::string>{"x"});
}

TEST_CASE("independence holds exactly at the product joint") {
  CHECK(is_independent(two_coin(q(1, 4))));
  CHECK(!is_independent(two_coin(q(1, 3))));
  CHECK(!is_independent(two_coin(q(1, 2))));
  CHECK(!is_independent(two_coin(Rational(0))));
}

TEST_CASE("moments of a two point distribution") {
  PmfView f = *is_pmf(parse("zero(x-1)*1/4+zero(x-5)*3/4", {"x"})).view;
  CHECK(e_pmf(f) == Rational(4));
  // E[x^2] = 1/4 + 25*3/4 = 19; 19 - 16 = 3.
  CHECK(var_pmf(f) == Rational(3));
}

TEST_CASE("covariance interpolates between the extreme couplings") {
  // cov = p11 - 1/4 for the fixed-marginal family.
  CHECK(cov_pmf(two_coin(q(1, 2))) == q(1, 4));
  CHECK(cov_pmf(two_coin(q(1, 4))) == Rational(0));
  CHECK(cov_pmf(two_coin(Rational(0))) == q(-1, 4));
  // var = 1/4 each, so corr2 = (p11 - 1/4)^2 / (1/16).
  CHECK(corr2_pmf(two_coin(q(1, 2))) == Rational(1));
  CHECK(corr2_pmf(two_coin(q(1, 4))) == Rational(0));
  CHECK(corr2_pmf(two_coin(q(3, 8))) == q(1, 4));
}

TEST_CASE("degenerate distributions have zero variance and totalized correlation") {
  PmfView point = *is_pmf(parse("zero(x-7)", {"x"})).view;
  CHECK(e_pmf(point) == Rational(7));
  CHECK(var_pmf(point) == Rational(0));
  PmfView pair = *is_pmf(point_entry_table(
                             {"x", "y"},
                             {{{Rational(3), Rational(0)}, q(1, 2)},
                              {{Rational(3), Rational(1)}, q(1, 2)}}))
                      .view;
  // x is constant: covariance and totalized squared correlation are 0.
  CHECK(cov_pmf(pair) == Rational(0));
  CHECK(corr2_pmf(pair) == Rational(0));
}

TEST_CASE("lifting widens the variable list without changing values") {
  GuardTable t = parse("zero(x-2)*5", {"x"});
  GuardTable wide = gt_lift(t, {"x", "y"});
  CHECK(wide.vars() == std::vector<std::string>{"x", "y"});
  for (const Rational& v : default_grid()) {
    CHECK(wide.eval({Rational(2), v}) == Rational(5));
    CHECK(wide.eval({Rational(1), v}) == Rational(0));
  }
  CHECK_THROWS_AS(gt_lift(t, {"y", "z"}), std::invalid_argument);
}
