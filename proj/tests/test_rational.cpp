#include "mpc/rational.hpp"

#include <vector>

#include "doctest.h"

using namespace mpc;

namespace {

std::vector<Rational> small_grid() {
  std::vector<Rational> g;
  for (long long p = -4; p <= 4; ++p)
    for (long long q = 1; q <= 3; ++q) {
      Rational r{BigInt(p), BigInt(q)};
      bool dup = false;
      for (const Rational& s : g) dup |= s == r;
      if (!dup) g.push_back(r);
    }
  return g;
}

}  // namespace

TEST_CASE("construction normalizes to lowest terms with positive denominator") {
  CHECK(Rational(BigInt(2), BigInt(4)) == Rational(BigInt(1), BigInt(2)));
  CHECK(Rational(BigInt(-2), BigInt(-4)) == Rational(BigInt(1), BigInt(2)));
  CHECK(Rational(BigInt(3), BigInt(-6)).den() == 2);
  CHECK(Rational(BigInt(3), BigInt(-6)).num() == -1);
  CHECK(Rational(BigInt(0), BigInt(-7)) == Rational(0));
  CHECK(Rational(BigInt(0), BigInt(-7)).den() == 1);
  CHECK_THROWS(Rational(BigInt(1), BigInt(0)));
}

TEST_CASE("field operations on a grid") {
  auto g = small_grid();
  for (const Rational& a : g)
    for (const Rational& b : g) {
      CHECK(a + b == b + a);
      CHECK(a * b == b * a);
      CHECK(a - b == -(b - a));
      if (!b.is_zero()) CHECK((a / b) * b == a);
    }
  for (const Rational& a : g)
    for (const Rational& b : g)
      for (const Rational& c : g) {
        CHECK((a + b) + c == a + (b + c));
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
      }
}

TEST_CASE("inverse is totalized at zero") {
  CHECK(Rational(0).inv() == Rational(0));
  CHECK(Rational(0) / Rational(0) == Rational(0));
  CHECK(Rational(5) / Rational(0) == Rational(0));
  for (const Rational& a : small_grid()) {
    CHECK(a.inv().inv() == a);
    CHECK(a * (a * a.inv()) == a);
  }
  CHECK(Rational(BigInt(3), BigInt(4)).inv() == Rational(BigInt(4), BigInt(3)));
  CHECK(Rational(BigInt(-3), BigInt(4)).inv() == Rational(BigInt(-4), BigInt(3)));
}

TEST_CASE("sign and absolute value") {
  for (const Rational& a : small_grid()) {
    CHECK(a.sign() == Rational(a.sgn()));
    CHECK(a.abs() == a.sign() * a);
    CHECK(a.abs() >= Rational(0));
    CHECK(a.sign() * a.abs() == a);
  }
  CHECK(Rational(0).sign() == Rational(0));
  CHECK(Rational(-7).sign() == Rational(-1));
}

TEST_CASE("powers") {
  CHECK(Rational(BigInt(2), BigInt(3)).pow(0) == Rational(1));
  CHECK(Rational(BigInt(2), BigInt(3)).pow(3) == Rational(BigInt(8), BigInt(27)));
  CHECK(Rational(0).pow(5) == Rational(0));
  CHECK(Rational(-2).pow(2) == Rational(4));
}

TEST_CASE("ordering matches cross multiplication") {
  auto g = small_grid();
  for (const Rational& a : g)
    for (const Rational& b : g) {
      CHECK((a < b) == (a.num() * b.den() < b.num() * a.den()));
      CHECK((a <= b) == !(b < a));
    }
}

TEST_CASE("text round trip") {
  for (const Rational& a : small_grid()) {
    auto back = Rational::parse(a.str());
    REQUIRE(back.has_value());
    CHECK(*back == a);
  }
  CHECK(Rational(BigInt(1), BigInt(2)).str() == "1/2");
  CHECK(Rational(-3).str() == "-3");
  CHECK(Rational(0).str() == "0");
  CHECK(*Rational::parse("-6/4") == Rational(BigInt(-3), BigInt(2)));
  CHECK(!Rational::parse("").has_value());
  CHECK(!Rational::parse("1/").has_value());
  CHECK(!Rational::parse("1/0").has_value());
  CHECK(!Rational::parse("a").has_value());
  CHECK(!Rational::parse("1.5").has_value());
}

TEST_CASE("big values stay exact") {
  Rational big = Rational(BigInt("123456789123456789"), BigInt("987654321"));
  CHECK(big * big.inv() == Rational(1));
  Rational acc;
  for (int i = 1; i <= 50; ++i) acc += Rational(BigInt(1), BigInt(i));
  Rational again;
  for (int i = 50; i >= 1; --i) again += Rational(BigInt(1), BigInt(i));
  CHECK(acc == again);
}
