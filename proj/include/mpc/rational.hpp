#ifndef MPC_RATIONAL_HPP
#define MPC_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <iosfwd>
#include <optional>
#include <string>

namespace mpc {

using BigInt = boost::multiprecision::cpp_int;

// Exact rational in lowest terms, denominator > 0, zero stored as 0/1.
// Division and inverse are totalized: inv(0) = 0, so x/0 = 0.
class Rational {
public:
  Rational() : num_(0), den_(1) {}
  Rational(long long n) : num_(n), den_(1) {}
  Rational(BigInt n) : num_(std::move(n)), den_(1) {}
  Rational(BigInt n, BigInt d);

  const BigInt& num() const { return num_; }
  const BigInt& den() const { return den_; }

  bool is_zero() const { return num_ == 0; }
  bool is_one() const { return num_ == 1 && den_ == 1; }
  bool is_integer() const { return den_ == 1; }

  // Totalized multiplicative inverse: inv(0) = 0.
  Rational inv() const;
  // Sign as a rational: -1, 0 or 1.
  Rational sign() const;
  int sgn() const { return num_ == 0 ? 0 : (num_ < 0 ? -1 : 1); }
  Rational abs() const { return sgn() < 0 ? -*this : *this; }
  Rational pow(unsigned e) const;

  Rational operator-() const;
  Rational& operator+=(const Rational& o);
  Rational& operator-=(const Rational& o) { return *this += -o; }
  Rational& operator*=(const Rational& o);
  Rational& operator/=(const Rational& o) { return *this *= o.inv(); }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b) {
    return a.num_ * b.den_ < b.num_ * a.den_;
  }
  friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

  // "p/q" in lowest terms, "p" when the denominator is 1.
  std::string str() const;
  // Accepts an optional sign, digits, and an optional "/digits" with positive value.
  static std::optional<Rational> parse(const std::string& text);

private:
  BigInt num_, den_;
  void normalize();
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

inline Rational q_inv(const Rational& x) { return x.inv(); }
inline Rational q_sign(const Rational& x) { return x.sign(); }

}  // namespace mpc

#endif
