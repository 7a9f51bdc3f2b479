#include "mpc/rational.hpp"

#include <ostream>
#include <stdexcept>

namespace mpc {

Rational::Rational(BigInt n, BigInt d) : num_(std::move(n)), den_(std::move(d)) {
  if (den_ == 0) throw std::invalid_argument("rational with zero denominator");
  normalize();
}

void Rational::normalize() {
  if (num_ == 0) {
    den_ = 1;
    return;
  }
  if (den_ < 0) {
    num_ = -num_;
    den_ = -den_;
  }
  BigInt g = boost::multiprecision::gcd(num_ < 0 ? BigInt(-num_) : num_, den_);
  if (g > 1) {
    num_ /= g;
    den_ /= g;
  }
}

Rational Rational::inv() const {
  if (num_ == 0) return Rational();
  Rational r;
  r.num_ = den_;
  r.den_ = num_;
  if (r.den_ < 0) {
    r.num_ = -r.num_;
    r.den_ = -r.den_;
  }
  return r;
}

Rational Rational::sign() const { return Rational(sgn()); }

Rational Rational::pow(unsigned e) const {
  Rational r(1), base = *this;
  while (e) {
    if (e & 1) r *= base;
    base *= base;
    e >>= 1;
  }
  return r;
}

Rational Rational::operator-() const {
  Rational r = *this;
  r.num_ = -r.num_;
  return r;
}

Rational& Rational::operator+=(const Rational& o) {
  num_ = num_ * o.den_ + o.num_ * den_;
  den_ *= o.den_;
  normalize();
  return *this;
}

Rational& Rational::operator*=(const Rational& o) {
  num_ *= o.num_;
  den_ *= o.den_;
  normalize();
  return *this;
}

std::string Rational::str() const {
  std::string s = num_.str();
  if (den_ != 1) s += "/" + den_.str();
  return s;
}

std::optional<Rational> Rational::parse(const std::string& text) {
  size_t i = 0;
  bool neg = false;
  if (i < text.size() && (text[i] == '-' || text[i] == '+')) {
    neg = text[i] == '-';
    ++i;
  }
  size_t digits = i;
  while (i < text.size() && isdigit(static_cast<unsigned char>(text[i]))) ++i;
  if (i == digits) return std::nullopt;
  BigInt n(text.substr(digits, i - digits));
  BigInt d = 1;
  if (i < text.size() && text[i] == '/') {
    ++i;
    size_t dd = i;
    while (i < text.size() && isdigit(static_cast<unsigned char>(text[i]))) ++i;
    if (i == dd) return std::nullopt;
    d = BigInt(text.substr(dd, i - dd));
    if (d == 0) return std::nullopt;
  }
  if (i != text.size()) return std::nullopt;
  return Rational(neg ? BigInt(-n) : n, d);
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

}  // namespace mpc
