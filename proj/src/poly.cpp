#include "mpc/poly.hpp"

#include <algorithm>
#include <stdexcept>

namespace mpc {

Poly Poly::constant(size_t nvars, Rational c) {
  Poly p(nvars);
  if (!c.is_zero()) p.terms_[Mono(nvars, 0)] = std::move(c);
  return p;
}

Poly Poly::variable(size_t nvars, size_t idx) {
  Poly p(nvars);
  Mono m(nvars, 0);
  m[idx] = 1;
  p.terms_[std::move(m)] = Rational(1);
  return p;
}

bool Poly::is_constant() const {
  return terms_.empty() ||
         (terms_.size() == 1 && terms_.begin()->first == Mono(nvars_, 0));
}

Rational Poly::constant_value() const {
  auto it = terms_.find(Mono(nvars_, 0));
  return it == terms_.end() ? Rational() : it->second;
}

bool Poly::uses_var(size_t idx) const {
  for (const auto& [m, c] : terms_)
    if (m[idx] > 0) return true;
  return false;
}

std::vector<size_t> Poly::used_vars() const {
  std::vector<size_t> out;
  for (size_t i = 0; i < nvars_; ++i)
    if (uses_var(i)) out.push_back(i);
  return out;
}

uint32_t Poly::degree_in(size_t idx) const {
  uint32_t d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, m[idx]);
  return d;
}

uint32_t Poly::total_degree() const {
  uint32_t d = 0;
  for (const auto& [m, c] : terms_) {
    uint32_t s = 0;
    for (uint32_t e : m) s += e;
    d = std::max(d, s);
  }
  return d;
}

Rational Poly::affine_coeff(size_t idx) const {
  Mono m(nvars_, 0);
  m[idx] = 1;
  auto it = terms_.find(m);
  return it == terms_.end() ? Rational() : it->second;
}

void Poly::add_term(const Mono& m, const Rational& c) {
  if (c.is_zero()) return;
  auto [it, fresh] = terms_.emplace(m, c);
  if (!fresh) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

Poly Poly::operator-() const {
  Poly r(nvars_);
  for (const auto& [m, c] : terms_) r.terms_[m] = -c;
  return r;
}

Poly Poly::operator+(const Poly& o) const {
  Poly r = *this;
  for (const auto& [m, c] : o.terms_) r.add_term(m, c);
  return r;
}

Poly Poly::operator-(const Poly& o) const { return *this + -o; }

Poly Poly::operator*(const Poly& o) const {
  Poly r(nvars_);
  for (const auto& [m1, c1] : terms_)
    for (const auto& [m2, c2] : o.terms_) {
      Mono m(nvars_);
      for (size_t i = 0; i < nvars_; ++i) m[i] = m1[i] + m2[i];
      r.add_term(m, c1 * c2);
    }
  return r;
}

Poly Poly::scaled(const Rational& c) const {
  Poly r(nvars_);
  if (c.is_zero()) return r;
  for (const auto& [m, k] : terms_) r.terms_[m] = k * c;
  return r;
}

Poly Poly::pow(uint32_t e) const {
  Poly r = constant(nvars_, Rational(1));
  for (uint32_t i = 0; i < e; ++i) r = r * *this;
  return r;
}

Poly Poly::substituted(size_t idx, const Poly& by) const {
  Poly r(nvars_);
  for (const auto& [m, c] : terms_) {
    if (m[idx] == 0) {
      r.add_term(m, c);
      continue;
    }
    Poly::Mono rest = m;
    rest[idx] = 0;
    Poly part(nvars_);
    part.terms_[rest] = c;
    part = part * by.pow(m[idx]);
    for (const auto& [mm, cc] : part.terms_) r.add_term(mm, cc);
  }
  return r;
}

Rational Poly::eval(const std::vector<Rational>& point) const {
  if (point.size() != nvars_) throw std::invalid_argument("point arity mismatch");
  Rational out;
  for (const auto& [m, c] : terms_) {
    Rational v = c;
    for (size_t i = 0; i < nvars_; ++i)
      if (m[i]) v *= point[i].pow(m[i]);
    out += v;
  }
  return out;
}

Poly Poly::reindexed(const std::vector<int>& map, size_t new_nvars) const {
  Poly r(new_nvars);
  for (const auto& [m, c] : terms_) {
    Mono mm(new_nvars, 0);
    for (size_t i = 0; i < nvars_; ++i) {
      if (m[i] == 0) continue;
      if (map[i] < 0) throw std::logic_error("reindex drops a used variable");
      mm[static_cast<size_t>(map[i])] = m[i];
    }
    r.add_term(mm, c);
  }
  return r;
}

std::map<Poly::Mono, Poly> Poly::grouped_by(const std::vector<size_t>& group) const {
  std::map<Mono, Poly> out;
  for (const auto& [m, c] : terms_) {
    Mono key(group.size(), 0);
    Poly::Mono rest = m;
    for (size_t g = 0; g < group.size(); ++g) {
      key[g] = m[group[g]];
      rest[group[g]] = 0;
    }
    auto [it, fresh] = out.emplace(key, Poly(nvars_));
    it->second.add_term(rest, c);
  }
  return out;
}

bool operator<(const Poly& a, const Poly& b) {
  if (a.nvars_ != b.nvars_) return a.nvars_ < b.nvars_;
  auto ia = a.terms_.begin(), ib = b.terms_.begin();
  for (; ia != a.terms_.end() && ib != b.terms_.end(); ++ia, ++ib) {
    if (ia->first != ib->first) return ia->first < ib->first;
    if (ia->second != ib->second) return ia->second < ib->second;
  }
  return ib != b.terms_.end();
}

std::string Poly::str(const std::vector<std::string>& names) const {
  if (terms_.empty()) return "0";
  // Highest total degree first, then reverse lexicographic on exponents, so
  // "x^2 - 2" and "x*y + 1" come out in the familiar order.
  std::vector<std::pair<Mono, Rational>> ts(terms_.begin(), terms_.end());
  std::sort(ts.begin(), ts.end(), [](const auto& a, const auto& b) {
    uint32_t da = 0, db = 0;
    for (uint32_t e : a.first) da += e;
    for (uint32_t e : b.first) db += e;
    if (da != db) return da > db;
    return a.first > b.first;
  });
  std::string out;
  for (const auto& [m, c] : ts) {
    std::string mono;
    for (size_t i = 0; i < nvars_; ++i) {
      if (m[i] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += names[i];
      if (m[i] > 1) mono += "^" + std::to_string(m[i]);
    }
    Rational k = c;
    std::string sep = out.empty() ? "" : (k.sgn() < 0 ? " - " : " + ");
    if (!out.empty() && k.sgn() < 0) k = -k;
    if (mono.empty()) out += sep + k.str();
    else if (k.is_one()) out += sep + mono;
    else if (k == Rational(-1) && out.empty()) out += "-" + mono;
    else out += sep + k.str() + "*" + mono;
  }
  return out;
}

std::vector<Rational> rational_roots(const Poly& p, size_t idx) {
  // Collect integer coefficients by degree after clearing denominators.
  uint32_t deg = p.degree_in(idx);
  std::vector<Rational> coeff(deg + 1);
  for (const auto& [m, c] : p.terms()) {
    Poly::Mono rest = m;
    rest[idx] = 0;
    bool pure = true;
    for (uint32_t e : rest) pure &= e == 0;
    if (!pure) throw std::invalid_argument("rational_roots needs a univariate input");
    coeff[m[idx]] += c;
  }
  BigInt lcm = 1;
  for (const auto& c : coeff) lcm = boost::multiprecision::lcm(lcm, c.den());
  std::vector<BigInt> ic(deg + 1);
  for (uint32_t d = 0; d <= deg; ++d) ic[d] = coeff[d].num() * (lcm / coeff[d].den());

  std::vector<Rational> roots;
  uint32_t low = 0;
  while (low <= deg && ic[low] == 0) ++low;
  if (low > deg) throw std::invalid_argument("rational_roots of the zero polynomial");
  if (low > 0) roots.push_back(Rational(0));
  if (low == deg) return roots;  // c * x^deg

  BigInt a0 = ic[low] < 0 ? BigInt(-ic[low]) : ic[low];
  BigInt an = ic[deg] < 0 ? BigInt(-ic[deg]) : ic[deg];
  const BigInt kDivisorBound = BigInt(1) << 62;
  if (a0 > kDivisorBound || an > kDivisorBound)
    throw std::invalid_argument("rational_roots coefficient bound exceeded");

  auto divisors = [](BigInt n) {
    std::vector<BigInt> out;
    for (BigInt i = 1; i * i <= n; ++i)
      if (n % i == 0) {
        out.push_back(i);
        out.push_back(n / i);
      }
    return out;
  };
  auto eval_at = [&](const Rational& x) {
    Rational v;
    for (uint32_t d = deg + 1; d-- > low;) v = v * x + Rational(ic[d]);
    return v;
  };
  for (const BigInt& pn : divisors(a0))
    for (const BigInt& qn : divisors(an)) {
      Rational cand(pn, qn);
      if (eval_at(cand).is_zero()) roots.push_back(cand);
      if (eval_at(-cand).is_zero()) roots.push_back(-cand);
    }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
  return roots;
}

}  // namespace mpc
