#include "orbicert/mpoly.hpp"

#include <algorithm>

#include "orbicert/error.hpp"

namespace orbicert {

std::string Variable::name() const {
  return "z" + std::to_string(index) + (flavor == Flavor::fiber ? "'" : "");
}

Monomial Monomial::of(Variable v, std::uint32_t e) {
  Monomial m;
  if (e > 0) m.entries_.emplace_back(v.key(), e);
  return m;
}

Monomial Monomial::from_entries(std::vector<Entry> entries) {
  std::sort(entries.begin(), entries.end());
  Monomial m;
  for (const auto& [k, e] : entries) {
    if (e == 0) continue;
    if (!m.entries_.empty() && m.entries_.back().first == k)
      m.entries_.back().second += e;
    else
      m.entries_.emplace_back(k, e);
  }
  return m;
}

std::uint32_t Monomial::exponent(Variable v) const {
  const std::uint32_t key = v.key();
  auto it = std::lower_bound(entries_.begin(), entries_.end(), Entry{key, 0});
  return it != entries_.end() && it->first == key ? it->second : 0;
}

std::uint32_t Monomial::degree() const {
  std::uint32_t d = 0;
  for (const auto& [k, e] : entries_) d += e;
  return d;
}

bool Monomial::divides(const Monomial& other) const {
  auto it = other.entries_.begin();
  for (const auto& [k, e] : entries_) {
    while (it != other.entries_.end() && it->first < k) ++it;
    if (it == other.entries_.end() || it->first != k || it->second < e) return false;
  }
  return true;
}

Monomial Monomial::operator*(const Monomial& other) const {
  Monomial r;
  r.entries_.reserve(entries_.size() + other.entries_.size());
  auto a = entries_.begin(), b = other.entries_.begin();
  while (a != entries_.end() || b != other.entries_.end()) {
    if (b == other.entries_.end() || (a != entries_.end() && a->first < b->first)) {
      r.entries_.push_back(*a++);
    } else if (a == entries_.end() || b->first < a->first) {
      r.entries_.push_back(*b++);
    } else {
      r.entries_.emplace_back(a->first, a->second + b->second);
      ++a;
      ++b;
    }
  }
  return r;
}

Monomial Monomial::quotient(const Monomial& divisor) const {
  Monomial r;
  auto d = divisor.entries_.begin();
  for (const auto& [k, e] : entries_) {
    std::uint32_t sub = 0;
    if (d != divisor.entries_.end() && d->first == k) sub = (d++)->second;
    if (sub > e) throw PreconditionError("monomial quotient: not divisible");
    if (e > sub) r.entries_.emplace_back(k, e - sub);
  }
  if (d != divisor.entries_.end())
    throw PreconditionError("monomial quotient: not divisible");
  return r;
}

Monomial Monomial::without(Variable v) const {
  Monomial r;
  const std::uint32_t key = v.key();
  for (const auto& entry : entries_)
    if (entry.first != key) r.entries_.push_back(entry);
  return r;
}

bool DegLexLess::operator()(const Monomial& a, const Monomial& b) const {
  const std::uint32_t da = a.degree(), db = b.degree();
  if (da != db) return da < db;
  const auto& ea = a.entries();
  const auto& eb = b.entries();
  std::size_t i = 0, j = 0;
  while (i < ea.size() && j < eb.size()) {
    if (ea[i].first == eb[j].first) {
      if (ea[i].second != eb[j].second) return ea[i].second < eb[j].second;
      ++i;
      ++j;
    } else {
      // The monomial using the earlier variable is the larger one.
      return ea[i].first > eb[j].first;
    }
  }
  return i == ea.size() && j < eb.size();
}

MPoly z(std::uint32_t i) {
  return MPoly::monomial(Monomial::of(Variable::base(i)), Rational(1));
}

MPoly zp(std::uint32_t i) {
  return MPoly::monomial(Monomial::of(Variable::fiber(i)), Rational(1));
}

MPoly w(std::uint32_t i, std::uint32_t j) { return z(i) * zp(j) - zp(i) * z(j); }

FpPoly reduce_mod_p(const MPoly& f, std::uint64_t p) {
  FpPoly r;
  for (const auto& [m, c] : f.terms()) r.add_term(m, Fp::from_rational(c, p));
  return r;
}

Fp evaluate(const MPoly& f, const std::vector<Fp>& base,
            const std::vector<Fp>& fiber) {
  if (base.empty()) throw PreconditionError("evaluate: empty point");
  const std::uint64_t p = base.front().modulus();
  Fp total(0, p);
  for (const auto& [m, c] : f.terms()) {
    Fp term = Fp::from_rational(c, p);
    for (const auto& [key, e] : m.entries()) {
      const Variable v = Variable::from_key(key);
      const auto& values = v.flavor == Flavor::base ? base : fiber;
      if (v.index >= values.size())
        throw PreconditionError("evaluate: no value for " + v.name());
      term *= values[v.index].pow(e);
    }
    total += term;
  }
  return total;
}

std::string to_string(const MPoly& f) {
  if (f.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (auto it = f.terms().rbegin(); it != f.terms().rend(); ++it) {
    const auto& [m, c] = *it;
    const bool negative = sgn(c) < 0;
    Rational mag = abs(c);
    if (first)
      out += negative ? "-" : "";
    else
      out += negative ? " - " : " + ";
    first = false;
    std::string mono;
    for (const auto& [key, e] : m.entries()) {
      if (!mono.empty()) mono += "*";
      mono += Variable::from_key(key).name();
      if (e > 1) mono += "^" + std::to_string(e);
    }
    if (mono.empty())
      out += to_string(mag);
    else if (mag == 1)
      out += mono;
    else
      out += to_string(mag) + "*" + mono;
  }
  return out;
}

}  // namespace orbicert
