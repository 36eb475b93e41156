#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <iterator>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "orbicert/prime_field.hpp"
#include "orbicert/rational.hpp"

namespace orbicert {

enum class Flavor : std::uint8_t { base, fiber };

/// z_i (base) or z_i' (fiber). Keys order base variables before fiber ones.
struct Variable {
  Flavor flavor = Flavor::base;
  std::uint32_t index = 0;

  static constexpr std::uint32_t kFiberOffset = 1u << 20;

  static Variable base(std::uint32_t i) { return {Flavor::base, i}; }
  static Variable fiber(std::uint32_t i) { return {Flavor::fiber, i}; }
  static Variable from_key(std::uint32_t key) {
    return key >= kFiberOffset ? fiber(key - kFiberOffset) : base(key);
  }

  std::uint32_t key() const {
    return flavor == Flavor::base ? index : kFiberOffset + index;
  }
  std::string name() const;
  bool operator==(const Variable&) const = default;
};

/// Sparse exponent vector, sorted by variable key, no zero exponents.
class Monomial {
 public:
  using Entry = std::pair<std::uint32_t, std::uint32_t>;  // (key, exponent)

  Monomial() = default;
  static Monomial of(Variable v, std::uint32_t e = 1);
  static Monomial from_entries(std::vector<Entry> entries);

  const std::vector<Entry>& entries() const { return entries_; }
  std::uint32_t exponent(Variable v) const;
  std::uint32_t degree() const;
  bool is_one() const { return entries_.empty(); }

  bool divides(const Monomial& other) const;
  Monomial operator*(const Monomial& other) const;
  /// this / divisor; requires divisor.divides(*this).
  Monomial quotient(const Monomial& divisor) const;
  Monomial without(Variable v) const;

  bool operator==(const Monomial&) const = default;

 private:
  std::vector<Entry> entries_;
};

/// Degree-lexicographic order: total degree first, then exponents compared
/// variable by variable in key order (base z_0.., then fiber z_0'..).
struct DegLexLess {
  bool operator()(const Monomial& a, const Monomial& b) const;
};

inline constexpr std::uint32_t kInfiniteValuation =
    std::numeric_limits<std::uint32_t>::max();

/// Sparse polynomial in z_0..z_N, z_0'..z_N' over a field K. No stored
/// coefficient is zero, so the zero polynomial has no terms.
template <class K>
class Poly {
 public:
  using Terms = std::map<Monomial, K, DegLexLess>;

  Poly() = default;

  static Poly constant(const K& c) { return monomial(Monomial(), c); }
  static Poly monomial(const Monomial& m, const K& c) {
    Poly p;
    p.add_term(m, c);
    return p;
  }

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  void add_term(const Monomial& m, const K& c) {
    if (orbicert::is_zero(c)) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (inserted) return;
    it->second += c;
    if (orbicert::is_zero(it->second)) terms_.erase(it);
  }

  Poly& operator+=(const Poly& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  Poly& operator-=(const Poly& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, K(-c));
    return *this;
  }
  Poly operator+(const Poly& o) const {
    Poly r = *this;
    return r += o;
  }
  Poly operator-(const Poly& o) const {
    Poly r = *this;
    return r -= o;
  }
  Poly operator-() const {
    Poly r;
    for (const auto& [m, c] : terms_) r.terms_.emplace(m, K(-c));
    return r;
  }
  Poly operator*(const Poly& o) const {
    Poly r;
    for (const auto& [ma, ca] : terms_)
      for (const auto& [mb, cb] : o.terms_) r.add_term(ma * mb, K(ca * cb));
    return r;
  }
  Poly& operator*=(const Poly& o) { return *this = *this * o; }

  Poly scale(const K& c) const {
    Poly r;
    if (orbicert::is_zero(c)) return r;
    for (const auto& [m, a] : terms_) r.terms_.emplace(m, K(a * c));
    return r;
  }
  Poly times(const Monomial& mono) const {
    Poly r;
    for (const auto& [m, a] : terms_) r.terms_.emplace(m * mono, a);
    return r;
  }
  Poly pow(std::uint32_t e) const {
    Poly r = constant(one_like(unit_hint()));
    for (std::uint32_t i = 0; i < e; ++i) r *= *this;
    return r;
  }

  /// Replaces every occurrence of v by `value`.
  Poly substitute(Variable v, const Poly& value) const {
    Poly r;
    std::map<std::uint32_t, Poly> powers;
    for (const auto& [m, c] : terms_) {
      const std::uint32_t e = m.exponent(v);
      if (e == 0) {
        r.add_term(m, c);
        continue;
      }
      auto it = powers.find(e);
      if (it == powers.end()) it = powers.emplace(e, value.pow_from(e, c)).first;
      r += it->second.times(m.without(v)).scale(c);
    }
    return r;
  }

  /// Largest e with v^e dividing every term; kInfiniteValuation for zero.
  std::uint32_t valuation(Variable v) const {
    if (is_zero()) return kInfiniteValuation;
    std::uint32_t best = kInfiniteValuation;
    for (const auto& [m, c] : terms_) best = std::min(best, m.exponent(v));
    return best;
  }
  std::uint32_t degree_in(Variable v) const {
    std::uint32_t best = 0;
    for (const auto& [m, c] : terms_) best = std::max(best, m.exponent(v));
    return best;
  }
  std::uint32_t total_degree() const {
    std::uint32_t best = 0;
    for (const auto& [m, c] : terms_) best = std::max(best, m.degree());
    return best;
  }

  /// Removes and returns the largest term. Requires a nonzero polynomial.
  std::pair<Monomial, K> pop_leading() {
    auto it = std::prev(terms_.end());
    std::pair<Monomial, K> out{it->first, it->second};
    terms_.erase(it);
    return out;
  }

  /// this += c * mono * f
  void add_scaled(const Poly& f, const Monomial& mono, const K& c) {
    for (const auto& [m, a] : f.terms_) add_term(m * mono, K(a * c));
  }

  bool operator==(const Poly& o) const { return terms_ == o.terms_; }

 private:
  // A coefficient carrying the field (needed for F_p constants).
  K unit_hint() const { return terms_.empty() ? K(1) : terms_.begin()->second; }
  Poly pow_from(std::uint32_t e, const K& hint) const {
    Poly r = constant(one_like(hint));
    for (std::uint32_t i = 0; i < e; ++i) r *= *this;
    return r;
  }

  Terms terms_;
};

using MPoly = Poly<Rational>;
using FpPoly = Poly<Fp>;

/// z_i and z_i' as rational polynomials.
MPoly z(std::uint32_t i);
MPoly zp(std::uint32_t i);
/// w_{i,j} = z_i z_j' - z_i' z_j.
MPoly w(std::uint32_t i, std::uint32_t j);

FpPoly reduce_mod_p(const MPoly& f, std::uint64_t p);

/// Evaluates f at base values z and fiber values dz (indexed by variable
/// index). Missing indices are an error.
Fp evaluate(const MPoly& f, const std::vector<Fp>& base,
            const std::vector<Fp>& fiber);

/// Human-readable form, largest monomial first: "3/2*z1^2*z3' - z0".
std::string to_string(const MPoly& f);

}  // namespace orbicert
