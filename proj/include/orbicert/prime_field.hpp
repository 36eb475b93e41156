#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "orbicert/rational.hpp"

namespace orbicert {

/// Element of F_p for a word-size prime p (p < 2^63). The modulus travels
/// with the value; mixing moduli throws PreconditionError.
class Fp {
 public:
  Fp() = default;
  Fp(std::int64_t value, std::uint64_t modulus);

  /// Reduction of a rational; throws if p divides the denominator.
  static Fp from_rational(const Rational& q, std::uint64_t modulus);

  std::uint64_t value() const { return value_; }
  std::uint64_t modulus() const { return modulus_; }
  bool is_zero() const { return value_ == 0; }

  Fp operator+(const Fp& o) const;
  Fp operator-(const Fp& o) const;
  Fp operator*(const Fp& o) const;
  Fp operator/(const Fp& o) const;
  Fp operator-() const;
  Fp& operator+=(const Fp& o) { return *this = *this + o; }
  Fp& operator-=(const Fp& o) { return *this = *this - o; }
  Fp& operator*=(const Fp& o) { return *this = *this * o; }
  Fp& operator/=(const Fp& o) { return *this = *this / o; }

  Fp pow(std::uint64_t e) const;
  Fp inverse() const;

  bool operator==(const Fp& o) const {
    return value_ == o.value_ && modulus_ == o.modulus_;
  }

 private:
  void check_same_field(const Fp& o) const;

  std::uint64_t value_ = 0;
  std::uint64_t modulus_ = 0;
};

inline bool is_zero(const Fp& x) { return x.is_zero(); }
inline Fp zero_like(const Fp& x) { return Fp(0, x.modulus()); }
inline Fp one_like(const Fp& x) { return Fp(1, x.modulus()); }
inline Fp inverse(const Fp& x) { return x.inverse(); }
std::string to_string(const Fp& x);

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t p);
std::uint64_t pow_mod(std::uint64_t a, std::uint64_t e, std::uint64_t p);

/// Deterministic Miller-Rabin, exact for all 64-bit inputs.
bool is_prime(std::uint64_t n);

/// Smallest prime p >= lower with p = 1 (mod m).
std::uint64_t next_prime_congruent_one(std::uint64_t lower, std::uint32_t m);

/// Smallest prime >= 2^20 with m | p - 1.
std::uint64_t default_prime(std::uint32_t m);

/// True iff F_p contains the m-th roots of unity, i.e. m | p - 1.
bool root_of_unity_order(std::uint64_t p, std::uint32_t m);

/// a^((p-1)/m) == 1 (zero counts as a residue). Requires m | p - 1.
bool is_mth_power_residue(const Fp& a, std::uint32_t m);

/// Some x with x^m = a, or nullopt when a is not an m-th power.
/// Requires m | p - 1 (PreconditionError otherwise). Prime-power parts of m
/// are handled by a Tonelli-Shanks / Adleman-Manders-Miller style descent in
/// the Sylow subgroup, coprime parts are glued with a Bezout combination.
std::optional<Fp> mth_root(const Fp& a, std::uint32_t m);

}  // namespace orbicert
