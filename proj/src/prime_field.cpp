#include "orbicert/prime_field.hpp"

#include <array>
#include <tuple>
#include <utility>
#include <vector>

namespace orbicert {

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % p);
}

std::uint64_t pow_mod(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
  std::uint64_t r = 1 % p;
  a %= p;
  while (e > 0) {
    if (e & 1) r = mul_mod(r, a, p);
    a = mul_mod(a, a, p);
    e >>= 1;
  }
  return r;
}

Fp::Fp(std::int64_t value, std::uint64_t modulus) : modulus_(modulus) {
  if (modulus < 2 || modulus >= (std::uint64_t{1} << 63))
    throw PreconditionError("prime-field modulus out of range");
  const auto p = static_cast<std::int64_t>(modulus);
  std::int64_t v = value % p;
  if (v < 0) v += p;
  value_ = static_cast<std::uint64_t>(v);
}

Fp Fp::from_rational(const Rational& q, std::uint64_t modulus) {
  Integer num = q.get_num() % Integer(static_cast<unsigned long>(modulus));
  Integer den = q.get_den() % Integer(static_cast<unsigned long>(modulus));
  if (den == 0)
    throw PreconditionError("denominator of " + to_string(q) +
                            " vanishes modulo " + std::to_string(modulus));
  Fp n(num.get_si(), modulus);
  Fp d(den.get_si(), modulus);
  return n / d;
}

void Fp::check_same_field(const Fp& o) const {
  if (modulus_ != o.modulus_) throw PreconditionError("prime-field mismatch");
}

Fp Fp::operator+(const Fp& o) const {
  check_same_field(o);
  Fp r = *this;
  r.value_ += o.value_;
  if (r.value_ >= modulus_) r.value_ -= modulus_;
  return r;
}

Fp Fp::operator-(const Fp& o) const {
  check_same_field(o);
  Fp r = *this;
  r.value_ = value_ >= o.value_ ? value_ - o.value_ : value_ + modulus_ - o.value_;
  return r;
}

Fp Fp::operator*(const Fp& o) const {
  check_same_field(o);
  Fp r = *this;
  r.value_ = mul_mod(value_, o.value_, modulus_);
  return r;
}

Fp Fp::operator/(const Fp& o) const { return *this * o.inverse(); }

Fp Fp::operator-() const {
  Fp r = *this;
  r.value_ = value_ == 0 ? 0 : modulus_ - value_;
  return r;
}

Fp Fp::pow(std::uint64_t e) const {
  Fp r = *this;
  r.value_ = pow_mod(value_, e, modulus_);
  return r;
}

Fp Fp::inverse() const {
  if (value_ == 0) throw PreconditionError("inverse of zero in F_p");
  return pow(modulus_ - 2);
}

std::string to_string(const Fp& x) { return std::to_string(x.value()); }

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  static constexpr std::array<std::uint64_t, 12> kBases = {2,  3,  5,  7,  11, 13,
                                                           17, 19, 23, 29, 31, 37};
  for (std::uint64_t b : kBases) {
    if (n == b) return true;
    if (n % b == 0) return false;
  }
  std::uint64_t d = n - 1;
  unsigned s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t b : kBases) {
    std::uint64_t x = pow_mod(b, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (unsigned r = 1; r < s; ++r) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::uint64_t next_prime_congruent_one(std::uint64_t lower, std::uint32_t m) {
  if (m == 0) throw PreconditionError("m must be positive");
  // Smallest candidate >= lower with candidate = 1 (mod m).
  std::uint64_t c = lower <= 1 ? 1 : lower;
  const std::uint64_t r = (c - 1) % m;
  if (r != 0) c += m - r;
  if (c < 2) c += m;
  while (!is_prime(c)) c += m;
  return c;
}

std::uint64_t default_prime(std::uint32_t m) {
  return next_prime_congruent_one(std::uint64_t{1} << 20, m);
}

bool root_of_unity_order(std::uint64_t p, std::uint32_t m) {
  return m != 0 && (p - 1) % m == 0;
}

bool is_mth_power_residue(const Fp& a, std::uint32_t m) {
  const std::uint64_t p = a.modulus();
  if (!root_of_unity_order(p, m))
    throw PreconditionError("m does not divide p - 1");
  if (a.is_zero()) return true;
  return a.pow((p - 1) / m).value() == 1;
}

namespace {

std::vector<std::pair<std::uint32_t, std::uint32_t>> factor(std::uint32_t m) {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
  for (std::uint32_t q = 2; static_cast<std::uint64_t>(q) * q <= m; ++q) {
    if (m % q != 0) continue;
    std::uint32_t e = 0;
    while (m % q == 0) {
      m /= q;
      ++e;
    }
    out.emplace_back(q, e);
  }
  if (m > 1) out.emplace_back(m, 1);
  return out;
}

// Signed extended gcd: returns (g, x, y) with a x + b y = g.
std::tuple<std::int64_t, std::int64_t, std::int64_t> ext_gcd(std::int64_t a,
                                                             std::int64_t b) {
  if (b == 0) return {a, 1, 0};
  auto [g, x, y] = ext_gcd(b, a % b);
  return {g, y, x - (a / b) * y};
}

Fp signed_pow(const Fp& x, std::int64_t e) {
  return e >= 0 ? x.pow(static_cast<std::uint64_t>(e))
                : x.inverse().pow(static_cast<std::uint64_t>(-e));
}

// x with x^(q^e) = a, for a known to be a (q^e)-th power residue.
Fp prime_power_root(const Fp& a, std::uint32_t q, std::uint32_t e) {
  const std::uint64_t p = a.modulus();
  std::uint64_t mm = 1;
  for (std::uint32_t i = 0; i < e; ++i) mm *= q;

  std::uint64_t t = p - 1;
  std::uint32_t s = 0;
  while (t % q == 0) {
    t /= q;
    ++s;
  }

  // u = mm^{-1} mod t, so that x0 = a^u is a root up to a Sylow-q factor.
  std::uint64_t u = 0;
  if (t > 1) {
    auto [g, x, y] = ext_gcd(static_cast<std::int64_t>(mm % t),
                             static_cast<std::int64_t>(t));
    (void)g;
    (void)y;
    std::int64_t xi = x % static_cast<std::int64_t>(t);
    if (xi < 0) xi += static_cast<std::int64_t>(t);
    u = static_cast<std::uint64_t>(xi);
  }
  const Fp x0 = a.pow(u);
  const Fp b = x0.pow(mm) / a;

  // Generator of the Sylow-q subgroup from the first q-th non-residue.
  Fp c(2, p);
  while (c.pow((p - 1) / q).value() == 1) c += Fp(1, p);
  const Fp z = c.pow(t);

  std::uint64_t q_pow_s1 = 1;
  for (std::uint32_t i = 0; i + 1 < s; ++i) q_pow_s1 *= q;
  const Fp zeta = z.pow(q_pow_s1);

  // Pohlig-Hellman: discrete log of b in base z, digit by digit.
  std::uint64_t log_b = 0;
  std::uint64_t q_pow_i = 1;
  const Fp z_inv = z.inverse();
  for (std::uint32_t i = 0; i < s; ++i) {
    std::uint64_t exp = 1;
    for (std::uint32_t l = i + 1; l < s; ++l) exp *= q;
    const Fp h = (b * z_inv.pow(log_b)).pow(exp);
    Fp probe(1, p);
    std::uint32_t d = 0;
    while (!(probe == h)) {
      probe *= zeta;
      if (++d >= q) throw PreconditionError("mth_root: discrete log failed");
    }
    log_b += d * q_pow_i;
    q_pow_i *= q;
  }
  // log_b is a multiple of mm because b is an mm-th power inside the subgroup.
  return x0 * z_inv.pow(log_b / mm);
}

}  // namespace

std::optional<Fp> mth_root(const Fp& a, std::uint32_t m) {
  if (!root_of_unity_order(a.modulus(), m))
    throw PreconditionError("mth_root requires m | p - 1");
  if (a.is_zero() || m == 1) return a;
  if (!is_mth_power_residue(a, m)) return std::nullopt;

  const auto parts = factor(m);
  Fp x = one_like(a);
  std::uint64_t done = 1;
  for (auto [q, e] : parts) {
    std::uint64_t qe = 1;
    for (std::uint32_t i = 0; i < e; ++i) qe *= q;
    const Fp r = prime_power_root(a, q, e);
    if (done == 1) {
      x = r;
    } else {
      // x^done = a and r^qe = a with gcd(done, qe) = 1: glue with Bezout.
      auto [g, u, v] = ext_gcd(static_cast<std::int64_t>(done),
                               static_cast<std::int64_t>(qe));
      (void)g;
      x = signed_pow(x, v) * signed_pow(r, u);
    }
    done *= qe;
  }
  return x;
}

}  // namespace orbicert
