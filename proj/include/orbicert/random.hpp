#pragma once

#include <cstdint>
#include <random>

#include "orbicert/prime_field.hpp"

namespace orbicert {

/// Seeded generator with a fully specified output stream. std::mt19937_64 is
/// pinned by the standard; the standard distributions are not, so bounded
/// draws use rejection sampling here instead.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, bound). bound > 0.
  std::uint64_t below(std::uint64_t bound);

  Fp uniform(std::uint64_t p) { return Fp(static_cast<std::int64_t>(below(p)), p); }
  Fp nonzero(std::uint64_t p) {
    return Fp(static_cast<std::int64_t>(1 + below(p - 1)), p);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace orbicert
