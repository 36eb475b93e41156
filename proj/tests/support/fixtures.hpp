#pragma once

#include <cstdint>
#include <vector>

#include "orbicert/arrangement.hpp"
#include "orbicert/fermat.hpp"
#include "orbicert/random.hpp"

namespace orbicert::testing {

// Entries p/q with |p| <= 9, 1 <= q <= 3.
inline Rational small_rational(Rng& rng) {
  const auto p = static_cast<long>(rng.below(19)) - 9;
  const auto q = static_cast<long>(rng.below(3)) + 1;
  return Rational(p, q);
}

inline RationalMatrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols) {
  RationalMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) {
      m(i, j) = small_rational(rng);
      m(i, j).canonicalize();
    }
  return m;
}

inline Arrangement random_arrangement(std::size_t n, std::size_t d, Rng& rng) {
  std::vector<Covector> hs;
  while (hs.size() < d) {
    Covector h(n + 1);
    bool nonzero = false;
    for (auto& x : h) {
      x = small_rational(rng);
      x.canonicalize();
      nonzero = nonzero || sgn(x) != 0;
    }
    if (nonzero) hs.push_back(h);
  }
  return Arrangement(n, hs);
}

// Rejection-samples until both general-position checks pass.
inline Arrangement random_general_arrangement(std::size_t n, std::size_t d, Rng& rng) {
  for (;;) {
    Arrangement a = random_arrangement(n, d, rng);
    if (is_general_position(a)) return a;
  }
}

inline Arrangement noguchi_arrangement(std::uint64_t seed = 2024) {
  Rng rng(seed);
  return random_general_arrangement(2, 6, rng);
}

inline FermatCover cover_of(const Arrangement& a, std::uint32_t m) {
  return build_cover(normalize(a), m);
}

// Six points (1, t, t^2) on the conic x0 x2 = x1^2.
inline Arrangement dual_conic_arrangement() {
  std::vector<Covector> hs;
  for (long t = 0; t < 6; ++t) hs.push_back({Rational(1), Rational(t), Rational(t * t)});
  return Arrangement(2, hs);
}

}  // namespace orbicert::testing
