#pragma once

// Property checks shared by the unit suites and the acceptance binary. Each
// returns the number of failing cases so callers can report counts.

#include <cstdint>

#include "orbicert/differentials.hpp"
#include "orbicert/prime_field.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

namespace orbicert::testing {

// n x (n+1) matrix V with sum_c V[., c] w_c = 0 for positive weights w; then
// (-1)^c det_{c-bar}(V) / w_c must not depend on c.
inline std::size_t cramer_minor_law_failures(std::uint64_t seed, std::size_t cases) {
  Rng rng(seed);
  std::size_t failures = 0;
  for (std::size_t t = 0; t < cases; ++t) {
    const std::size_t n = 1 + rng.below(4);
    RationalMatrix V = random_matrix(rng, n, n + 1);
    std::vector<Rational> w(n + 1);
    for (auto& x : w) {
      x = Rational(static_cast<long>(rng.below(9)) + 1, static_cast<long>(rng.below(4)) + 1);
      x.canonicalize();
    }
    for (std::size_t r = 0; r < n; ++r) {
      Rational s = 0;
      for (std::size_t c = 0; c < n; ++c) s += V(r, c) * w[c];
      V(r, n) = -s / w[n];
    }
    std::vector<std::size_t> rows(n);
    for (std::size_t r = 0; r < n; ++r) rows[r] = r;
    std::optional<Rational> value;
    for (std::size_t c = 0; c <= n; ++c) {
      std::vector<std::size_t> cols;
      for (std::size_t j = 0; j <= n; ++j)
        if (j != c) cols.push_back(j);
      Rational q = minor(V, rows, cols) / w[c];
      if (c % 2) q = -q;
      if (!value) value = q;
      else if (*value != q) {
        ++failures;
        break;
      }
    }
  }
  return failures;
}

// x^m = a whenever a root is returned; no root implies a^((p-1)/m) != 1.
inline std::size_t mth_root_failures(std::uint64_t seed, std::size_t draws) {
  static constexpr std::uint32_t kOrders[] = {2, 3, 4, 5, 6, 7, 8, 9, 12, 16};
  Rng rng(seed);
  std::size_t failures = 0;
  for (std::size_t t = 0; t < draws; ++t) {
    const std::uint32_t m = kOrders[rng.below(std::size(kOrders))];
    const std::uint64_t p = next_prime_congruent_one(3 + rng.below(1u << 22), m);
    // Half the draws are m-th powers by construction.
    Fp a = rng.uniform(p);
    if (t % 2) a = a.pow(m);
    const auto x = mth_root(a, m);
    if (x ? x->pow(m) != a : a.pow((p - 1) / m) == Fp(1, p)) ++failures;
  }
  return failures;
}

struct RewriteStats {
  std::size_t cases = 0;
  std::size_t not_idempotent = 0;
  std::size_t order_disagreement = 0;   // exact, canonical vs ascending after saturation
  std::size_t random_disagreement = 0;  // random rule order, by F_p evaluation on the cover
};

// Random polynomials in the chart-0 variables of the cover, exponents up to
// m + 1 so that both rule kinds fire.
inline RewriteStats rewrite_properties(const FermatCover& cov, std::uint64_t seed,
                                       std::size_t cases, std::size_t points = 5) {
  const CoverIdealRewriter rw = chart_rewriter(cov, 0);
  const std::uint64_t p = default_prime(cov.m);
  CoverSampler sampler(cov, p, seed ^ 0x5eed);
  std::vector<CoverPoint> pts;
  for (std::size_t i = 0; i < points; ++i) pts.push_back(sampler.next());
  Rng rng(seed);
  RewriteStats st;
  for (std::size_t t = 0; t < cases; ++t) {
    const MPoly f = random_poly(rng, static_cast<std::uint32_t>(cov.N() + 1), 1 + rng.below(5),
                                cov.m + 1);
    const MPoly nf = rw.normal_form(f);
    ++st.cases;
    if (rw.normal_form(nf) != nf) ++st.not_idempotent;
    const MPoly s = rw.saturate(f);
    if (rw.normal_form(s) != rw.normal_form(s, RewriteOrder::ascending)) ++st.order_disagreement;
    const MPoly rnd = rw.normal_form_randomized(f, seed + t);
    for (const auto& pt : pts)
      if (evaluate(nf, pt.z, pt.dz) != evaluate(rnd, pt.z, pt.dz) ||
          evaluate(nf, pt.z, pt.dz) != evaluate(rw.to_chart(f), pt.z, pt.dz)) {
        ++st.random_disagreement;
        break;
      }
  }
  return st;
}

}  // namespace orbicert::testing
