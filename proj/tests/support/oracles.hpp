#pragma once

// Reference implementations kept deliberately naive and independent of the
// library code paths they check.

#include <cstddef>
#include <optional>
#include <vector>

#include "orbicert/matrix.hpp"
#include "orbicert/mpoly.hpp"
#include "orbicert/random.hpp"

namespace orbicert::testing {

// Cofactor expansion along the first row.
inline Rational cofactor_det(const std::vector<std::vector<Rational>>& m) {
  const std::size_t n = m.size();
  if (n == 0) return Rational(1);
  if (n == 1) return m[0][0];
  Rational sum = 0;
  for (std::size_t c = 0; c < n; ++c) {
    if (sgn(m[0][c]) == 0) continue;
    std::vector<std::vector<Rational>> sub;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<Rational> row;
      for (std::size_t j = 0; j < n; ++j)
        if (j != c) row.push_back(m[r][j]);
      sub.push_back(row);
    }
    const Rational term = m[0][c] * cofactor_det(sub);
    sum += (c % 2 == 0) ? term : Rational(-term);
  }
  return sum;
}

inline std::vector<std::vector<Rational>> rows_of(const RationalMatrix& m) {
  std::vector<std::vector<Rational>> out;
  for (std::size_t i = 0; i < m.rows(); ++i) out.push_back(m.row(i));
  return out;
}

// Plain row reduction with partial pivoting on the first nonzero entry.
inline std::size_t gauss_rank(std::vector<std::vector<Rational>> m) {
  if (m.empty()) return 0;
  const std::size_t cols = m[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
    std::size_t p = r;
    while (p < m.size() && sgn(m[p][c]) == 0) ++p;
    if (p == m.size()) continue;
    std::swap(m[p], m[r]);
    for (std::size_t i = r + 1; i < m.size(); ++i) {
      if (sgn(m[i][c]) == 0) continue;
      const Rational f = m[i][c] / m[r][c];
      for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    ++r;
  }
  return r;
}

// Rank of the evaluation matrix of all degree-2 monomials at the dual points.
inline std::size_t veronese_rank_oracle(const std::vector<std::vector<Rational>>& points) {
  std::vector<std::vector<Rational>> rows;
  for (const auto& h : points) {
    std::vector<Rational> row;
    for (std::size_t a = 0; a < h.size(); ++a)
      for (std::size_t b = a; b < h.size(); ++b) row.push_back(h[a] * h[b]);
    rows.push_back(row);
  }
  return gauss_rank(rows);
}

// Set partitions of {0..size-1} into at least two blocks of size >= min_block,
// by restricted growth strings.
inline std::optional<std::vector<std::vector<std::size_t>>> find_block_partition(
    std::size_t size, std::size_t min_block) {
  const std::size_t max_blocks = size / min_block;
  if (max_blocks < 2) return std::nullopt;
  std::vector<std::size_t> label(size, 0);
  std::optional<std::vector<std::vector<std::size_t>>> found;
  auto rec = [&](auto&& self, std::size_t pos, std::size_t blocks) -> void {
    if (found) return;
    if (pos == size) {
      if (blocks < 2) return;
      std::vector<std::vector<std::size_t>> parts(blocks);
      for (std::size_t i = 0; i < size; ++i) parts[label[i]].push_back(i);
      for (const auto& p : parts)
        if (p.size() < min_block) return;
      found = parts;
      return;
    }
    for (std::size_t b = 0; b <= blocks && b < max_blocks; ++b) {
      label[pos] = b;
      self(self, pos + 1, std::max(blocks, b + 1));
    }
  };
  rec(rec, 0, 0);
  return found;
}

inline Rational random_rational(Rng& rng, long bound = 9, long den = 3) {
  Rational q(static_cast<long>(rng.below(2 * bound + 1)) - bound,
             static_cast<long>(rng.below(den)) + 1);
  q.canonicalize();
  return q;
}

// Random polynomial in z_0..z_{vars-1}, z_0'..z_{vars-1}' with the given
// number of terms and per-variable exponent bound.
inline MPoly random_poly(Rng& rng, std::uint32_t vars, std::size_t terms, std::uint32_t max_exp) {
  MPoly f;
  for (std::size_t t = 0; t < terms; ++t) {
    std::vector<Monomial::Entry> e;
    for (std::uint32_t v = 0; v < vars; ++v) {
      const auto a = static_cast<std::uint32_t>(rng.below(max_exp + 1));
      if (a) e.push_back({Variable::base(v).key(), a});
    }
    for (std::uint32_t v = 0; v < vars; ++v) {
      const auto a = static_cast<std::uint32_t>(rng.below(2));
      if (a) e.push_back({Variable::fiber(v).key(), a});
    }
    Rational c = random_rational(rng);
    if (sgn(c) == 0) c = 1;
    f.add_term(Monomial::from_entries(e), c);
  }
  return f;
}

}  // namespace orbicert::testing
