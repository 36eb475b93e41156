#include "orbicert/matrix.hpp"

namespace orbicert {

Rational det(const RationalMatrix& m) {
  if (!m.square()) throw PreconditionError("det of a non-square matrix");
  const std::size_t n = m.rows();
  if (n == 0) return Rational(1);

  // Clear denominators row by row, then run fraction-free Bareiss over Z.
  std::vector<Integer> a(n * n);
  Integer scale = 1;
  for (std::size_t i = 0; i < n; ++i) {
    Integer l = 1;
    for (std::size_t j = 0; j < n; ++j) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), m(i, j).get_den_mpz_t());
    for (std::size_t j = 0; j < n; ++j) a[i * n + j] = m(i, j).get_num() * (l / m(i, j).get_den());
    scale *= l;
  }
  auto at = [&](std::size_t i, std::size_t j) -> Integer& { return a[i * n + j]; };

  bool negate = false;
  Integer prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    std::size_t p = k;
    while (p < n && at(p, k) == 0) ++p;
    if (p == n) return Rational(0);
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(at(p, j), at(k, j));
      negate = !negate;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        Integer v = at(i, j) * at(k, k) - at(i, k) * at(k, j);
        mpz_divexact(at(i, j).get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
      }
    }
    prev = at(k, k);
  }
  Rational d(negate ? Integer(-at(n - 1, n - 1)) : at(n - 1, n - 1), scale);
  d.canonicalize();
  return d;
}

Fp det(const FpMatrix& m) {
  if (!m.square()) throw PreconditionError("det of a non-square matrix");
  return detail::bareiss_det(m);
}

std::optional<RationalMatrix> inverse(const RationalMatrix& m) {
  if (!m.square()) throw PreconditionError("inverse of a non-square matrix");
  const std::size_t n = m.rows();
  RationalMatrix a = m;
  RationalMatrix inv = RationalMatrix::identity(n);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && is_zero(a(p, c))) ++p;
    if (p == n) return std::nullopt;
    if (p != c)
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(a(p, j), a(c, j));
        std::swap(inv(p, j), inv(c, j));
      }
    const Rational pivot_inv = inverse(a(c, c));
    for (std::size_t j = 0; j < n; ++j) {
      a(c, j) *= pivot_inv;
      inv(c, j) *= pivot_inv;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || is_zero(a(i, c))) continue;
      const Rational f = a(i, c);
      for (std::size_t j = 0; j < n; ++j) {
        a(i, j) -= f * a(c, j);
        inv(i, j) -= f * inv(c, j);
      }
    }
  }
  return inv;
}

RationalMatrix kernel_basis(const RationalMatrix& m) {
  RationalMatrix r = m;
  const std::size_t rows = r.rows(), cols = r.cols();
  std::vector<std::size_t> pivot_col;
  std::size_t row = 0;
  for (std::size_t c = 0; c < cols && row < rows; ++c) {
    std::size_t p = row;
    while (p < rows && is_zero(r(p, c))) ++p;
    if (p == rows) continue;
    for (std::size_t j = 0; j < cols; ++j) std::swap(r(p, j), r(row, j));
    const Rational inv = inverse(r(row, c));
    for (std::size_t j = 0; j < cols; ++j) r(row, j) *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == row || is_zero(r(i, c))) continue;
      const Rational f = r(i, c);
      for (std::size_t j = 0; j < cols; ++j) r(i, j) -= f * r(row, j);
    }
    pivot_col.push_back(c);
    ++row;
  }
  std::vector<bool> is_pivot(cols, false);
  for (std::size_t c : pivot_col) is_pivot[c] = true;

  std::vector<std::vector<Rational>> basis;
  for (std::size_t f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    std::vector<Rational> v(cols, Rational(0));
    v[f] = 1;
    for (std::size_t i = 0; i < pivot_col.size(); ++i) v[pivot_col[i]] = -r(i, f);
    basis.push_back(std::move(v));
  }
  if (basis.empty()) return RationalMatrix(0, cols);
  return RationalMatrix::from_rows(basis);
}

FpMatrix reduce_mod_p(const RationalMatrix& m, std::uint64_t p) {
  FpMatrix out(m.rows(), m.cols(), Fp(0, p));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = Fp::from_rational(m(i, j), p);
  return out;
}

}  // namespace orbicert
