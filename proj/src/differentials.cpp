#include "orbicert/differentials.hpp"

#include <algorithm>
#include <unordered_map>

#include "orbicert/error.hpp"

namespace orbicert {

namespace {

MPoly restrict_to_chart(const MPoly& f, std::size_t chart) {
  const auto c = static_cast<std::uint32_t>(chart);
  MPoly out;
  for (const auto& [mono, coeff] : f.terms()) {
    if (mono.exponent(Variable::fiber(c)) > 0) continue;
    out.add_term(mono.without(Variable::base(c)), coeff);
  }
  return out;
}

MPoly det_rec(const PolyMatrix& m, std::size_t row, std::uint64_t cols,
              std::unordered_map<std::uint64_t, MPoly>& memo) {
  if (row == m.size()) return MPoly::constant(Rational(1));
  if (auto it = memo.find(cols); it != memo.end()) return it->second;
  MPoly out;
  int sign = 1;
  for (std::size_t c = 0; c < m.size(); ++c) {
    if (!(cols >> c & 1)) continue;
    const MPoly& entry = m[row][c];
    if (!entry.is_zero()) {
      MPoly sub = det_rec(m, row + 1, cols & ~(std::uint64_t{1} << c), memo);
      out += sign > 0 ? entry * sub : -(entry * sub);
    }
    sign = -sign;
  }
  memo.emplace(cols, out);
  return out;
}

PolyMatrix drop_column(const PolyMatrix& m, std::size_t col) {
  PolyMatrix out;
  for (const auto& row : m) {
    std::vector<MPoly> r;
    for (std::size_t c = 0; c < row.size(); ++c)
      if (c != col) r.push_back(row[c]);
    out.push_back(std::move(r));
  }
  return out;
}

PolyMatrix to_chart(PolyMatrix m, std::size_t chart) {
  for (auto& row : m)
    for (auto& e : row) e = restrict_to_chart(e, chart);
  return m;
}

std::uint32_t u32(std::size_t i) { return static_cast<std::uint32_t>(i); }

Fp signed_pow(const Fp& x, std::int64_t e) {
  return e >= 0 ? x.pow(static_cast<std::uint64_t>(e))
                : x.inverse().pow(static_cast<std::uint64_t>(-e));
}

void check_chart(const FermatCover& cov, std::size_t chart) {
  if (chart > cov.N()) throw PreconditionError("chart index out of range");
}

}  // namespace

MPoly poly_det(const PolyMatrix& m) {
  for (const auto& row : m)
    if (row.size() != m.size()) throw PreconditionError("poly_det: matrix not square");
  if (m.size() > 63) throw PreconditionError("poly_det: matrix too large");
  std::unordered_map<std::uint64_t, MPoly> memo;
  const std::uint64_t all = m.empty() ? 0 : (std::uint64_t{1} << m.size()) - 1;
  return det_rec(m, 0, all, memo);
}

IndexSet default_rows(const FermatCover& cov) {
  IndexSet rows;
  for (std::size_t r = 1; r <= cov.n; ++r) rows.push_back(cov.n + r);
  return rows;
}

PolyMatrix cramer_matrix(const FermatCover& cov, const IndexSet& rows,
                         const std::optional<RationalMatrix>& coefficients) {
  const std::size_t n = cov.n;
  if (cov.k() < n) throw PreconditionError("sigma needs k >= n relations");
  if (rows.size() != n) throw PreconditionError("sigma needs exactly n row indices");
  for (std::size_t a = 0; a < rows.size(); ++a) {
    if (rows[a] <= n || rows[a] > cov.N())
      throw PreconditionError("row index " + std::to_string(rows[a]) + " not in n+1..N");
    for (std::size_t b = 0; b < a; ++b)
      if (rows[a] == rows[b]) throw PreconditionError("row indices must be distinct");
  }
  const RationalMatrix& A = coefficients ? *coefficients : cov.A;
  if (A.rows() != cov.k() || A.cols() != n + 1)
    throw PreconditionError("coefficient matrix has the wrong shape");
  PolyMatrix M(n, std::vector<MPoly>(n + 1));
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t i = 0; i <= n; ++i)
      M[r][i] = w(u32(i), u32(rows[r])).scale(A(rows[r] - n - 1, i));
  return M;
}

MPoly generate_sigma(const FermatCover& cov, const IndexSet& rows, std::size_t chart) {
  check_chart(cov, chart);
  const std::size_t n = cov.n;
  const PolyMatrix M = cramer_matrix(cov, rows);
  MPoly out;
  if (chart <= n) {
    out = poly_det(drop_column(M, chart));
    if (chart % 2 == 1) out = -out;
  } else {
    const std::size_t s = chart - n;
    PolyMatrix bordered;
    std::vector<MPoly> top;
    for (std::size_t i = 0; i <= n; ++i) top.push_back(z(u32(i)).scale(cov.A(s - 1, i)));
    bordered.push_back(std::move(top));
    bordered.insert(bordered.end(), M.begin(), M.end());
    out = poly_det(bordered);
  }
  return restrict_to_chart(out, chart);
}

const MPoly& TwistedSection::expression(std::size_t chart) const {
  auto it = charts.find(chart);
  if (it == charts.end())
    throw PreconditionError("chart " + std::to_string(chart) + " not generated");
  return it->second;
}

TwistedSection generate_section(const FermatCover& cov, const IndexSet& rows,
                                const std::vector<std::size_t>& charts) {
  TwistedSection sec;
  sec.cover = cov;
  sec.rows = rows;
  sec.twist = 2 * static_cast<std::int64_t>(cov.n) + 1 - static_cast<std::int64_t>(cov.m);
  sec.symmetric_degree = cov.n;
  if (charts.empty()) {
    for (std::size_t c = 0; c <= cov.N(); ++c) sec.charts[c] = generate_sigma(cov, rows, c);
  } else {
    for (std::size_t c : charts) sec.charts[c] = generate_sigma(cov, rows, c);
  }
  return sec;
}

CoverIdealRewriter chart_rewriter(const FermatCover& cov, std::size_t chart,
                                  std::optional<std::size_t> keep_free) {
  return CoverIdealRewriter(cov.n, cov.A, cov.m, chart, keep_free);
}

bool verify_cramer_annihilation(const FermatCover& cov, const IndexSet& rows,
                                const std::optional<RationalMatrix>& coefficients) {
  const PolyMatrix M = cramer_matrix(cov, rows, coefficients);
  const CoverIdealRewriter rw = chart_rewriter(cov, 0);
  for (const auto& row : M) {
    MPoly sum;
    for (std::size_t i = 0; i <= cov.n; ++i) sum += row[i] * z(u32(i)).pow(cov.m - 1);
    if (!rw.is_zero_mod_ideal(sum)) return false;
  }
  return true;
}

std::pair<MPoly, std::uint32_t> transport(const MPoly& f, std::size_t c1, std::size_t c2) {
  const auto a = u32(c1);
  std::uint32_t D = 0;
  for (const auto& [mono, coeff] : f.terms()) {
    std::uint32_t weight = 0;
    for (const auto& [key, e] : mono.entries())
      weight += Variable::from_key(key).flavor == Flavor::base ? e : 2 * e;
    D = std::max(D, weight);
  }
  const MPoly ya = z(a);
  std::map<std::uint32_t, MPoly> fiber_image;  // index -> y_i' y_a - y_i y_a'
  MPoly P;
  for (const auto& [mono, coeff] : f.terms()) {
    MPoly term = MPoly::constant(coeff);
    std::uint32_t weight = 0;
    Monomial plain;
    for (const auto& [key, e] : mono.entries()) {
      const Variable v = Variable::from_key(key);
      if (v.index == a) throw PreconditionError("transport: expression uses its own chart variable");
      if (v.flavor == Flavor::base) {
        plain = plain * Monomial::of(v, e);
        weight += e;
      } else {
        auto it = fiber_image.find(v.index);
        if (it == fiber_image.end())
          it = fiber_image.emplace(v.index, zp(v.index) * ya - z(v.index) * zp(a)).first;
        term *= it->second.pow(e);
        weight += 2 * e;
      }
    }
    plain = plain * Monomial::of(Variable::base(a), D - weight);
    P += term.times(plain);
  }
  return {restrict_to_chart(P, c2), D};
}

bool verify_chart_compatibility(const TwistedSection& sec, std::size_t c1, std::size_t c2) {
  const FermatCover& cov = sec.cover;
  check_chart(cov, c1);
  check_chart(cov, c2);
  if (c1 == c2) return true;
  auto get = [&](std::size_t c) {
    auto it = sec.charts.find(c);
    return it != sec.charts.end() ? it->second : generate_sigma(cov, sec.rows, c);
  };
  const MPoly s1 = get(c1), s2 = get(c2);
  auto [P, D] = transport(s1, c1, c2);
  const std::int64_t t = sec.twist;
  const std::int64_t shift = std::max<std::int64_t>(0, -t);
  const Variable y = Variable::base(u32(c1));
  const MPoly lhs =
      P.times(Monomial::of(y, static_cast<std::uint32_t>(t + shift))) -
      s2.times(Monomial::of(y, static_cast<std::uint32_t>(D + shift)));
  std::optional<std::size_t> keep;
  if (c1 <= cov.n) keep = c1;
  return chart_rewriter(cov, c2, keep).is_zero_mod_ideal(lhs);
}

std::uint32_t extra_vanishing_order(const TwistedSection& sec, std::size_t c1, std::size_t c2) {
  const FermatCover& cov = sec.cover;
  check_chart(cov, c2);
  if (c1 > cov.n) throw PreconditionError("extra vanishing is measured along a base hyperplane");
  if (c1 == c2) throw PreconditionError("extra vanishing needs two distinct charts");
  const PolyMatrix M = to_chart(cramer_matrix(cov, sec.rows), c2);
  const MPoly d1 = poly_det(drop_column(M, c1));
  const MPoly d2 = generate_sigma(cov, sec.rows, c2);
  if (d1.is_zero() || d2.is_zero()) throw PreconditionError("extra vanishing of a zero expression");

  const CoverIdealRewriter rw = chart_rewriter(cov, c2, c1);
  const Monomial factor = rw.saturation_factor(d1) * rw.saturation_factor(d2);
  const MPoly n1 = rw.normal_form(d1.times(factor));
  const MPoly n2 = rw.normal_form(d2.times(factor));
  if (n1.is_zero() || n2.is_zero())
    throw PreconditionError("expression vanishes identically on the cover");
  const Variable y = Variable::base(u32(c1));
  const std::uint32_t e1 = n1.valuation(y), e2 = n2.valuation(y);
  if (e1 < e2) throw PreconditionError("chart expressions are not related by a power of z_c1");
  const MPoly shifted = n2.times(Monomial::of(y, e1 - e2));
  if (!(n1 == shifted) && !(n1 == -shifted))
    throw PreconditionError("chart expressions are not related by a signed power of z_c1");
  return e1 - e2;
}

BWFactorization build_bw(const FermatCover& cov) {
  const std::size_t n = cov.n, k = cov.k();
  BWFactorization out;
  out.A2 = build_A2(n, cov.A);
  out.B.assign(k, std::vector<MPoly>(n + 1));
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t i = 0; i <= n; ++i)
      out.B[j][i] = restrict_to_chart(w(u32(i), u32(n + 1 + j)).scale(cov.A(j, i)), 0);
  for (const auto& [p, q] : out.A2.row_pairs) {
    std::vector<MPoly> row(n + 1), weighted(n + 1);
    const MPoly wpq = w(u32(p), u32(q));
    row[p] = wpq;
    row[q] = -wpq;
    weighted[p] = wpq * z(u32(q)).pow(cov.m - 1);
    weighted[q] = -(wpq * z(u32(p)).pow(cov.m - 1));
    for (auto& e : row) e = restrict_to_chart(e, 0);
    for (auto& e : weighted) e = restrict_to_chart(e, 0);
    out.W.push_back(std::move(row));
    out.W_weighted.push_back(std::move(weighted));
  }
  return out;
}

std::vector<std::vector<MPoly>> bw_residuals(const FermatCover& cov,
                                             const std::optional<A2Matrix>& a2) {
  const std::size_t n = cov.n, k = cov.k();
  const BWFactorization bw = build_bw(cov);
  const A2Matrix& A2 = a2 ? *a2 : bw.A2;
  if (A2.entries.rows() != bw.W.size() || A2.entries.cols() != k)
    throw PreconditionError("A_(2) has the wrong shape");
  std::vector<std::vector<MPoly>> out(k, std::vector<MPoly>(n + 1));
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t i = 0; i <= n; ++i) {
      MPoly r = bw.B[j][i] * z(u32(n + 1 + j)).pow(cov.m - 1);
      for (std::size_t row = 0; row < bw.W.size(); ++row)
        r -= bw.W_weighted[row][i].scale(A2.entries(row, j));
      out[j][i] = std::move(r);
    }
  return out;
}

bool verify_bw_factorization(const FermatCover& cov, const std::optional<A2Matrix>& a2) {
  const CoverIdealRewriter rw = chart_rewriter(cov, 0);
  for (const auto& row : bw_residuals(cov, a2))
    for (const auto& r : row)
      if (!rw.is_zero_mod_ideal(r)) return false;
  return true;
}

FpMatrix evaluate_W(const FermatCover& cov, const CoverPoint& pt) {
  const std::size_t n = cov.n;
  const Fp zero(0, pt.modulus());
  FpMatrix W(binomial(n + 1, 2), n + 1, zero);
  std::size_t row = 0;
  for (std::size_t p = 0; p <= n; ++p)
    for (std::size_t q = p + 1; q <= n; ++q, ++row) {
      const Fp wpq = pt.z[p] * pt.dz[q] - pt.dz[p] * pt.z[q];
      W(row, p) = wpq;
      W(row, q) = -wpq;
    }
  return W;
}

FpMatrix evaluate_B(const FermatCover& cov, const CoverPoint& pt) {
  const std::size_t n = cov.n, k = cov.k();
  const FpMatrix A = reduce_mod_p(cov.A, pt.modulus());
  FpMatrix B(k, n + 1, Fp(0, pt.modulus()));
  for (std::size_t j = 0; j < k; ++j) {
    const std::size_t e = n + 1 + j;
    for (std::size_t i = 0; i <= n; ++i)
      B(j, i) = A(j, i) * (pt.z[i] * pt.dz[e] - pt.dz[i] * pt.z[e]);
  }
  return B;
}

RankWitness rank_W_minor(const FermatCover& cov, const CoverPoint& pt) {
  const std::size_t n = cov.n;
  for (const Fp& c : pt.z)
    if (c.is_zero()) throw PreconditionError("point is not interior");
  if (!pt.dz[0].is_zero()) throw PreconditionError("chart-0 tangent must have z_0' = 0");
  std::size_t i1 = 0;
  for (std::size_t i = 1; i <= n && i1 == 0; ++i)
    if (!pt.dz[i].is_zero()) i1 = i;
  if (i1 == 0)
    throw PreconditionError("degenerate tangent: z_1' = .. = z_n' = 0 forces a zero tangent");

  auto wval = [&](std::size_t p, std::size_t q) {
    return pt.z[p] * pt.dz[q] - pt.dz[p] * pt.z[q];
  };
  auto row_index = [n](std::size_t p, std::size_t q) {
    std::size_t idx = 0;
    for (std::size_t a = 0; a < p; ++a) idx += n - a;
    return idx + (q - p - 1);
  };

  RankWitness out;
  out.pivot = i1;
  out.rows.emplace_back(0, i1);
  for (std::size_t i = 1; i <= n; ++i) {
    if (i == i1) continue;
    // z_i w_{0,i1} = z_{i1} w_{0,i} - z_0 w_{i1,i}, so one of them is nonzero.
    if (!wval(0, i).is_zero())
      out.rows.emplace_back(0, i);
    else
      out.rows.emplace_back(std::min(i, i1), std::max(i, i1));
  }
  std::sort(out.rows.begin(), out.rows.end());
  for (std::size_t c = 1; c <= n; ++c) out.cols.push_back(c);

  IndexSet ridx;
  for (const auto& [p, q] : out.rows) ridx.push_back(row_index(p, q));
  out.minor = det(submatrix(evaluate_W(cov, pt), ridx, out.cols));
  if (out.minor.is_zero()) throw PreconditionError("rank witness minor vanished");
  out.bound = n;
  return out;
}

CoverPoint to_chart_point(const CoverPoint& pt, std::size_t chart) {
  if (chart >= pt.z.size()) throw PreconditionError("chart index out of range");
  const Fp zc = pt.z[chart], dzc = pt.dz[chart];
  if (zc.is_zero()) throw PreconditionError("point not in chart");
  const Fp inv = zc.inverse(), inv2 = inv * inv;
  CoverPoint out;
  out.interior = pt.interior;
  for (std::size_t i = 0; i < pt.z.size(); ++i) {
    out.z.push_back(pt.z[i] * inv);
    out.dz.push_back((pt.dz[i] * zc - pt.z[i] * dzc) * inv2);
  }
  return out;
}

Fp evaluate_in_chart(const MPoly& f, const CoverPoint& pt, std::size_t chart) {
  const CoverPoint y = to_chart_point(pt, chart);
  return evaluate(f, y.z, y.dz);
}

SampledChartReport sampled_chart_check(const TwistedSection& sec, std::size_t chart,
                                       std::uint64_t p, std::uint64_t samples,
                                       std::uint64_t seed) {
  const MPoly s0 = sec.charts.count(0) ? sec.expression(0) : generate_sigma(sec.cover, sec.rows, 0);
  const MPoly sc = sec.charts.count(chart) ? sec.expression(chart)
                                           : generate_sigma(sec.cover, sec.rows, chart);
  CoverSampler sampler(sec.cover, p, seed);
  SampledChartReport out;
  for (std::uint64_t s = 0; s < samples; ++s) {
    const CoverPoint pt = sampler.next();
    ++out.samples;
    const Fp lhs = evaluate(s0, pt.z, pt.dz);
    const Fp rhs = signed_pow(pt.z[chart], sec.twist) * evaluate_in_chart(sc, pt, chart);
    if (!(lhs == rhs)) ++out.mismatches;
  }
  return out;
}

BaseLocusReport baselocus_evidence(const FermatCover& cov, std::uint64_t p,
                                   std::uint64_t samples, std::uint64_t seed) {
  BaseLocusReport out;
  out.prime = p;
  out.seed = seed;
  const std::size_t n = cov.n;
  if (cov.m <= 2 * n + 1) {
    out.precondition_failure = "twist not negative: m = " + std::to_string(cov.m) +
                               " <= 2n+1 = " + std::to_string(2 * n + 1);
    return out;
  }
  const std::size_t need = binomial(n + 1, 2);
  const std::size_t r = rank(build_A2(n, cov.A).entries);
  if (r != need) {
    out.precondition_failure = "A_(2) not of full row rank: rank " + std::to_string(r) +
                               " < " + std::to_string(need);
    return out;
  }
  out.bw_exact = verify_bw_factorization(cov);

  CoverSampler sampler(cov, p, seed);
  for (std::uint64_t s = 0; s < samples; ++s) {
    const CoverPoint pt = sampler.next();
    ++out.samples;
    const RankWitness wit = rank_W_minor(cov, pt);
    if (!out.first_witness) out.first_witness = wit;
    const std::size_t rw = rank(evaluate_W(cov, pt));
    const std::size_t rb = rank(evaluate_B(cov, pt));
    if (rw >= wit.bound) ++out.bound_certified;
    if (rw == rb) ++out.rank_equal;
    if (rw < n || rb != rw) ++out.counterexamples;
  }
  out.trials = sampler.trials();
  out.statement =
      "at each of the " + std::to_string(out.samples) +
      " sampled interior points of P(Omega_Y) over F_" + std::to_string(p) +
      (out.passed() ? ", rank B = rank W >= n, so the sigma-minors do not all vanish there"
                    : ", the rank condition failed at some point") +
      "; sampled evidence only, unsampled points are not examined";
  return out;
}

}  // namespace orbicert
