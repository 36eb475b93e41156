#include "doctest.h"

#include "orbicert/differentials.hpp"
#include "orbicert/error.hpp"
#include "support/fixtures.hpp"

using namespace orbicert;
using namespace orbicert::testing;

namespace {

MPoly zero_fibers(MPoly f, std::size_t N) {
  for (std::uint32_t i = 0; i <= N; ++i) f = f.substitute(Variable::fiber(i), MPoly());
  return f;
}

FermatCover n3_cover(std::uint32_t m) {
  Rng rng(99);
  return cover_of(random_general_arrangement(3, 10, rng), m);
}

}  // namespace

TEST_CASE("chart 0 expression for n = 2") {
  const FermatCover cov = cover_of(noguchi_arrangement(), 6);
  const auto& A = cov.A;
  const MPoly expected = (w(1, 3) * w(2, 4)).scale(A(0, 1) * A(1, 2)) -
                         (w(2, 3) * w(1, 4)).scale(A(0, 2) * A(1, 1));
  const CoverIdealRewriter rw = chart_rewriter(cov, 0);
  CHECK(generate_sigma(cov, {3, 4}, 0) == rw.to_chart(expected));
  CHECK(generate_sigma(cov, {4, 3}, 0) == -generate_sigma(cov, {3, 4}, 0));
  for (std::size_t c = 0; c <= cov.N(); ++c)
    CHECK(zero_fibers(generate_sigma(cov, {3, 4}, c), cov.N()).is_zero());
}

TEST_CASE("chart 0 expression does not depend on m") {
  const Arrangement a = noguchi_arrangement();
  for (std::uint32_t m : {3u, 7u, 9u})
    CHECK(generate_sigma(cover_of(a, m), {3, 5}, 0) == generate_sigma(cover_of(a, 6), {3, 5}, 0));
}

TEST_CASE("section metadata") {
  const FermatCover cov = cover_of(noguchi_arrangement(), 6);
  const TwistedSection sec = generate_section(cov, default_rows(cov));
  CHECK(sec.rows == IndexSet{3, 4});
  CHECK(sec.twist == -1);
  CHECK(sec.symmetric_degree == 2);
  CHECK(sec.charts.size() == 6);
  CHECK_THROWS_AS(generate_sigma(cov, {3, 3}, 0), PreconditionError);
  CHECK_THROWS_AS(generate_sigma(cov, {3, 4}, 6), PreconditionError);
}

TEST_CASE("Cramer annihilation") {
  const FermatCover cov = cover_of(noguchi_arrangement(), 6);
  for (const IndexSet& rows : {IndexSet{3, 4}, IndexSet{3, 5}, IndexSet{4, 5}, IndexSet{5, 3}})
    CHECK(verify_cramer_annihilation(cov, rows));

  RationalMatrix bad = cov.A;
  bad(0, 1) += 1;
  CHECK_FALSE(verify_cramer_annihilation(cov, {3, 4}, bad));

  // k = n: the only row set, in both orders.
  const FermatCover sq = cover_of(noguchi_arrangement().subset(IndexSet{0, 1, 2, 3, 4}), 6);
  CHECK(sq.k() == 2);
  CHECK(verify_cramer_annihilation(sq, {3, 4}));
  CHECK(verify_cramer_annihilation(sq, {4, 3}));
}

TEST_CASE("chart compatibility, Noguchi cover") {
  const FermatCover cov = cover_of(noguchi_arrangement(), 6);
  const TwistedSection sec = generate_section(cov, default_rows(cov));
  const std::uint64_t p = default_prime(cov.m);
  for (std::size_t c = 0; c <= cov.N(); ++c) {
    INFO("chart " << c);
    CHECK(verify_chart_compatibility(sec, c, c));
    if (c == 0) continue;
    CHECK(verify_chart_compatibility(sec, 0, c));
    CHECK(sampled_chart_check(sec, c, p, 100, 7 + c).mismatches == 0);
  }
  CHECK(verify_chart_compatibility(sec, 1, 4));
  CHECK(verify_chart_compatibility(sec, 5, 2));
}

TEST_CASE("chart compatibility rejects wrong signs and the wrong border row") {
  const FermatCover cov = cover_of(noguchi_arrangement(), 6);
  const IndexSet rows = default_rows(cov);
  const TwistedSection sec = generate_section(cov, rows);
  for (std::size_t c = 1; c <= cov.N(); ++c) {
    TwistedSection bad = sec;
    bad.charts[c] = -bad.charts[c];
    INFO("chart " << c);
    CHECK_FALSE(verify_chart_compatibility(bad, 0, c));
  }
  // Chart n+2 bordered with the coefficients of relation 1 instead of 2.
  PolyMatrix bordered;
  std::vector<MPoly> top;
  for (std::uint32_t i = 0; i <= cov.n; ++i) top.push_back(z(i).scale(cov.A(0, i)));
  bordered.push_back(top);
  for (const auto& row : cramer_matrix(cov, rows)) bordered.push_back(row);
  const MPoly wrong = chart_rewriter(cov, 4).to_chart(poly_det(bordered));
  TwistedSection lit = sec;
  for (const MPoly& e : {wrong, MPoly(-wrong)}) {
    lit.charts[4] = e;
    CHECK_FALSE(verify_chart_compatibility(lit, 0, 4));
  }
  CHECK(sampled_chart_check(lit, 4, default_prime(6), 20, 1).mismatches > 0);
}

TEST_CASE("chart compatibility for n = 3") {
  const FermatCover cov = n3_cover(8);
  const TwistedSection sec = generate_section(cov, default_rows(cov), {0});
  for (std::size_t c : {1u, 2u, 4u, 7u}) CHECK(verify_chart_compatibility(sec, 0, c));
}

TEST_CASE("extra vanishing order is m - 1") {
  const Arrangement a = noguchi_arrangement();
  for (std::uint32_t m : {6u, 7u}) {
    const FermatCover cov = cover_of(a, m);
    const TwistedSection sec = generate_section(cov, default_rows(cov), {0});
    CHECK(extra_vanishing_order(sec, 0, 1) == m - 1);
    CHECK(extra_vanishing_order(sec, 0, 3) == m - 1);
    CHECK(extra_vanishing_order(sec, 0, 2) == m - 1);
    CHECK(extra_vanishing_order(sec, 1, 0) == m - 1);
    CHECK(extra_vanishing_order(sec, 0, 5) == m - 1);
  }
  const FermatCover cov = n3_cover(8);
  const TwistedSection sec = generate_section(cov, default_rows(cov), {0});
  CHECK(extra_vanishing_order(sec, 0, 1) == 7);
  CHECK(extra_vanishing_order(sec, 0, 4) == 7);
  CHECK_THROWS_AS(extra_vanishing_order(sec, 4, 0), PreconditionError);
}

TEST_CASE("B-W factorization") {
  const FermatCover cov = cover_of(noguchi_arrangement(), 6);
  CHECK(verify_bw_factorization(cov));
  const BWFactorization bw = build_bw(cov);
  CHECK(bw.B.size() == 3);
  CHECK(bw.W.size() == 3);
  CHECK(bw.W.front().size() == 3);
  for (std::size_t r = 0; r < bw.W.size(); ++r) {
    const auto [p, q] = bw.A2.row_pairs[r];
    MPoly sum;
    for (const auto& e : bw.W[r]) sum += e;
    CHECK(sum.is_zero());
    CHECK(bw.W[r][p] == chart_rewriter(cov, 0).to_chart(w(p, q)));
  }

  const FermatCover k1 = cover_of(noguchi_arrangement().subset(IndexSet{0, 1, 2, 3}), 6);
  CHECK(k1.k() == 1);
  CHECK(verify_bw_factorization(k1));

  CHECK(verify_bw_factorization(n3_cover(8)));

  A2Matrix broken = build_A2(cov.n, cov.A);
  broken.entries(0, 0) = 0;
  CHECK_FALSE(verify_bw_factorization(cov, broken));
}

TEST_CASE("unweighted B-W display is not an identity on the cover") {
  // z_{n+j}^{m-1} b_{i1}^j - sum_{i2} a_{i1}^j a_{i2}^j w_{i1,i2}
  const FermatCover cov = cover_of(noguchi_arrangement(), 6);
  const CoverIdealRewriter rw = chart_rewriter(cov, 0);
  std::size_t nonzero = 0;
  for (std::size_t j = 1; j <= cov.k(); ++j)
    for (std::uint32_t i1 = 0; i1 <= cov.n; ++i1) {
      const auto e = static_cast<std::uint32_t>(cov.n + j);
      MPoly r = (z(e).pow(cov.m - 1) * w(i1, e)).scale(cov.A(j - 1, i1));
      for (std::uint32_t i2 = 0; i2 <= cov.n; ++i2)
        r -= w(i1, i2).scale(cov.A(j - 1, i1) * cov.A(j - 1, i2));
      nonzero += !rw.is_zero_mod_ideal(r);
    }
  CHECK(nonzero == 9);
}

TEST_CASE("rank witness for W") {
  const FermatCover cov = cover_of(noguchi_arrangement(), 6);
  const std::uint64_t p = default_prime(6);
  CoverPoint pt;
  for (int i = 0; i <= 5; ++i) {
    pt.z.push_back(Fp(i + 1, p));
    pt.dz.push_back(Fp(i == 0 ? 0 : 1, p));
  }
  pt.interior = true;
  const RankWitness rw = rank_W_minor(cov, pt);
  using P = std::pair<std::size_t, std::size_t>;
  CHECK(rw.bound == 2);
  CHECK(rw.rows == std::vector<P>{{0, 1}, {0, 2}});
  CHECK(rw.cols == IndexSet{1, 2});
  CHECK((rw.minor == Fp(1, p) || rw.minor == Fp(-1, p)));

  CoverPoint flat = pt;
  for (auto& x : flat.dz) x = Fp(0, p);
  CHECK_THROWS_AS(rank_W_minor(cov, flat), PreconditionError);

  // Zero first tangent coordinate: the pivot moves to z_2'.
  CoverPoint shifted = pt;
  shifted.dz[1] = Fp(0, p);
  const RankWitness r2 = rank_W_minor(cov, shifted);
  CHECK(r2.pivot == 2);
  CHECK_FALSE(r2.minor.is_zero());
}

TEST_CASE("rank B equals rank W at sampled points") {
  const FermatCover cov = cover_of(noguchi_arrangement(), 6);
  const std::uint64_t p = default_prime(6);
  CoverSampler sampler(cov, p, 31);
  for (int t = 0; t < 100; ++t) {
    const CoverPoint pt = sampler.next();
    const std::size_t rw = rank(evaluate_W(cov, pt));
    CHECK(rw == rank(evaluate_B(cov, pt)));
    CHECK(rw >= cov.n);
    CHECK(rank_W_minor(cov, pt).bound == cov.n);
  }
}

TEST_CASE("base-locus evidence") {
  const FermatCover cov = cover_of(noguchi_arrangement(), 6);
  const BaseLocusReport r = baselocus_evidence(cov, default_prime(6), 200, 3);
  CHECK(r.passed());
  CHECK(r.bw_exact);
  CHECK(r.samples == 200);
  CHECK(r.prime == default_prime(6));
  CHECK(r.statement.find("sampled evidence only") != std::string::npos);
  const BaseLocusReport again = baselocus_evidence(cov, default_prime(6), 200, 3);
  CHECK(again.trials == r.trials);

  const FermatCover low = cover_of(noguchi_arrangement(), 5);
  const BaseLocusReport lr = baselocus_evidence(low, default_prime(5), 10, 3);
  REQUIRE(lr.precondition_failure.has_value());
  CHECK(lr.precondition_failure->find("twist not negative") != std::string::npos);
  CHECK_FALSE(lr.passed());

  const FermatCover conic = cover_of(dual_conic_arrangement(), 6);
  const BaseLocusReport cr = baselocus_evidence(conic, default_prime(6), 10, 3);
  REQUIRE(cr.precondition_failure.has_value());
  CHECK(cr.precondition_failure->find("A_(2)") != std::string::npos);
}
